// Copyright 2026 The facenum Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <memory>

#include "facenum/llm/backend.hpp"
#include "facenum/llm/cache.hpp"
#include "facenum/llm/prompts.hpp"

namespace facenum {

/// The raster a query is asked about, with the digests that key its cache
/// entry: the original plan bytes and the rendered overlay bytes.
struct QueryImage {
    std::vector<std::uint8_t> png;
    std::string overlay_digest;
    std::string plan_digest;
};

struct GatewayOptions {
    int parse_reprompts = 1;   // structured retries before giving up on a reply
    int max_concurrency = 4;   // callers may issue this many asks in parallel
};

/// Answered-query record, as returned by Gateway::ask.
struct AskOutcome {
    ModelAnswer answer;
    std::string cache_key;
    bool cache_hit = false;
};

/// Uniform entry point for the three query kinds. ask() is pure for a fixed
/// backend response function: equal key inputs return equal answers and hit
/// the backend at most once when a cache is attached.
class Gateway {
public:
    Gateway(std::shared_ptr<Backend> backend, std::shared_ptr<AnswerCache> cache,
            PromptLibrary prompts = PromptLibrary::builtin(),
            std::map<FacilityType, std::string> profiles = default_facility_profiles(),
            GatewayOptions options = {});

    AskOutcome ask(const QueryKind& kind, const QueryImage& image);

    Backend& backend() { return *backend_; }
    const PromptLibrary& prompts() const { return prompts_; }
    int max_concurrency() const { return options_.max_concurrency; }

private:
    ModelAnswer interpret(const QueryKind& kind, const std::string& raw) const;

    std::shared_ptr<Backend> backend_;
    std::shared_ptr<AnswerCache> cache_;  // may be null (caching disabled)
    PromptLibrary prompts_;
    std::map<FacilityType, std::string> profiles_;
    GatewayOptions options_;
};

}  // namespace facenum
