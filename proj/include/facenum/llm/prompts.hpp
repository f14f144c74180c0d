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

#include <filesystem>
#include <map>
#include <string>

#include "facenum/llm/query.hpp"

namespace facenum {

/// Versioned prompt templates. Templates are data (see data/prompts_v1.json),
/// not code, so editing them changes the version field and thereby every
/// cache key. The compiled-in default is byte-identical to the v1 data file.
///
/// Every template ends with the literal suffix "tell me the reason"; asking
/// the model to justify itself measurably improves its answers.
class PromptLibrary {
public:
    /// Compiled-in template set. ConfigError for versions this build does not
    /// carry (only "v1").
    static PromptLibrary builtin(const std::string& version = "v1");

    /// Loads a template file; ConfigError on missing keys or a template that
    /// does not end with the suffix placeholder.
    static PromptLibrary load(const std::filesystem::path& path);
    static PromptLibrary from_json(const json& doc, const std::string& context);

    const std::string& version() const { return version_; }

    /// Renders the prompt for a query. Deterministic: equal inputs give
    /// byte-identical text. Connection queries require a nonempty
    /// facility_profile (ConfigError otherwise).
    std::string build(const QueryKind& kind, const std::string& facility_profile) const;

private:
    std::string version_;
    std::string suffix_;
    std::map<std::string, std::string> templates_;
};

/// Built-in descriptive text per facility type, fed into {profile}.
const std::string& default_facility_profile(FacilityType type);
std::map<FacilityType, std::string> default_facility_profiles();

}  // namespace facenum
