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

#include "facenum/llm/gateway.hpp"

#include "facenum/digest.hpp"
#include "facenum/llm/parse.hpp"

namespace facenum {

Gateway::Gateway(std::shared_ptr<Backend> backend, std::shared_ptr<AnswerCache> cache,
                 PromptLibrary prompts, std::map<FacilityType, std::string> profiles,
                 GatewayOptions options)
    : backend_(std::move(backend)),
      cache_(std::move(cache)),
      prompts_(std::move(prompts)),
      profiles_(std::move(profiles)),
      options_(options) {
    if (!backend_) throw ConfigError("gateway needs a backend");
}

ModelAnswer Gateway::interpret(const QueryKind& kind, const std::string& raw) const {
    ModelAnswer answer;
    answer.raw_text = raw;
    answer.reason_text = extract_reason(raw);
    if (std::holds_alternative<OmissionQuery>(kind)) {
        answer.count = parse_count(raw);
    } else {
        answer.verdict = parse_verdict(raw);
    }
    return answer;
}

AskOutcome Gateway::ask(const QueryKind& kind, const QueryImage& image) {
    if (image.png.empty()) throw ValidationError("query image is empty");

    AskOutcome outcome;
    outcome.cache_key = cache_key_digest({image.plan_digest, image.overlay_digest, kind,
                                          prompts_.version(), backend_->name()});
    if (cache_) {
        if (auto hit = cache_->get(outcome.cache_key)) {
            outcome.answer = hit->answer;
            outcome.cache_hit = true;
            return outcome;
        }
    }

    const std::string profile = [&] {
        if (const auto* c = std::get_if<ConnectionQuery>(&kind)) {
            return profiles_.count(c->facility) ? profiles_.at(c->facility) : std::string();
        }
        if (const auto* o = std::get_if<OmissionQuery>(&kind)) {
            return profiles_.count(o->facility) ? profiles_.at(o->facility) : std::string();
        }
        return std::string();
    }();
    const std::string prompt = prompts_.build(kind, profile);

    std::string raw = backend_->complete(kind, prompt, image.png);
    try {
        outcome.answer = interpret(kind, raw);
    } catch (const ParseError&) {
        if (options_.parse_reprompts < 1) throw;
        // One structured reprompt before giving up on the reply.
        const std::string strict =
            std::holds_alternative<OmissionQuery>(kind)
                ? "\nAnswer strictly with a single non-negative integer."
                : "\nAnswer strictly 'yes' or 'no'.";
        raw = backend_->complete(kind, prompt + strict, image.png);
        outcome.answer = interpret(kind, raw);  // ParseError propagates with raw text
    }

    if (cache_) {
        CachedAnswer entry;
        entry.answer = outcome.answer;
        entry.meta["backend"] = backend_->name();
        entry.meta["prompt_template_version"] = prompts_.version();
        entry.meta["query"] = json::parse(canonical_json(kind));
        entry.meta["image_bytes_digest"] = image.plan_digest;
        entry.meta["overlay_digest"] = image.overlay_digest;
        entry.meta["prompt_sha256"] = sha256_hex(prompt);
        cache_->put(outcome.cache_key, entry);
    }
    return outcome;
}

}  // namespace facenum
