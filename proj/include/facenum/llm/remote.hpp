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

#include <chrono>
#include <condition_variable>
#include <mutex>

#include "facenum/llm/backend.hpp"

namespace facenum {

/// Remote chat-completions settings. URL/key/model fall back to the
/// FE_LLM_URL / FE_LLM_KEY / FE_LLM_MODEL environment variables.
struct RemoteConfig {
    std::string url;
    std::string api_key;
    std::string model;
    int max_attempts = 3;
    int retry_base_ms = 200;
    int timeout_sec = 120;
    int max_in_flight = 4;
    double requests_per_sec = 0.0;  // 0 disables rate limiting

    /// Fills empty fields from the environment; ConfigError when a required
    /// field is still missing afterwards.
    static RemoteConfig resolve(RemoteConfig base);
};

/// Simple token bucket; also bounds the number of in-flight requests.
class RateLimiter {
public:
    RateLimiter(int max_in_flight, double requests_per_sec);
    ~RateLimiter() = default;

    class Slot {
    public:
        explicit Slot(RateLimiter& limiter);
        ~Slot();
        Slot(const Slot&) = delete;
        Slot& operator=(const Slot&) = delete;

    private:
        RateLimiter& limiter_;
    };

private:
    void acquire();
    void release();

    std::mutex mutex_;
    std::condition_variable cv_;
    int max_in_flight_;
    int in_flight_ = 0;
    double rate_;
    double tokens_;
    std::chrono::steady_clock::time_point last_refill_;
};

/// OpenAI-compatible chat-completions backend sending [prompt text, base64
/// PNG] as one user message. Retries transport-level failures and 5xx/429
/// with exponential backoff.
class RemoteBackend : public Backend {
public:
    explicit RemoteBackend(RemoteConfig cfg);

    std::string name() const override { return "remote:" + cfg_.model; }
    std::string complete(const QueryKind& kind, const std::string& prompt,
                         std::span<const std::uint8_t> image_png) override;

private:
    RemoteConfig cfg_;
    RateLimiter limiter_;
};

std::string base64_encode(std::span<const std::uint8_t> bytes);

}  // namespace facenum
