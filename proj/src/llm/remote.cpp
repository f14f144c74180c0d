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

#include "facenum/llm/remote.hpp"

#include <cstdlib>
#include <thread>

#include <httplib.h>

namespace facenum {

namespace {

std::string env_or(const char* name, std::string fallback) {
    if (const char* v = std::getenv(name)) return v;
    return fallback;
}

std::pair<std::string, std::string> split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("endpoint '" + url + "' has no scheme");
    }
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/v1/chat/completions"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::string base64_encode(std::span<const std::uint8_t> bytes) {
    static const char* alphabet =
        "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((bytes.size() + 2) / 3 * 4);
    std::size_t i = 0;
    for (; i + 3 <= bytes.size(); i += 3) {
        const std::uint32_t n = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
        out.push_back(alphabet[(n >> 18) & 63]);
        out.push_back(alphabet[(n >> 12) & 63]);
        out.push_back(alphabet[(n >> 6) & 63]);
        out.push_back(alphabet[n & 63]);
    }
    if (i + 1 == bytes.size()) {
        const std::uint32_t n = bytes[i] << 16;
        out.push_back(alphabet[(n >> 18) & 63]);
        out.push_back(alphabet[(n >> 12) & 63]);
        out += "==";
    } else if (i + 2 == bytes.size()) {
        const std::uint32_t n = (bytes[i] << 16) | (bytes[i + 1] << 8);
        out.push_back(alphabet[(n >> 18) & 63]);
        out.push_back(alphabet[(n >> 12) & 63]);
        out.push_back(alphabet[(n >> 6) & 63]);
        out += "=";
    }
    return out;
}

RemoteConfig RemoteConfig::resolve(RemoteConfig base) {
    if (base.url.empty()) base.url = env_or("FE_LLM_URL", "");
    if (base.api_key.empty()) base.api_key = env_or("FE_LLM_KEY", "");
    if (base.model.empty()) base.model = env_or("FE_LLM_MODEL", "");
    if (base.url.empty()) throw ConfigError("remote backend needs FE_LLM_URL");
    if (base.api_key.empty()) throw ConfigError("remote backend needs FE_LLM_KEY");
    if (base.model.empty()) throw ConfigError("remote backend needs FE_LLM_MODEL");
    if (base.max_attempts < 1) throw ConfigError("max_attempts must be >= 1");
    return base;
}

RateLimiter::RateLimiter(int max_in_flight, double requests_per_sec)
    : max_in_flight_(max_in_flight > 0 ? max_in_flight : 1),
      rate_(requests_per_sec),
      tokens_(requests_per_sec > 0 ? 1.0 : 0.0),
      last_refill_(std::chrono::steady_clock::now()) {}

void RateLimiter::acquire() {
    std::unique_lock lock(mutex_);
    cv_.wait(lock, [&] { return in_flight_ < max_in_flight_; });
    ++in_flight_;
    if (rate_ <= 0.0) return;
    for (;;) {
        const auto now = std::chrono::steady_clock::now();
        tokens_ += rate_ * std::chrono::duration<double>(now - last_refill_).count();
        if (tokens_ > static_cast<double>(max_in_flight_)) {
            tokens_ = static_cast<double>(max_in_flight_);
        }
        last_refill_ = now;
        if (tokens_ >= 1.0) {
            tokens_ -= 1.0;
            return;
        }
        const auto wait = std::chrono::duration<double>((1.0 - tokens_) / rate_);
        lock.unlock();
        std::this_thread::sleep_for(wait);
        lock.lock();
    }
}

void RateLimiter::release() {
    {
        std::lock_guard lock(mutex_);
        --in_flight_;
    }
    cv_.notify_one();
}

RateLimiter::Slot::Slot(RateLimiter& limiter) : limiter_(limiter) { limiter_.acquire(); }
RateLimiter::Slot::~Slot() { limiter_.release(); }

RemoteBackend::RemoteBackend(RemoteConfig cfg)
    : cfg_(RemoteConfig::resolve(std::move(cfg))),
      limiter_(cfg_.max_in_flight, cfg_.requests_per_sec) {}

std::string RemoteBackend::complete(const QueryKind& kind, const std::string& prompt,
                                    std::span<const std::uint8_t> image_png) {
    (void)kind;
    RateLimiter::Slot slot(limiter_);
    count_call();

    ojson body;
    body["model"] = cfg_.model;
    ojson content = ojson::array();
    content.push_back({{"type", "text"}, {"text", prompt}});
    content.push_back(
        {{"type", "image_url"},
         {"image_url",
          {{"url", "data:image/png;base64," + base64_encode(image_png)}}}});
    body["messages"] = ojson::array({ojson{{"role", "user"}, {"content", content}}});
    const std::string payload = body.dump();

    const auto [base, path] = split_url(cfg_.url);
    std::string last_failure;
    for (int attempt = 1; attempt <= cfg_.max_attempts; ++attempt) {
        httplib::Client client(base);
        client.set_connection_timeout(10);
        client.set_read_timeout(cfg_.timeout_sec);
        httplib::Headers headers = {{"Authorization", "Bearer " + cfg_.api_key}};
        auto res = client.Post(path, headers, payload, "application/json");
        if (!res) {
            last_failure = "connection to " + cfg_.url + " failed: " +
                           httplib::to_string(res.error());
        } else if (res->status >= 500 || res->status == 429) {
            last_failure = cfg_.url + " replied " + std::to_string(res->status);
        } else if (res->status != 200) {
            throw ProtocolError("chat endpoint replied " + std::to_string(res->status) +
                                ": " + res->body);
        } else {
            json reply;
            try {
                reply = json::parse(res->body);
            } catch (const json::parse_error& e) {
                throw ProtocolError("chat payload is not JSON: " + std::string(e.what()));
            }
            try {
                const auto& choices = reply.at("choices");
                if (!choices.is_array() || choices.empty()) {
                    throw ProtocolError("chat payload has no choices");
                }
                const auto& content_field = choices[0].at("message").at("content");
                if (content_field.is_string()) return content_field.get<std::string>();
                if (content_field.is_array()) {
                    std::string text;
                    for (const auto& part : content_field) {
                        if (part.value("type", "") == "text") text += part.value("text", "");
                    }
                    return text;
                }
                throw ProtocolError("chat payload content has unexpected type");
            } catch (const json::exception& e) {
                throw ProtocolError("chat payload missing fields: " + std::string(e.what()));
            }
        }
        if (attempt < cfg_.max_attempts) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(cfg_.retry_base_ms << (attempt - 1)));
        }
    }
    throw TransportError(last_failure, cfg_.max_attempts);
}

}  // namespace facenum
