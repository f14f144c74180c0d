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
#include <mutex>
#include <optional>
#include <string>

#include "facenum/llm/query.hpp"

namespace facenum {

/// Everything that identifies one model query. Any field change produces a
/// different key digest.
struct CacheKeyInputs {
    std::string image_bytes_digest;
    std::string overlay_digest;
    QueryKind kind;
    std::string prompt_template_version;
    std::string backend_name;
};

/// sha-256 over the canonical serialization of the inputs.
std::string cache_key_digest(const CacheKeyInputs& inputs);

struct CachedAnswer {
    ModelAnswer answer;
    ojson meta;  // backend, template version, query, digests, prompt hash
};

/// Answer store keyed by cache-key digest. Implementations allow concurrent
/// readers; insertion is first-writer-wins per key.
class AnswerCache {
public:
    virtual ~AnswerCache() = default;
    virtual std::optional<CachedAnswer> get(const std::string& key_digest) = 0;
    virtual void put(const std::string& key_digest, const CachedAnswer& value) = 0;
};

/// One JSON file per key digest under a directory; replayable across runs.
class DiskCache : public AnswerCache {
public:
    explicit DiskCache(std::filesystem::path dir);
    std::optional<CachedAnswer> get(const std::string& key_digest) override;
    void put(const std::string& key_digest, const CachedAnswer& value) override;
    const std::filesystem::path& dir() const { return dir_; }

private:
    std::filesystem::path path_for(const std::string& key_digest) const;
    std::filesystem::path dir_;
};

/// In-process cache for tests and single-shot runs.
class MemoryCache : public AnswerCache {
public:
    std::optional<CachedAnswer> get(const std::string& key_digest) override;
    void put(const std::string& key_digest, const CachedAnswer& value) override;
    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::map<std::string, CachedAnswer> entries_;
};

}  // namespace facenum
