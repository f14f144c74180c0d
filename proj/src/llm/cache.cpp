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

#include "facenum/llm/cache.hpp"

#include <unistd.h>

#include <fstream>

#include "facenum/digest.hpp"

namespace facenum {

namespace fs = std::filesystem;

std::string cache_key_digest(const CacheKeyInputs& inputs) {
    ojson doc;
    doc["image_bytes_digest"] = inputs.image_bytes_digest;
    doc["overlay_digest"] = inputs.overlay_digest;
    doc["query"] = json::parse(canonical_json(inputs.kind));
    doc["prompt_template_version"] = inputs.prompt_template_version;
    doc["backend_name"] = inputs.backend_name;
    return sha256_hex(doc.dump());
}

DiskCache::DiskCache(fs::path dir) : dir_(std::move(dir)) {
    fs::create_directories(dir_);
}

fs::path DiskCache::path_for(const std::string& key_digest) const {
    return dir_ / (key_digest + ".json");
}

std::optional<CachedAnswer> DiskCache::get(const std::string& key_digest) {
    const fs::path path = path_for(key_digest);
    std::error_code ec;
    if (!fs::exists(path, ec)) return std::nullopt;
    const json doc = load_json_file(path);
    CachedAnswer entry;
    entry.answer = ModelAnswer::from_json(require_field(doc, "answer", path.string()));
    entry.meta = doc.value("meta", json::object());
    return entry;
}

void DiskCache::put(const std::string& key_digest, const CachedAnswer& value) {
    const fs::path path = path_for(key_digest);
    std::error_code ec;
    if (fs::exists(path, ec)) return;  // first writer wins
    ojson doc;
    doc["answer"] = value.answer.to_json();
    doc["meta"] = value.meta;
    const fs::path tmp = path.string() + ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot write cache entry '" + tmp.string() + "'");
        out << doc.dump(2) << "\n";
    }
    // link() refuses to clobber, which is exactly first-writer-wins under
    // concurrent insertion of the same key.
    if (::link(tmp.c_str(), path.c_str()) != 0 && !fs::exists(path, ec)) {
        fs::rename(tmp, path, ec);
        if (ec) throw ConfigError("cannot publish cache entry '" + path.string() + "'");
        return;
    }
    fs::remove(tmp, ec);
}

std::optional<CachedAnswer> MemoryCache::get(const std::string& key_digest) {
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key_digest);
    if (it == entries_.end()) return std::nullopt;
    return it->second;
}

void MemoryCache::put(const std::string& key_digest, const CachedAnswer& value) {
    std::lock_guard lock(mutex_);
    entries_.emplace(key_digest, value);  // emplace keeps the first writer
}

std::size_t MemoryCache::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

}  // namespace facenum
