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

#include <atomic>
#include <cstdint>
#include <memory>
#include <span>
#include <string>

#include "facenum/llm/query.hpp"

namespace facenum {

/// A model that answers one query about one raster, returning free text.
/// Implementations must be safe for concurrent complete() calls.
class Backend {
public:
    virtual ~Backend() = default;

    /// Stable identifier; part of every cache key, so distinct behaviors must
    /// report distinct names.
    virtual std::string name() const = 0;

    /// Returns the raw reply text. Throws TransportError after bounded
    /// retries, ProtocolError on a malformed peer payload.
    virtual std::string complete(const QueryKind& kind, const std::string& prompt,
                                 std::span<const std::uint8_t> image_png) = 0;

    /// Number of complete() calls that reached this backend (cache hits never
    /// do). An external meter can additionally be shared across backends to
    /// count a whole run.
    long long invocations() const { return local_calls_.load(); }
    void share_meter(std::shared_ptr<std::atomic<long long>> meter) { meter_ = std::move(meter); }

protected:
    void count_call() {
        local_calls_.fetch_add(1);
        if (meter_) meter_->fetch_add(1);
    }

private:
    std::atomic<long long> local_calls_{0};
    std::shared_ptr<std::atomic<long long>> meter_;
};

}  // namespace facenum
