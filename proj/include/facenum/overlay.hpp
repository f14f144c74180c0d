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

#include <array>
#include <cstdint>
#include <map>
#include <mutex>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "facenum/types.hpp"

namespace facenum {

struct Rgb;

/// Why a box appears in the overlay: the door under query, or a door retained
/// after consolidation (omission queries highlight all of those).
enum class OverlayRole : std::uint8_t { Queried, Retained };

/// Boxes to draw onto a plan raster before sending it to the model.
struct OverlaySpec {
    std::vector<std::pair<DoorBox, OverlayRole>> boxes;
    int stroke_width_px = 3;
    // Both roles default to pure red.
    std::map<OverlayRole, std::array<std::uint8_t, 3>> colors = {
        {OverlayRole::Queried, {255, 0, 0}},
        {OverlayRole::Retained, {255, 0, 0}},
    };

    void validate() const;
};

struct OverlayResult {
    std::vector<std::uint8_t> png;
    std::string overlay_digest;  // sha-256 hex of `png`
};

/// Stroke width actually drawn: the nominal width scaled up on large plans so
/// boxes stay visible (factor max(1, round(min(w,h)/640))).
int effective_stroke(int stroke_width_px, int width, int height);

/// Draws the spec onto the image and re-encodes as PNG. Deterministic bytes
/// for equal inputs; boxes are clamped to the image, never rejected.
OverlayResult render_overlay(std::span<const std::uint8_t> image_bytes,
                             const OverlaySpec& spec);

/// Rendering is pure, so results can be memoized on (image digest, spec).
/// Bounded; evicts in insertion order. The pipeline goes through the shared
/// instance because one door's overlay is re-requested for every facility
/// type and every re-run over the same plan.
class OverlayMemo {
public:
    explicit OverlayMemo(std::size_t max_entries = 8192) : max_entries_(max_entries) {}

    static OverlayMemo& global();

    OverlayResult get_or_render(std::span<const std::uint8_t> image_bytes,
                                const std::string& image_digest, const OverlaySpec& spec);

    std::size_t size() const;
    void clear();

private:
    mutable std::mutex mutex_;
    std::size_t max_entries_;
    std::map<std::string, OverlayResult> entries_;
    std::vector<std::string> order_;
};

}  // namespace facenum
