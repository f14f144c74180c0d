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

#include "facenum/overlay.hpp"

#include <cmath>

#include "facenum/digest.hpp"
#include "facenum/raster.hpp"

namespace facenum {

void OverlaySpec::validate() const {
    if (stroke_width_px < 1) throw ValidationError("stroke_width_px must be >= 1");
    for (const auto& [door, role] : boxes) {
        if (!door.box.valid()) {
            throw ValidationError("overlay box for door " + std::to_string(door.door_id) +
                                  " has no area");
        }
    }
}

int effective_stroke(int stroke_width_px, int width, int height) {
    const int scale =
        std::max(1, static_cast<int>(std::lround(std::min(width, height) / 640.0)));
    return stroke_width_px * scale;
}

OverlayResult render_overlay(std::span<const std::uint8_t> image_bytes,
                             const OverlaySpec& spec) {
    spec.validate();
    Image img = decode_image(image_bytes);
    const int stroke = effective_stroke(spec.stroke_width_px, img.width(), img.height());
    for (const auto& [door, role] : spec.boxes) {
        const Box clamped = clamp_box(door.box, img.width(), img.height());
        if (!clamped.valid()) continue;  // fully outside: nothing to draw
        const auto& c = spec.colors.at(role);
        img.stroke_rect(clamped, stroke, Rgb{c[0], c[1], c[2]});
    }
    OverlayResult out;
    out.png = encode_png(img);
    out.overlay_digest = sha256_hex(out.png);
    return out;
}

OverlayMemo& OverlayMemo::global() {
    static OverlayMemo memo;
    return memo;
}

OverlayResult OverlayMemo::get_or_render(std::span<const std::uint8_t> image_bytes,
                                         const std::string& image_digest,
                                         const OverlaySpec& spec) {
    std::string key = image_digest + "|" + std::to_string(spec.stroke_width_px);
    for (const auto& [door, role] : spec.boxes) {
        const auto& c = spec.colors.at(role);
        key += "|" + std::to_string(door.box.x_min) + "," + std::to_string(door.box.y_min) +
               "," + std::to_string(door.box.x_max) + "," + std::to_string(door.box.y_max) +
               "," + std::to_string(static_cast<int>(role)) + "," + std::to_string(c[0]) +
               "," + std::to_string(c[1]) + "," + std::to_string(c[2]);
    }
    {
        std::lock_guard lock(mutex_);
        auto it = entries_.find(key);
        if (it != entries_.end()) return it->second;
    }
    OverlayResult rendered = render_overlay(image_bytes, spec);
    std::lock_guard lock(mutex_);
    auto [it, inserted] = entries_.emplace(key, rendered);
    if (inserted) {
        order_.push_back(key);
        if (order_.size() > max_entries_) {
            entries_.erase(order_.front());
            order_.erase(order_.begin());
        }
    }
    return it->second;
}

std::size_t OverlayMemo::size() const {
    std::lock_guard lock(mutex_);
    return entries_.size();
}

void OverlayMemo::clear() {
    std::lock_guard lock(mutex_);
    entries_.clear();
    order_.clear();
}

}  // namespace facenum
