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

#include <cstdint>
#include <span>
#include <vector>

#include <opencv2/core.hpp>

#include "facenum/types.hpp"

namespace facenum {

struct Rgb {
    std::uint8_t r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

inline constexpr Rgb kRed{255, 0, 0};
inline constexpr Rgb kBlack{0, 0, 0};
inline constexpr Rgb kWhite{255, 255, 255};

/// 8-bit BGR raster. Thin wrapper over cv::Mat so pixel access stays in one
/// place and callers never depend on OpenCV types directly.
class Image {
public:
    Image() = default;
    Image(int width, int height, Rgb fill = kWhite);

    int width() const { return mat_.cols; }
    int height() const { return mat_.rows; }

    Rgb at(int x, int y) const;
    void set(int x, int y, Rgb color);

    /// Fills the box (clamped to bounds) with a solid color.
    void fill_rect(const Box& box, Rgb color);

    /// Draws a rectangle outline of total thickness `stroke`, centered on the
    /// box edges and clamped to the image. Pixels farther than `stroke` from
    /// the outline are untouched.
    void stroke_rect(const Box& box, int stroke, Rgb color);

    /// Deep copy of the window (clamped to bounds).
    Image crop(const Box& window) const;

    cv::Mat& mat() { return mat_; }
    const cv::Mat& mat() const { return mat_; }

private:
    cv::Mat mat_;  // CV_8UC3, BGR
};

/// Decodes PNG (or any raster cv::imdecode understands) into BGR.
/// FormatError when the bytes are not a decodable image.
Image decode_image(std::span<const std::uint8_t> bytes);

/// Encodes to PNG with pinned encoder settings so equal images produce equal
/// bytes across runs (cache keys depend on this).
std::vector<std::uint8_t> encode_png(const Image& image);

}  // namespace facenum
