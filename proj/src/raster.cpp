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

#include "facenum/raster.hpp"

#include <algorithm>

#include <opencv2/imgcodecs.hpp>

namespace facenum {

Image::Image(int width, int height, Rgb fill) {
    if (width <= 0 || height <= 0) throw ValidationError("image dimensions must be positive");
    mat_ = cv::Mat(height, width, CV_8UC3, cv::Scalar(fill.b, fill.g, fill.r));
}

Rgb Image::at(int x, int y) const {
    const auto& px = mat_.at<cv::Vec3b>(y, x);
    return Rgb{px[2], px[1], px[0]};
}

void Image::set(int x, int y, Rgb color) {
    mat_.at<cv::Vec3b>(y, x) = cv::Vec3b(color.b, color.g, color.r);
}

void Image::fill_rect(const Box& box, Rgb color) {
    const Box c = clamp_box(box, width(), height());
    if (!c.valid()) return;
    for (int y = c.y_min; y < c.y_max; ++y) {
        auto* row = mat_.ptr<cv::Vec3b>(y);
        for (int x = c.x_min; x < c.x_max; ++x) {
            row[x] = cv::Vec3b(color.b, color.g, color.r);
        }
    }
}

void Image::stroke_rect(const Box& box, int stroke, Rgb color) {
    if (stroke < 1) throw ValidationError("stroke width must be >= 1");
    // Centered band of total width `stroke` around each edge.
    const int out = stroke / 2;
    const int in = stroke - 1 - out;
    const Box outer{box.x_min - out, box.y_min - out, box.x_max + out, box.y_max + out};
    const Box inner{box.x_min + in + 1, box.y_min + in + 1, box.x_max - in - 1,
                    box.y_max - in - 1};
    if (!inner.valid()) {
        fill_rect(outer, color);
        return;
    }
    fill_rect({outer.x_min, outer.y_min, outer.x_max, inner.y_min}, color);  // top
    fill_rect({outer.x_min, inner.y_max, outer.x_max, outer.y_max}, color);  // bottom
    fill_rect({outer.x_min, inner.y_min, inner.x_min, inner.y_max}, color);  // left
    fill_rect({inner.x_max, inner.y_min, outer.x_max, inner.y_max}, color);  // right
}

Image Image::crop(const Box& window) const {
    const Box c = clamp_box(window, width(), height());
    if (!c.valid()) throw ValidationError("crop window has no overlap with the image");
    Image out;
    out.mat_ = mat_(cv::Rect(c.x_min, c.y_min, static_cast<int>(c.width()),
                             static_cast<int>(c.height())))
                   .clone();
    return out;
}

Image decode_image(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) throw FormatError("empty image buffer");
    cv::Mat raw(1, static_cast<int>(bytes.size()), CV_8UC1,
                const_cast<std::uint8_t*>(bytes.data()));
    cv::Mat decoded = cv::imdecode(raw, cv::IMREAD_COLOR);
    if (decoded.empty()) throw FormatError("buffer is not a decodable image");
    Image out;
    out.mat() = decoded;
    return out;
}

std::vector<std::uint8_t> encode_png(const Image& image) {
    std::vector<std::uint8_t> out;
    const std::vector<int> params = {cv::IMWRITE_PNG_COMPRESSION, 6,
                                     cv::IMWRITE_PNG_STRATEGY,
                                     cv::IMWRITE_PNG_STRATEGY_DEFAULT};
    if (!cv::imencode(".png", image.mat(), out, params)) {
        throw FormatError("png encoding failed");
    }
    return out;
}

}  // namespace facenum
