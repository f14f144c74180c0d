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
#include <string>
#include <string_view>
#include <vector>

#include "facenum/errors.hpp"

namespace facenum {

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

/// Axis-aligned pixel rectangle in corner form. Origin is the top-left of the
/// image, x grows rightward, y grows downward. A valid box has positive area.
struct Box {
    int x_min = 0;
    int y_min = 0;
    int x_max = 0;
    int y_max = 0;

    bool valid() const { return x_min < x_max && y_min < y_max; }
    std::int64_t width() const { return x_max - x_min; }
    std::int64_t height() const { return y_max - y_min; }
    std::int64_t area() const { return width() * height(); }
    double center_x() const { return 0.5 * (x_min + x_max); }
    double center_y() const { return 0.5 * (y_min + y_max); }

    bool operator==(const Box&) const = default;
    /// Lexicographic on (x_min, y_min, x_max, y_max); used wherever a
    /// position-stable ordering of boxes is needed.
    auto operator<=>(const Box&) const = default;
};

/// Intersection-over-union of two valid boxes. Symmetric, in [0,1],
/// exactly 1 for identical boxes and 0 for disjoint ones.
double iou(const Box& a, const Box& b);

/// Clamps a box to [0,width] x [0,height]. The result may be degenerate if
/// the box lies fully outside.
Box clamp_box(const Box& b, int width, int height);

// ---------------------------------------------------------------------------
// Domain types
// ---------------------------------------------------------------------------

/// Identity of one floor-plan image: id, content hash and pixel dimensions.
struct FloorPlanRef {
    std::string plan_id;
    std::string image_bytes_digest;  // sha-256 hex of the raster bytes
    int width_px = 0;
    int height_px = 0;
    std::string image_uri;

    void validate() const;
};

/// One detected door: the pipeline's anchor unit.
struct DoorBox {
    int door_id = 0;
    Box box;
    double confidence = 0.0;
};

/// Throws ValidationError unless the door satisfies its invariants within the
/// given plan bounds.
void validate_door(const DoorBox& door, int width_px, int height_px);

/// Closed enumeration of the facility categories the pipeline counts.
enum class FacilityType : std::uint8_t {
    Toilet,
    Kitchen,
    Laundry,
    Exit,
    EmergencyExit,
    FireSafety,
    Accessibility,
    ParkingStandard,
    ParkingAccessible,
};

inline constexpr std::array<FacilityType, 9> kAllFacilityTypes = {
    FacilityType::Toilet,        FacilityType::Kitchen,
    FacilityType::Laundry,       FacilityType::Exit,
    FacilityType::EmergencyExit, FacilityType::FireSafety,
    FacilityType::Accessibility, FacilityType::ParkingStandard,
    FacilityType::ParkingAccessible,
};

/// Serialized names are lowercase-hyphenated and round-trip exactly.
std::string_view to_string(FacilityType type);
FacilityType facility_from_string(std::string_view name);  // ValidationError on unknown names

enum class Verdict : std::uint8_t { Yes, No };

inline std::string_view to_string(Verdict v) { return v == Verdict::Yes ? "yes" : "no"; }

// ---------------------------------------------------------------------------
// Enumeration result
// ---------------------------------------------------------------------------

/// Final outcome of the three-stage pipeline for one (plan, facility type):
/// n_final = |representatives| + n_missing, with the count chain
/// |representatives| <= |connected_doors| <= door_set_size_n.
struct EnumerationResult {
    std::string plan_id;
    FacilityType facility = FacilityType::Toilet;
    int door_set_size_n = 0;            // doors fed into stage 1
    std::vector<int> connected_doors;   // stage-1 survivors, by door id
    std::vector<int> representatives;   // one door per consolidated room
    int n_missing = 0;
    int n_final = 0;

    /// Validating constructor; rejects any field combination that violates
    /// the invariants above (ValidationError).
    static EnumerationResult make(std::string plan_id, FacilityType facility,
                                  int door_set_size_n, std::vector<int> connected_doors,
                                  std::vector<int> representatives, int n_missing,
                                  int n_final);
};

/// n_final = |D_filtered| + n_missing. Both inputs must be >= 0.
int final_count(int representatives_size, int n_missing);

}  // namespace facenum
