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

#include "facenum/types.hpp"

#include <algorithm>
#include <set>

namespace facenum {

const char* to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::Validation: return "validation error";
        case ErrorKind::Schema: return "schema error";
        case ErrorKind::Parse: return "parse error";
        case ErrorKind::Config: return "config error";
        case ErrorKind::Transport: return "transport error";
        case ErrorKind::Protocol: return "protocol error";
        case ErrorKind::Format: return "format error";
        case ErrorKind::Generation: return "generation error";
        case ErrorKind::Usage: return "usage error";
    }
    return "error";
}

double iou(const Box& a, const Box& b) {
    const std::int64_t ix = std::max<std::int64_t>(
        0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
    const std::int64_t iy = std::max<std::int64_t>(
        0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
    const std::int64_t inter = ix * iy;
    const std::int64_t uni = a.area() + b.area() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

Box clamp_box(const Box& b, int width, int height) {
    Box c;
    c.x_min = std::clamp(b.x_min, 0, width);
    c.x_max = std::clamp(b.x_max, 0, width);
    c.y_min = std::clamp(b.y_min, 0, height);
    c.y_max = std::clamp(b.y_max, 0, height);
    return c;
}

void FloorPlanRef::validate() const {
    if (plan_id.empty()) throw ValidationError("plan_id must be nonempty");
    if (width_px <= 0 || height_px <= 0) {
        throw ValidationError("plan '" + plan_id + "' has non-positive dimensions");
    }
}

void validate_door(const DoorBox& door, int width_px, int height_px) {
    const auto id = std::to_string(door.door_id);
    if (!door.box.valid()) {
        throw ValidationError("door " + id + " has an empty or inverted box");
    }
    if (door.box.x_min < 0 || door.box.y_min < 0 || door.box.x_max > width_px ||
        door.box.y_max > height_px) {
        throw ValidationError("door " + id + " lies outside the plan bounds");
    }
    if (door.confidence < 0.0 || door.confidence > 1.0) {
        throw ValidationError("door " + id + " confidence " +
                              std::to_string(door.confidence) + " outside [0,1]");
    }
}

std::string_view to_string(FacilityType type) {
    switch (type) {
        case FacilityType::Toilet: return "toilet";
        case FacilityType::Kitchen: return "kitchen";
        case FacilityType::Laundry: return "laundry";
        case FacilityType::Exit: return "exit";
        case FacilityType::EmergencyExit: return "emergency-exit";
        case FacilityType::FireSafety: return "fire-safety";
        case FacilityType::Accessibility: return "accessibility";
        case FacilityType::ParkingStandard: return "parking-standard";
        case FacilityType::ParkingAccessible: return "parking-accessible";
    }
    return "unknown";
}

FacilityType facility_from_string(std::string_view name) {
    for (FacilityType t : kAllFacilityTypes) {
        if (to_string(t) == name) return t;
    }
    throw ValidationError("unknown facility type '" + std::string(name) + "'");
}

EnumerationResult EnumerationResult::make(std::string plan_id, FacilityType facility,
                                          int door_set_size_n,
                                          std::vector<int> connected_doors,
                                          std::vector<int> representatives, int n_missing,
                                          int n_final) {
    if (door_set_size_n < 0) throw ValidationError("door_set_size_n must be >= 0");
    if (n_missing < 0) throw ValidationError("n_missing must be >= 0");
    const std::set<int> connected(connected_doors.begin(), connected_doors.end());
    if (connected.size() != connected_doors.size()) {
        throw ValidationError("connected_doors contains duplicates");
    }
    const std::set<int> reps(representatives.begin(), representatives.end());
    if (reps.size() != representatives.size()) {
        throw ValidationError("representatives contains duplicates");
    }
    if (!std::includes(connected.begin(), connected.end(), reps.begin(), reps.end())) {
        throw ValidationError("representatives must be a subset of connected_doors");
    }
    if (static_cast<int>(connected_doors.size()) > door_set_size_n) {
        throw ValidationError("|connected_doors| exceeds door_set_size_n");
    }
    if (n_final != static_cast<int>(representatives.size()) + n_missing) {
        throw ValidationError("n_final must equal |representatives| + n_missing");
    }
    EnumerationResult r;
    r.plan_id = std::move(plan_id);
    r.facility = facility;
    r.door_set_size_n = door_set_size_n;
    r.connected_doors = std::move(connected_doors);
    r.representatives = std::move(representatives);
    r.n_missing = n_missing;
    r.n_final = n_final;
    return r;
}

int final_count(int representatives_size, int n_missing) {
    if (representatives_size < 0 || n_missing < 0) {
        throw ValidationError("final_count inputs must be >= 0");
    }
    return representatives_size + n_missing;
}

}  // namespace facenum
