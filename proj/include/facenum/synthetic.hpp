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
#include <optional>
#include <vector>

#include "facenum/evalharness.hpp"
#include "facenum/llm/oracle.hpp"
#include "facenum/types.hpp"

namespace facenum {

/// Recipe for one synthetic floor plan. Generation is a pure function of the
/// spec (including the seed): same spec, same bytes.
struct ScenarioSpec {
    std::uint64_t seed = 0;
    std::map<FacilityType, int> rooms_per_type;
    double two_door_prob = 0.25;  // chance a room gets a second door
    std::map<FacilityType, int> doorless_rooms;  // open rooms without doors
    int width_px = 960;
    int height_px = 720;
    int decoy_doors = 0;  // doors that lead to no target facility

    void validate() const;
    static ScenarioSpec from_json(const json& doc, const std::string& context);
    ojson to_json() const;
};

/// Layout metadata kept for independent cross-checks in tests.
struct SynthRoom {
    std::optional<FacilityType> type;  // nullopt: decoy room
    Box rect;
    std::vector<int> door_ids;  // empty for doorless rooms
};

/// A fully generated scenario: raster, detections, oracle fixture, ground
/// truth and the abstract layout it was all derived from.
struct Scenario {
    FloorPlanRef plan;
    std::vector<std::uint8_t> png;
    std::vector<DoorBox> doors;  // ordered by box coordinates, ids dense from 0
    OracleFixture fixture;
    std::map<FacilityType, long long> truth;  // all facility types, zeros included
    std::vector<SynthRoom> rooms;
};

/// Generates the scenario. GenerationError when the rooms cannot be packed
/// into the image (the message suggests a larger image).
Scenario generate(const ScenarioSpec& spec);

/// Writes image/detections/oracle files into `dir` and returns the manifest
/// entry pointing at them. File names are derived from the plan id.
PlanEntry write_bundle(const Scenario& scenario, const std::filesystem::path& dir);

}  // namespace facenum
