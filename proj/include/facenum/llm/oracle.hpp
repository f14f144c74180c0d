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
#include <set>
#include <utility>
#include <vector>

#include "facenum/llm/backend.hpp"

namespace facenum {

/// Ground-truth answers for one plan: which doors connect to which facility
/// type, which door pairs share a room, and how many door-less instances
/// exist per type. Absent entries default to "no" / 0.
struct OracleFixture {
    std::string plan_id;
    std::map<FacilityType, std::map<int, bool>> connection;
    std::set<std::pair<int, int>> same_room;  // pairs stored with first < second
    std::map<FacilityType, int> missing;

    static OracleFixture load(const std::filesystem::path& path);
    static OracleFixture from_json(const json& doc, const std::string& context);
    ojson to_json() const;

    bool connected(FacilityType type, int door_id) const;
    bool in_same_room(int a, int b) const;

    /// Rooms of this type that have doors: connected components of the
    /// connection-positive doors under the same-room relation.
    std::vector<std::vector<int>> door_rooms(FacilityType type) const;

    /// Instances not represented by any marked door: door-less instances plus
    /// rooms none of whose doors are marked. With the marked set produced by
    /// an error-free pipeline this equals `missing`; with an empty marked set
    /// it equals the ground-truth total.
    int uncovered_count(FacilityType type, const std::vector<int>& marked) const;

    /// Ground-truth total per type (door_rooms + missing).
    int total_count(FacilityType type) const;
};

/// Deterministic stand-in for the remote model. Answers every query from the
/// fixture, optionally flipping each verdict independently with probability
/// `flip_epsilon` (decided by a hash of (seed, query), so a given query
/// always gets the same answer within a run configuration).
class OracleBackend : public Backend {
public:
    explicit OracleBackend(OracleFixture fixture, double flip_epsilon = 0.0,
                           std::uint64_t seed = 0);

    std::string name() const override;
    std::string complete(const QueryKind& kind, const std::string& prompt,
                         std::span<const std::uint8_t> image_png) override;

    const OracleFixture& fixture() const { return fixture_; }

private:
    bool flip(const QueryKind& kind) const;

    OracleFixture fixture_;
    double flip_epsilon_;
    std::uint64_t seed_;
};

}  // namespace facenum
