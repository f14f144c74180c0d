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

#include <doctest.h>

#include "facenum/pipeline.hpp"
#include "facenum/synthetic.hpp"
#include "test_support.hpp"

using namespace facenum;

namespace {

ScenarioSpec demo_spec(std::uint64_t seed) {
    ScenarioSpec spec;
    spec.seed = seed;
    spec.rooms_per_type[FacilityType::Toilet] = 3;
    spec.rooms_per_type[FacilityType::Kitchen] = 1;
    spec.doorless_rooms[FacilityType::Toilet] = 1;
    spec.two_door_prob = 0.5;
    spec.decoy_doors = 2;
    spec.width_px = 960;
    spec.height_px = 720;
    return spec;
}

}  // namespace

TEST_CASE("generation is deterministic per seed and distinct across seeds") {
    const auto a1 = generate(demo_spec(7));
    const auto a2 = generate(demo_spec(7));
    CHECK(a1.png == a2.png);
    CHECK(a1.plan.image_bytes_digest == a2.plan.image_bytes_digest);
    CHECK(a1.plan.plan_id == a2.plan.plan_id);
    REQUIRE(a1.doors.size() == a2.doors.size());
    for (std::size_t i = 0; i < a1.doors.size(); ++i) {
        CHECK(a1.doors[i].box == a2.doors[i].box);
        CHECK(a1.doors[i].confidence == a2.doors[i].confidence);
    }
    CHECK(a1.fixture.to_json().dump() == a2.fixture.to_json().dump());

    const auto b = generate(demo_spec(8));
    CHECK(b.plan.image_bytes_digest != a1.plan.image_bytes_digest);
}

TEST_CASE("an all-zero spec produces an empty plan") {
    ScenarioSpec spec;
    spec.seed = 1;
    spec.width_px = 320;
    spec.height_px = 240;
    const auto scenario = generate(spec);
    CHECK(scenario.doors.empty());
    for (FacilityType t : kAllFacilityTypes) {
        CHECK(scenario.truth.at(t) == 0);
    }
}

TEST_CASE("unsatisfiable packing suggests a larger image") {
    ScenarioSpec spec;
    spec.seed = 2;
    spec.width_px = 240;
    spec.height_px = 180;
    spec.rooms_per_type[FacilityType::Toilet] = 50;
    CHECK_THROWS_WITH_AS(generate(spec), doctest::Contains("increase the image size"),
                         GenerationError);
}

TEST_CASE("layout metadata, fixture and truth agree (independent recount)") {
    const auto scenario = generate(demo_spec(21));

    // Independent counter over the abstract layout.
    std::map<FacilityType, int> rooms_by_type;
    std::map<FacilityType, int> doorless_by_type;
    int doors_total = 0;
    for (const auto& room : scenario.rooms) {
        doors_total += static_cast<int>(room.door_ids.size());
        if (!room.type) continue;
        rooms_by_type[*room.type] += 1;
        if (room.door_ids.empty()) doorless_by_type[*room.type] += 1;
    }
    CHECK(doors_total == static_cast<int>(scenario.doors.size()));
    CHECK(rooms_by_type[FacilityType::Toilet] == 4);  // 3 doored + 1 doorless
    CHECK(scenario.truth.at(FacilityType::Toilet) == 4);
    CHECK(scenario.truth.at(FacilityType::Kitchen) == 1);
    CHECK(doorless_by_type[FacilityType::Toilet] == 1);
    CHECK(scenario.fixture.missing.at(FacilityType::Toilet) == 1);

    // connection verdicts match room membership exactly
    for (const auto& room : scenario.rooms) {
        for (int id : room.door_ids) {
            if (room.type) {
                CHECK(scenario.fixture.connected(*room.type, id));
            } else {
                for (FacilityType t : kAllFacilityTypes) {
                    CHECK_FALSE(scenario.fixture.connected(t, id));
                }
            }
        }
        // multi-door rooms appear as same-room pairs
        for (std::size_t i = 0; i < room.door_ids.size(); ++i) {
            for (std::size_t j = i + 1; j < room.door_ids.size(); ++j) {
                CHECK(scenario.fixture.in_same_room(room.door_ids[i], room.door_ids[j]));
            }
        }
    }

    // doors are sorted by box and densely indexed; all inside the plan
    for (std::size_t i = 0; i < scenario.doors.size(); ++i) {
        CHECK(scenario.doors[i].door_id == static_cast<int>(i));
        if (i > 0) CHECK(scenario.doors[i - 1].box < scenario.doors[i].box);
        CHECK_NOTHROW(validate_door(scenario.doors[i], scenario.plan.width_px,
                                    scenario.plan.height_px));
        CHECK(scenario.doors[i].confidence >= 0.6);
    }
}

TEST_CASE("pipeline with the zero-error oracle reproduces the ground truth") {
    // the module's reason to exist
    for (std::uint64_t seed : {3u, 14u, 59u}) {
        const auto scenario = generate(demo_spec(seed));
        auto backend = std::make_shared<OracleBackend>(scenario.fixture);
        Gateway gateway(backend, nullptr);
        for (FacilityType type :
             {FacilityType::Toilet, FacilityType::Kitchen, FacilityType::Laundry}) {
            PipelineConfig cfg;
            cfg.facility = type;
            const auto run =
                enumerate_facility(scenario.plan, scenario.png, scenario.doors, gateway, cfg);
            CHECK(run.result.n_final == scenario.truth.at(type));
        }
    }
}

TEST_CASE("bundles round-trip through the manifest formats") {
    test::TempDir tmp("bundle");
    const auto scenario = generate(demo_spec(33));
    const PlanEntry entry = write_bundle(scenario, tmp.path());

    // detections load against the written plan
    const auto doors = load_detections(*entry.detections_path, entry.plan);
    REQUIRE(doors.size() == scenario.doors.size());
    for (std::size_t i = 0; i < doors.size(); ++i) {
        CHECK(doors[i].box == scenario.doors[i].box);
    }
    // oracle fixture loads and matches
    const auto fixture = OracleFixture::load(*entry.oracle_path);
    CHECK(fixture.to_json().dump() == scenario.fixture.to_json().dump());
    // the image file matches the digest
    const auto bytes = read_file_bytes(entry.plan.image_uri);
    CHECK(sha256_hex(bytes) == entry.plan.image_bytes_digest);
}
