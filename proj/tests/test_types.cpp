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

#include <random>

#include "facenum/types.hpp"
#include "test_support.hpp"

using namespace facenum;

namespace {

// Independent iou oracle: rectangle area arithmetic spelled out longhand.
double iou_by_hand(const Box& a, const Box& b) {
    const double ax = std::max(0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
    const double ay = std::max(0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
    const double inter = ax * ay;
    const double area_a = double(a.x_max - a.x_min) * (a.y_max - a.y_min);
    const double area_b = double(b.x_max - b.x_min) * (b.y_max - b.y_min);
    return inter / (area_a + area_b - inter);
}

Box random_box(std::mt19937& rng) {
    std::uniform_int_distribution<int> coord(0, 190);
    std::uniform_int_distribution<int> size(1, 60);
    const int x = coord(rng);
    const int y = coord(rng);
    return Box{x, y, x + size(rng), y + size(rng)};
}

}  // namespace

TEST_CASE("iou identity, disjoint and hand-computed overlap") {
    const Box a{0, 0, 10, 10};
    CHECK(iou(a, a) == doctest::Approx(1.0));
    CHECK(iou(Box{0, 0, 10, 10}, Box{20, 20, 30, 30}) == doctest::Approx(0.0));
    // intersection 50, union 150
    CHECK(iou(Box{0, 0, 10, 10}, Box{5, 0, 15, 10}) == doctest::Approx(50.0 / 150.0));
}

TEST_CASE("iou is symmetric and bounded over random box pairs") {
    std::mt19937 rng(7);
    for (int i = 0; i < 2000; ++i) {
        const Box a = random_box(rng);
        const Box b = random_box(rng);
        const double ab = iou(a, b);
        CHECK(ab == iou(b, a));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
        CHECK(ab == doctest::Approx(iou_by_hand(a, b)));
        CHECK(iou(a, a) == doctest::Approx(1.0));
    }
}

TEST_CASE("final_count adds representatives and missing") {
    CHECK(final_count(0, 0) == 0);
    CHECK(final_count(2, 1) == 3);
    CHECK(final_count(5, 0) == 5);
    CHECK_THROWS_AS(final_count(-1, 0), ValidationError);
    CHECK_THROWS_AS(final_count(0, -2), ValidationError);
}

TEST_CASE("facility names round-trip exactly") {
    for (FacilityType t : kAllFacilityTypes) {
        CHECK(facility_from_string(to_string(t)) == t);
    }
    CHECK(std::string(to_string(FacilityType::EmergencyExit)) == "emergency-exit");
    CHECK(std::string(to_string(FacilityType::ParkingAccessible)) == "parking-accessible");
    CHECK_THROWS_AS(facility_from_string("bathroom"), ValidationError);
}

TEST_CASE("enumeration result constructor enforces the invariants") {
    // well-formed: n_final = M + missing, reps subset of connected
    const auto ok = EnumerationResult::make("p", FacilityType::Toilet, 5, {1, 3}, {1}, 2, 3);
    CHECK(ok.n_final == 3);

    CHECK_THROWS_AS(
        EnumerationResult::make("p", FacilityType::Toilet, 5, {1, 3}, {1}, 2, 4),
        ValidationError);  // n_final mismatch
    CHECK_THROWS_AS(
        EnumerationResult::make("p", FacilityType::Toilet, 5, {1, 3}, {2}, 0, 1),
        ValidationError);  // representative outside connected set
    CHECK_THROWS_AS(
        EnumerationResult::make("p", FacilityType::Toilet, 1, {1, 3}, {1}, 0, 1),
        ValidationError);  // |connected| > N
    CHECK_THROWS_AS(
        EnumerationResult::make("p", FacilityType::Toilet, 5, {1, 1}, {1}, 0, 1),
        ValidationError);  // duplicate connected door
    CHECK_THROWS_AS(
        EnumerationResult::make("p", FacilityType::Toilet, 5, {1}, {1}, -1, 0),
        ValidationError);  // negative missing
}

TEST_CASE("door validation catches bad boxes and confidences") {
    CHECK_NOTHROW(validate_door(test::door(0, 5, 5, 20, 20), 100, 100));
    CHECK_THROWS_AS(validate_door(test::door(0, 20, 5, 5, 20), 100, 100), ValidationError);
    CHECK_THROWS_AS(validate_door(test::door(0, 5, 5, 120, 20), 100, 100), ValidationError);
    CHECK_THROWS_AS(validate_door(test::door(0, 5, 5, 20, 20, 1.2), 100, 100),
                    ValidationError);
}

TEST_CASE("clamp_box limits boxes to the plan bounds") {
    CHECK(clamp_box(Box{-5, 10, 50, 200}, 100, 100) == Box{0, 10, 50, 100});
    CHECK(clamp_box(Box{120, 120, 150, 150}, 100, 100) == Box{100, 100, 100, 100});
}
