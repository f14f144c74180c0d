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

#include "facenum/compliance.hpp"
#include "test_support.hpp"

using namespace facenum;

namespace {

const Rule& rule_by_id(const RuleCatalog& cat, const std::string& id) {
    for (const auto& r : cat.rules) {
        if (r.rule_id == id) return r;
    }
    throw std::runtime_error("no rule " + id);
}

BuildingContext ctx_class(int building_class) {
    BuildingContext ctx;
    ctx.building_class = building_class;
    return ctx;
}

}  // namespace

TEST_CASE("accessible parking uses ceiling division over declared spaces") {
    const auto cat = RuleCatalog::builtin();
    const auto& rule = rule_by_id(cat, "parking-accessible-ratio");
    BuildingContext ctx = ctx_class(6);
    ctx.standard_parking_spaces = 50;
    CHECK(required_quantity(rule, ctx) == 1);
    ctx.standard_parking_spaces = 51;
    CHECK(required_quantity(rule, ctx) == 2);
    ctx.standard_parking_spaces = 0;  // no parking provided: rule switches off
    bool applicable = true;
    CHECK(required_quantity(rule, ctx, &applicable) == 0);
    CHECK_FALSE(applicable);
}

TEST_CASE("exits: one for class 1, two per floor for classes 2-9") {
    const auto cat = RuleCatalog::builtin();
    BuildingContext c1 = ctx_class(1);
    c1.floors = 1;
    CHECK(required_quantity(rule_by_id(cat, "exits-class1"), c1) == 1);

    const auto& per_floor = rule_by_id(cat, "exits-per-floor");
    for (int building_class = 2; building_class <= 9; ++building_class) {
        BuildingContext ctx = ctx_class(building_class);
        ctx.floors = 3;
        CHECK(required_quantity(per_floor, ctx) == 6);
        ctx.floors = 1;
        CHECK(required_quantity(per_floor, ctx) == 2);
    }
}

TEST_CASE("class-3 shared sanitary sets scale with residents") {
    const auto cat = RuleCatalog::builtin();
    const auto& rule = rule_by_id(cat, "sanitary-class3-shared");
    BuildingContext ctx = ctx_class(3);
    ctx.residents_without_private_amenities = 25;
    CHECK(required_quantity(rule, ctx) == 3);  // ceil(25/10)
    ctx.residents_without_private_amenities = 0;
    CHECK(required_quantity(rule, ctx) == 0);
    ctx.residents_without_private_amenities = 10;
    CHECK(required_quantity(rule, ctx) == 1);
}

TEST_CASE("per-dwelling parking for classes 1 and 2") {
    const auto cat = RuleCatalog::builtin();
    const auto& rule = rule_by_id(cat, "parking-per-dwelling");
    BuildingContext ctx = ctx_class(2);
    ctx.dwellings = 12;
    CHECK(required_quantity(rule, ctx) == 12);
}

TEST_CASE("ratio rules: unit steps and exact multiples") {
    const auto cat = RuleCatalog::builtin();
    const auto& rule = rule_by_id(cat, "sanitary-class3-shared");
    BuildingContext ctx = ctx_class(3);
    long long prev = 0;
    for (long long r = 1; r <= 200; ++r) {
        ctx.residents_without_private_amenities = r;
        const long long req = required_quantity(rule, ctx);
        const long long step = req - prev;
        CHECK(step >= 0);
        CHECK(step <= 1);
        prev = req;
        if (r % 10 == 0) CHECK(req == r / 10);
    }
}

TEST_CASE("catalog covers every class-facility pair") {
    const auto cat = RuleCatalog::builtin();
    for (int building_class = 1; building_class <= 9; ++building_class) {
        for (FacilityType type : kAllFacilityTypes) {
            INFO("class ", building_class, " facility ", to_string(type));
            CHECK(cat.covers(building_class, type));
        }
    }
}

TEST_CASE("class-1 minimums pass as a whole") {
    BuildingContext ctx = ctx_class(1);
    ctx.dwellings = 1;
    ctx.floors = 1;
    // A house with no declared car park: the accessible-parking ratio rule is
    // conditional on parking being provided.
    ctx.standard_parking_spaces = 0;
    const std::map<FacilityType, long long> provided = {
        {FacilityType::Kitchen, 1},  {FacilityType::Toilet, 1},
        {FacilityType::Exit, 1},     {FacilityType::ParkingStandard, 1},
        {FacilityType::Laundry, 1},  {FacilityType::FireSafety, 1},
    };
    const auto report = evaluate(provided, ctx, RuleCatalog::builtin());
    CHECK(report.overall_pass);
}

TEST_CASE("class 2 with one exit per building fails with shortfall") {
    BuildingContext ctx = ctx_class(2);
    ctx.dwellings = 4;
    ctx.floors = 1;
    const std::map<FacilityType, long long> provided = {
        {FacilityType::Kitchen, 4},       {FacilityType::Toilet, 4},
        {FacilityType::Exit, 1},          {FacilityType::ParkingStandard, 4},
        {FacilityType::Laundry, 1},       {FacilityType::FireSafety, 1},
        {FacilityType::Accessibility, 2}, {FacilityType::ParkingAccessible, 1},
    };
    ctx.standard_parking_spaces = 4;
    const auto report = evaluate(provided, ctx, RuleCatalog::builtin());
    CHECK_FALSE(report.overall_pass);
    bool found = false;
    for (const auto& e : report.entries) {
        if (e.rule_id == "exits-per-floor") {
            found = true;
            CHECK(e.required == 2);
            CHECK(e.provided == 1);
            CHECK_FALSE(e.pass);
            CHECK(e.shortfall == 1);
        }
    }
    CHECK(found);
}

TEST_CASE("class 7 carpark does not require kitchens") {
    BuildingContext ctx = ctx_class(7);
    ctx.occupant_load = 0;
    const auto report = evaluate({}, ctx, RuleCatalog::builtin());
    // No kitchen rule fires for class 7 (an NA marker covers the pair), so a
    // carpark with zero kitchens never fails on kitchens.
    for (const auto& e : report.entries) {
        CHECK(e.facility != FacilityType::Kitchen);
    }
    CHECK(RuleCatalog::builtin().covers(7, FacilityType::Kitchen));
}

TEST_CASE("missing enumeration results warn and count as zero") {
    BuildingContext ctx = ctx_class(3);
    ctx.dwellings = 0;
    ctx.residents_without_private_amenities = 30;
    const auto report = evaluate({}, ctx, RuleCatalog::builtin());
    CHECK_FALSE(report.overall_pass);
    CHECK_FALSE(report.warnings.empty());
}

TEST_CASE("increasing any provided count never flips pass to fail") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<int> cls(1, 9);
    std::uniform_int_distribution<long long> small(0, 40);
    const auto cat = RuleCatalog::builtin();
    for (int round = 0; round < 300; ++round) {
        BuildingContext ctx;
        ctx.building_class = cls(rng);
        ctx.dwellings = small(rng);
        ctx.floors = 1 + static_cast<int>(small(rng) % 5);
        ctx.occupant_load = small(rng) * 5;
        ctx.residents_without_private_amenities = small(rng);
        ctx.long_term_accommodation = (small(rng) % 2) == 0;
        ctx.standard_parking_spaces = small(rng) * 3;
        if (small(rng) % 3 == 0) ctx.use_tags.insert("hospital");
        if (small(rng) % 4 == 0) ctx.use_tags.insert("canteen");

        std::map<FacilityType, long long> provided;
        for (FacilityType t : kAllFacilityTypes) provided[t] = small(rng);

        const auto before = evaluate(provided, ctx, cat);
        // bump one facility and re-evaluate
        const FacilityType bumped =
            kAllFacilityTypes[static_cast<std::size_t>(small(rng)) % 9];
        provided[bumped] += 1 + small(rng);
        const auto after = evaluate(provided, ctx, cat);
        REQUIRE(before.entries.size() == after.entries.size());
        for (std::size_t i = 0; i < before.entries.size(); ++i) {
            if (before.entries[i].pass) CHECK(after.entries[i].pass);
        }
    }
}

TEST_CASE("catalog json round-trips") {
    const auto cat = RuleCatalog::builtin();
    const auto doc = cat.to_json();
    const auto back = RuleCatalog::from_json(json::parse(doc.dump()), "roundtrip");
    CHECK(back.rules.size() == cat.rules.size());
    CHECK(back.markers.size() == cat.markers.size());
    CHECK(back.to_json().dump() == doc.dump());
    BuildingContext ctx = ctx_class(3);
    ctx.residents_without_private_amenities = 25;
    CHECK(required_quantity(rule_by_id(back, "sanitary-class3-shared"), ctx) == 3);
}

TEST_CASE("context validation rejects out-of-range classes") {
    BuildingContext ctx;
    ctx.building_class = 10;
    CHECK_THROWS_AS(ctx.validate(), ValidationError);
    CHECK_THROWS_AS(evaluate({}, ctx, RuleCatalog::builtin()), ValidationError);
}
