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

#include "facenum/evalharness.hpp"
#include "test_support.hpp"

using namespace facenum;

namespace {

FloorPlanRef plan_of(int w, int h) {
    FloorPlanRef plan;
    plan.plan_id = "tiling";
    plan.image_bytes_digest = "0";
    plan.width_px = w;
    plan.height_px = h;
    return plan;
}

}  // namespace

TEST_CASE("accuracy counts exact matches only") {
    std::map<std::string, long long> truth, pred;
    for (int i = 0; i < 97; ++i) {
        truth["p" + std::to_string(i)] = 3;
        pred["p" + std::to_string(i)] = (i < 85) ? 3 : 4;
    }
    CHECK(accuracy(pred, truth) == doctest::Approx(85.0 / 97.0));
    CHECK(accuracy(truth, truth) == doctest::Approx(1.0));
}

TEST_CASE("accuracy vs an independent recount over random maps") {
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> count(0, 4);
    for (int round = 0; round < 100; ++round) {
        std::map<std::string, long long> truth, pred;
        int exact = 0;
        const int n = 1 + count(rng) * 10;
        for (int i = 0; i < n; ++i) {
            const auto key = "p" + std::to_string(i);
            truth[key] = count(rng);
            pred[key] = count(rng);
            if (truth[key] == pred[key]) ++exact;
        }
        CHECK(accuracy(pred, truth) == doctest::Approx(double(exact) / n));
    }
}

TEST_CASE("accuracy rejects mismatched key sets, listing the differences") {
    std::map<std::string, long long> truth = {{"a", 1}, {"b", 2}};
    std::map<std::string, long long> pred = {{"a", 1}, {"c", 2}};
    CHECK_THROWS_WITH_AS(accuracy(pred, truth), doctest::Contains("c"), ValidationError);
}

TEST_CASE("tiling the documented 1000x1000 example") {
    const auto tiling = plan_tiles(plan_of(1000, 1000), 600, 100);
    REQUIRE(tiling.tiles.size() == 4);
    CHECK(tiling.tiles[0] == Box{0, 0, 600, 600});
    CHECK(tiling.tiles[1] == Box{400, 0, 1000, 600});
    CHECK(tiling.tiles[2] == Box{0, 400, 600, 1000});
    CHECK(tiling.tiles[3] == Box{400, 400, 1000, 1000});
}

TEST_CASE("image smaller than the tile yields a single tile") {
    const auto tiling = plan_tiles(plan_of(500, 300), 600, 100);
    REQUIRE(tiling.tiles.size() == 1);
    CHECK(tiling.tiles[0] == Box{0, 0, 500, 300});
}

TEST_CASE("overlap must be smaller than the tile") {
    CHECK_THROWS_AS(plan_tiles(plan_of(1000, 1000), 600, 600), ValidationError);
    CHECK_THROWS_AS(plan_tiles(plan_of(1000, 1000), 600, -1), ValidationError);
}

TEST_CASE("tiles cover every pixel and neighbors share the overlap") {
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> dim(100, 3000);
    for (int round = 0; round < 50; ++round) {
        const int w = dim(rng), h = dim(rng);
        const int tile = 512, overlap = 64;
        const auto tiling = plan_tiles(plan_of(w, h), tile, overlap);
        // Coverage along each axis via sorted interval sweep.
        auto check_axis = [&](int extent, auto lo, auto hi) {
            std::vector<std::pair<int, int>> spans;
            for (const auto& t : tiling.tiles) spans.emplace_back(lo(t), hi(t));
            std::sort(spans.begin(), spans.end());
            int reach = 0;
            for (const auto& [a, b] : spans) {
                if (a <= reach) reach = std::max(reach, b);
            }
            CHECK(reach >= extent);
        };
        check_axis(w, [](const Box& b) { return b.x_min; }, [](const Box& b) { return b.x_max; });
        check_axis(h, [](const Box& b) { return b.y_min; }, [](const Box& b) { return b.y_max; });
        // interior horizontal neighbors share exactly `overlap` columns
        for (std::size_t i = 0; i + 1 < tiling.tiles.size(); ++i) {
            const Box& a = tiling.tiles[i];
            const Box& b = tiling.tiles[i + 1];
            if (a.y_min == b.y_min && b.x_min > a.x_min && b.x_min + tile < w) {
                CHECK(a.x_max - b.x_min == overlap);
            }
        }
    }
}

TEST_CASE("merge translates to global coordinates and dedups straddlers") {
    // one door seen once
    std::vector<TileDetections> tiles;
    tiles.push_back({0, 0, {test::door(0, 10, 10, 28, 18, 0.9)}});
    tiles.push_back({400, 0, {}});
    auto merged = merge_tile_detections(tiles, 0.8);
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].box == Box{10, 10, 28, 18});

    // the documented straddle pair: global boxes iou 4800/5200 = 0.923 >= 0.8
    tiles.clear();
    tiles.push_back({0, 0, {test::door(0, 500, 100, 600, 150, 0.9)}});
    tiles.push_back({400, 0, {test::door(0, 104, 100, 204, 150, 0.8)}});
    CHECK(iou(Box{500, 100, 600, 150}, Box{504, 100, 604, 150}) ==
          doctest::Approx(4800.0 / 5200.0));
    merged = merge_tile_detections(tiles, 0.8);
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].confidence == 0.9);

    // two distinct nearby doors survive
    tiles.clear();
    tiles.push_back({0, 0, {test::door(0, 500, 100, 530, 120, 0.9)}});
    tiles.push_back({400, 0, {test::door(0, 140, 100, 170, 120, 0.8)}});
    CHECK(iou(Box{500, 100, 530, 120}, Box{540, 100, 570, 120}) == doctest::Approx(0.0));
    merged = merge_tile_detections(tiles, 0.8);
    CHECK(merged.size() == 2);
}

TEST_CASE("merging an already-merged set changes nothing") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> coord(0, 500);
    std::uniform_real_distribution<double> conf(0.1, 1.0);
    for (int round = 0; round < 50; ++round) {
        std::vector<TileDetections> tiles(2);
        tiles[0].origin_x = 0;
        tiles[1].origin_x = 100;
        for (int i = 0; i < 8; ++i) {
            const int x = coord(rng), y = coord(rng);
            tiles[i % 2].detections.push_back(
                test::door(i, x, y, x + 20, y + 12, conf(rng)));
        }
        const auto merged = merge_tile_detections(tiles, 0.7);
        const auto again = merge_tile_detections({{0, 0, merged}}, 0.7);
        REQUIRE(again.size() == merged.size());
        for (std::size_t i = 0; i < merged.size(); ++i) {
            CHECK(again[i].box == merged[i].box);
            CHECK(again[i].door_id == merged[i].door_id);
        }
    }
}

TEST_CASE("manifest json round-trips and validates") {
    DatasetManifest manifest;
    manifest.dataset = "demo";
    PlanEntry entry;
    entry.plan.plan_id = "p1";
    entry.plan.width_px = 100;
    entry.plan.height_px = 80;
    entry.plan.image_uri = "p1.png";
    entry.truth[FacilityType::Toilet] = 2;
    entry.oracle_path = "p1.oracle.json";
    entry.detections_path = "p1.detections.json";
    manifest.plans.push_back(entry);

    const auto doc = manifest.to_json();
    const auto back = DatasetManifest::from_json(json::parse(doc.dump()), "roundtrip");
    REQUIRE(back.plans.size() == 1);
    CHECK(back.plans[0].truth.at(FacilityType::Toilet) == 2);
    CHECK(back.plans[0].oracle_path == entry.oracle_path);

    manifest.plans.push_back(entry);  // duplicate id
    CHECK_THROWS_AS(manifest.validate(), ValidationError);
}
