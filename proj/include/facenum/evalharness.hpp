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
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "facenum/detection.hpp"
#include "facenum/pipeline.hpp"

namespace facenum {

/// One plan of a dataset: the plan reference, exact ground-truth counts, and
/// the offline fixture / detections the run needs.
struct PlanEntry {
    FloorPlanRef plan;
    std::map<FacilityType, long long> truth;
    std::optional<std::string> oracle_path;
    std::optional<std::string> detections_path;
};

struct DatasetManifest {
    std::string dataset;
    std::vector<PlanEntry> plans;

    static DatasetManifest load(const std::filesystem::path& path);
    static DatasetManifest from_json(const json& doc, const std::string& context);
    ojson to_json() const;
    void validate() const;  // unique plan ids, counts >= 0
};

/// Exact-count accuracy: the fraction of plans whose predicted count equals
/// the ground truth exactly (zero tolerance). ValidationError when the key
/// sets differ, listing the differences.
double accuracy(const std::map<std::string, long long>& predictions,
                const std::map<std::string, long long>& truth);

/// Sliding-window cover of a large plan. Tiles are tile_size_px squares with
/// overlap_px shared between neighbors; edge tiles shift inward to stay in
/// bounds; an image smaller than the tile yields one image-sized tile.
struct TilingPlan {
    int tile_size_px = 0;
    int overlap_px = 0;
    std::vector<Box> tiles;
};

TilingPlan plan_tiles(const FloorPlanRef& plan, int tile_size_px, int overlap_px);

/// Translates per-tile detections into plan coordinates and suppresses
/// cross-tile duplicates (iou >= dedup_iou keeps the higher confidence).
/// Output is ordered by box coordinates and densely re-indexed, so merging an
/// already-merged set changes nothing.
struct TileDetections {
    int origin_x = 0;
    int origin_y = 0;
    std::vector<DoorBox> detections;  // tile-local coordinates
};

std::vector<DoorBox> merge_tile_detections(const std::vector<TileDetections>& per_tile,
                                           double dedup_iou);

enum class RunMode : std::uint8_t { Baseline, CoT };

std::string_view to_string(RunMode mode);

/// Creates the model backend for one plan. Oracle runs build a per-plan
/// backend from the plan's fixture; remote runs return one shared backend.
using BackendProvider = std::function<std::shared_ptr<Backend>(const PlanEntry&)>;

struct ComparisonConfig {
    std::vector<FacilityType> facilities;
    std::vector<RunMode> modes = {RunMode::Baseline, RunMode::CoT};
    DetectorConfig detector;
    PairStrategy pair_strategy = PairStrategy::AllPairs;
    bool exclude_failed_plans = false;  // default: failures count as incorrect
    int workers = 4;
    std::shared_ptr<AnswerCache> cache;  // may be null
    PromptLibrary prompts = PromptLibrary::builtin();
};

struct ComparisonCell {
    std::string dataset;
    FacilityType facility = FacilityType::Toilet;
    RunMode mode = RunMode::CoT;
    int n_plans = 0;
    int n_correct = 0;
    double accuracy = 0.0;
};

struct ComparisonTable {
    std::vector<ComparisonCell> cells;
    std::vector<std::string> failures;  // "<plan>/<facility>/<mode>: error"
    long long backend_invocations = 0;

    std::string to_csv() const;
    std::string to_text() const;
};

/// Runs every (plan, facility, mode) cell of the manifest and aggregates
/// exact-count accuracy. Per-plan failures are recorded and, by default,
/// scored as incorrect rather than dropped.
ComparisonTable run_comparison(const DatasetManifest& manifest,
                               const BackendProvider& provider,
                               const ComparisonConfig& cfg);

}  // namespace facenum
