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

#include <span>
#include <utility>
#include <vector>

#include "facenum/llm/gateway.hpp"
#include "facenum/overlay.hpp"
#include "facenum/types.hpp"

namespace facenum {

/// How stage 2 chooses which door pairs to ask about. AllPairs asks about
/// every pair; DistanceGated skips pairs whose box centers are farther apart
/// than the radius (two doors of one room are never far apart).
enum class PairStrategy : std::uint8_t { AllPairs, DistanceGated };

struct PipelineConfig {
    FacilityType facility = FacilityType::Toilet;
    PairStrategy pair_strategy = PairStrategy::AllPairs;
    double gate_radius_px = 0.0;  // 0 -> 40% of the image diagonal when gated
    int overlay_stroke_px = 3;

    /// Effective gating radius for a plan of the given size.
    double effective_radius(int width_px, int height_px) const;
};

/// Yes-edges collected in stage 2; connected components are rooms.
struct ConsolidationGraph {
    std::vector<int> nodes;                    // the stage-1 door set
    std::vector<std::pair<int, int>> yes_edges;  // unordered pairs, a < b
};

/// Union-find grouping of the graph's nodes; components sorted internally and
/// by smallest member. (An independent BFS is kept oracle-side in the tests.)
std::vector<std::vector<int>> connected_components(const ConsolidationGraph& graph);

/// One answered query, as recorded in provenance.
struct QueryRecord {
    std::string query;  // canonical serialization
    std::string cache_key;
    std::string answer;  // "yes"/"no" or the count
    bool cache_hit = false;
};

/// Complete trace of one (plan, facility) run: every query, the consolidation
/// graph, the representative choice and the count chain. Wall-clock data
/// deliberately lives elsewhere so these bytes are reproducible.
struct Provenance {
    std::string plan_id;
    FacilityType facility = FacilityType::Toilet;
    ojson config_echo;
    int n_doors = 0;
    std::vector<QueryRecord> stage1_queries;
    std::vector<int> connected_doors;
    std::vector<QueryRecord> stage2_queries;
    std::vector<std::pair<int, int>> yes_edges;
    std::vector<std::vector<int>> components;
    std::vector<int> representatives;
    std::vector<std::string> warnings;
    QueryRecord stage3_query;
    int n_missing = 0;
    int n_final = 0;

    ojson to_json() const;
};

/// Throws ValidationError unless the recorded counts satisfy the chain
/// 0 <= M <= |D_T| <= N and n_final = M + n_missing.
void validate_chain(const Provenance& prov);

struct PipelineRun {
    EnumerationResult result;
    Provenance provenance;
};

/// Stage 1: one overlay + one connection query per door; returns the ids
/// whose verdict is yes, in door-id order.
std::vector<int> stage1_connection(const std::vector<DoorBox>& doors,
                                   const FloorPlanRef& plan,
                                   std::span<const std::uint8_t> image_png,
                                   Gateway& gateway, const PipelineConfig& cfg,
                                   Provenance* prov = nullptr);

/// Stage 2: pairwise same-room queries over the stage-1 set, connected
/// components over yes edges, one representative per component (highest
/// detector confidence, ties to the lower door id).
std::vector<int> stage2_consolidate(const std::vector<int>& connected,
                                    const std::vector<DoorBox>& doors,
                                    const FloorPlanRef& plan,
                                    std::span<const std::uint8_t> image_png,
                                    Gateway& gateway, const PipelineConfig& cfg,
                                    Provenance* prov = nullptr);

/// Stage 3: highlights all representatives and asks for the count of
/// instances not represented by any marked box.
int stage3_omission(const std::vector<int>& representatives,
                    const std::vector<DoorBox>& doors, const FloorPlanRef& plan,
                    std::span<const std::uint8_t> image_png, Gateway& gateway,
                    const PipelineConfig& cfg, Provenance* prov = nullptr);

/// Runs stages 1-3 and assembles the validated result with full provenance.
/// Errors carry a stage tag and abort only this facility.
PipelineRun enumerate_facility(const FloorPlanRef& plan,
                               std::span<const std::uint8_t> image_png,
                               const std::vector<DoorBox>& doors, Gateway& gateway,
                               const PipelineConfig& cfg);

/// Whole-image baseline: a single count query per (plan, facility) with no
/// marked boxes, bypassing the staged pipeline.
long long baseline_count(const FloorPlanRef& plan, std::span<const std::uint8_t> image_png,
                         FacilityType facility, Gateway& gateway);

ojson result_to_json(const EnumerationResult& result);
/// Validating deserialization (rejects inconsistent field combinations).
EnumerationResult result_from_json(const json& doc, const std::string& context);

}  // namespace facenum
