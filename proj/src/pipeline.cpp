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

#include "facenum/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <thread>

#include "facenum/digest.hpp"

namespace facenum {

namespace {

/// Runs f(0..n-1) on up to `workers` threads; results must be written into
/// index-addressed slots so the outcome is schedule-independent. The first
/// exception wins and is rethrown after all threads join.
template <typename F>
void parallel_for(std::size_t n, int workers, F&& f) {
    const int use = std::min<std::size_t>(std::max(workers, 1), n);
    if (use <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto run = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                f(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(use);
    for (int t = 0; t < use; ++t) pool.emplace_back(run);
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

const DoorBox& door_by_id(const std::vector<DoorBox>& doors, int id) {
    for (const auto& d : doors) {
        if (d.door_id == id) return d;
    }
    throw ValidationError("unknown door id " + std::to_string(id));
}

Error tag_stage(const char* stage, const std::string& context, const Error& e) {
    return Error(e.kind(), std::string(stage) + (context.empty() ? "" : " [" + context + "]") +
                               ": " + e.what());
}

QueryRecord record_of(const QueryKind& kind, const AskOutcome& outcome) {
    QueryRecord rec;
    rec.query = canonical_json(kind);
    rec.cache_key = outcome.cache_key;
    rec.cache_hit = outcome.cache_hit;
    if (outcome.answer.verdict) {
        rec.answer = std::string(to_string(*outcome.answer.verdict));
    } else if (outcome.answer.count) {
        rec.answer = std::to_string(*outcome.answer.count);
    }
    return rec;
}

struct DisjointSet {
    explicit DisjointSet(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), 0);
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(std::size_t a, std::size_t b) { parent[find(a)] = find(b); }
    std::vector<std::size_t> parent;
};

}  // namespace

double PipelineConfig::effective_radius(int width_px, int height_px) const {
    if (pair_strategy != PairStrategy::DistanceGated) return 0.0;
    if (gate_radius_px > 0.0) return gate_radius_px;
    return 0.4 * std::hypot(static_cast<double>(width_px), static_cast<double>(height_px));
}

std::vector<std::vector<int>> connected_components(const ConsolidationGraph& graph) {
    std::map<int, std::size_t> index;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) index[graph.nodes[i]] = i;
    DisjointSet sets(graph.nodes.size());
    for (const auto& [a, b] : graph.yes_edges) {
        auto ia = index.find(a);
        auto ib = index.find(b);
        if (ia == index.end() || ib == index.end()) {
            throw ValidationError("consolidation edge touches a node outside the door set");
        }
        sets.unite(ia->second, ib->second);
    }
    std::map<std::size_t, std::vector<int>> by_root;
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        by_root[sets.find(i)].push_back(graph.nodes[i]);
    }
    std::vector<std::vector<int>> components;
    for (auto& [root, members] : by_root) {
        std::sort(members.begin(), members.end());
        components.push_back(std::move(members));
    }
    std::sort(components.begin(), components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });
    return components;
}

void validate_chain(const Provenance& prov) {
    const int d_t = static_cast<int>(prov.connected_doors.size());
    const int m = static_cast<int>(prov.representatives.size());
    if (!(0 <= m && m <= d_t && d_t <= prov.n_doors)) {
        throw ValidationError("count chain violated: M=" + std::to_string(m) +
                              " |D_T|=" + std::to_string(d_t) +
                              " N=" + std::to_string(prov.n_doors));
    }
    if (prov.n_missing < 0) throw ValidationError("n_missing < 0");
    if (prov.n_final != m + prov.n_missing) {
        throw ValidationError("n_final != M + n_missing");
    }
    const std::set<int> connected(prov.connected_doors.begin(), prov.connected_doors.end());
    for (int rep : prov.representatives) {
        if (!connected.count(rep)) {
            throw ValidationError("representative " + std::to_string(rep) +
                                  " is not a connected door");
        }
    }
}

ojson Provenance::to_json() const {
    auto queries_json = [](const std::vector<QueryRecord>& records) {
        ojson arr = ojson::array();
        for (const auto& r : records) {
            arr.push_back({{"query", json::parse(r.query)},
                           {"cache_key", r.cache_key},
                           {"answer", r.answer},
                           {"cache_hit", r.cache_hit}});
        }
        return arr;
    };
    ojson doc;
    doc["plan_id"] = plan_id;
    doc["facility"] = to_string(facility);
    doc["config"] = config_echo;
    doc["n_doors"] = n_doors;
    doc["stage1"] = {{"queries", queries_json(stage1_queries)},
                     {"connected_doors", connected_doors}};
    ojson edges = ojson::array();
    for (const auto& [a, b] : yes_edges) edges.push_back({a, b});
    doc["stage2"] = {{"queries", queries_json(stage2_queries)},
                     {"yes_edges", std::move(edges)},
                     {"components", components},
                     {"representatives", representatives}};
    doc["stage3"] = {{"query", stage3_query.query.empty()
                                   ? json(nullptr)
                                   : json::parse(stage3_query.query)},
                     {"cache_key", stage3_query.cache_key},
                     {"answer", stage3_query.answer},
                     {"cache_hit", stage3_query.cache_hit}};
    doc["counts"] = {{"n_doors", n_doors},
                     {"d_t_size", connected_doors.size()},
                     {"m", representatives.size()},
                     {"n_missing", n_missing},
                     {"n_final", n_final}};
    doc["warnings"] = warnings;
    return doc;
}

std::vector<int> stage1_connection(const std::vector<DoorBox>& doors,
                                   const FloorPlanRef& plan,
                                   std::span<const std::uint8_t> image_png,
                                   Gateway& gateway, const PipelineConfig& cfg,
                                   Provenance* prov) {
    std::vector<QueryRecord> records(doors.size());
    std::vector<char> verdicts(doors.size(), 0);
    parallel_for(doors.size(), gateway.max_concurrency(), [&](std::size_t i) {
        const DoorBox& door = doors[i];
        const QueryKind kind = ConnectionQuery{cfg.facility, door.door_id};
        try {
            OverlaySpec spec;
            spec.stroke_width_px = cfg.overlay_stroke_px;
            spec.boxes.emplace_back(door, OverlayRole::Queried);
            const OverlayResult overlay = OverlayMemo::global().get_or_render(
                image_png, plan.image_bytes_digest, spec);
            const AskOutcome outcome = gateway.ask(
                kind, {overlay.png, overlay.overlay_digest, plan.image_bytes_digest});
            records[i] = record_of(kind, outcome);
            verdicts[i] = *outcome.answer.verdict == Verdict::Yes ? 1 : 0;
        } catch (const Error& e) {
            throw tag_stage("stage1", "door " + std::to_string(door.door_id), e);
        }
    });
    std::vector<int> connected;
    for (std::size_t i = 0; i < doors.size(); ++i) {
        if (verdicts[i]) connected.push_back(doors[i].door_id);
    }
    std::sort(connected.begin(), connected.end());
    if (prov) {
        prov->stage1_queries = std::move(records);
        prov->connected_doors = connected;
    }
    return connected;
}

std::vector<int> stage2_consolidate(const std::vector<int>& connected,
                                    const std::vector<DoorBox>& doors,
                                    const FloorPlanRef& plan,
                                    std::span<const std::uint8_t> image_png,
                                    Gateway& gateway, const PipelineConfig& cfg,
                                    Provenance* prov) {
    {
        std::set<int> unique(connected.begin(), connected.end());
        if (unique.size() != connected.size()) {
            throw ValidationError("stage2 input door set contains duplicates");
        }
    }
    const double radius = cfg.effective_radius(plan.width_px, plan.height_px);
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < connected.size(); ++i) {
        for (std::size_t j = i + 1; j < connected.size(); ++j) {
            if (cfg.pair_strategy == PairStrategy::DistanceGated) {
                const Box& a = door_by_id(doors, connected[i]).box;
                const Box& b = door_by_id(doors, connected[j]).box;
                const double dist =
                    std::hypot(a.center_x() - b.center_x(), a.center_y() - b.center_y());
                if (dist > radius) continue;
            }
            pairs.emplace_back(connected[i], connected[j]);
        }
    }

    std::vector<QueryRecord> records(pairs.size());
    std::vector<char> same(pairs.size(), 0);
    parallel_for(pairs.size(), gateway.max_concurrency(), [&](std::size_t i) {
        const auto [a, b] = pairs[i];
        const QueryKind kind = SameRoomQuery::make(a, b);
        try {
            OverlaySpec spec;
            spec.stroke_width_px = cfg.overlay_stroke_px;
            spec.boxes.emplace_back(door_by_id(doors, a), OverlayRole::Queried);
            spec.boxes.emplace_back(door_by_id(doors, b), OverlayRole::Queried);
            const OverlayResult overlay = OverlayMemo::global().get_or_render(
                image_png, plan.image_bytes_digest, spec);
            const AskOutcome outcome = gateway.ask(
                kind, {overlay.png, overlay.overlay_digest, plan.image_bytes_digest});
            records[i] = record_of(kind, outcome);
            same[i] = *outcome.answer.verdict == Verdict::Yes ? 1 : 0;
        } catch (const Error& e) {
            throw tag_stage("stage2",
                            "pair (" + std::to_string(a) + "," + std::to_string(b) + ")", e);
        }
    });

    ConsolidationGraph graph;
    graph.nodes = connected;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        if (same[i]) graph.yes_edges.push_back(pairs[i]);
    }
    const auto components = connected_components(graph);

    // A "no" answer inside one component means the pairwise answers were
    // inconsistent; transitive closure over yes edges dominates.
    std::vector<std::string> warnings;
    {
        std::map<int, std::size_t> component_of;
        for (std::size_t c = 0; c < components.size(); ++c) {
            for (int id : components[c]) component_of[id] = c;
        }
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            if (!same[i] && component_of[pairs[i].first] == component_of[pairs[i].second]) {
                warnings.push_back("inconsistent same-room answers: (" +
                                   std::to_string(pairs[i].first) + "," +
                                   std::to_string(pairs[i].second) +
                                   ") answered no but linked through yes edges");
            }
        }
    }

    std::vector<int> representatives;
    for (const auto& component : components) {
        int best = component.front();
        for (int id : component) {
            const double conf = door_by_id(doors, id).confidence;
            const double best_conf = door_by_id(doors, best).confidence;
            if (conf > best_conf || (conf == best_conf && id < best)) best = id;
        }
        representatives.push_back(best);
    }
    std::sort(representatives.begin(), representatives.end());

    if (prov) {
        prov->stage2_queries = std::move(records);
        prov->yes_edges = graph.yes_edges;
        prov->components = components;
        prov->representatives = representatives;
        prov->warnings.insert(prov->warnings.end(), warnings.begin(), warnings.end());
    }
    return representatives;
}

int stage3_omission(const std::vector<int>& representatives,
                    const std::vector<DoorBox>& doors, const FloorPlanRef& plan,
                    std::span<const std::uint8_t> image_png, Gateway& gateway,
                    const PipelineConfig& cfg, Provenance* prov) {
    const QueryKind kind = OmissionQuery::make(cfg.facility, representatives);
    try {
        OverlaySpec spec;
        spec.stroke_width_px = cfg.overlay_stroke_px;
        for (int id : representatives) {
            spec.boxes.emplace_back(door_by_id(doors, id), OverlayRole::Retained);
        }
        const OverlayResult overlay = OverlayMemo::global().get_or_render(
                image_png, plan.image_bytes_digest, spec);
        const AskOutcome outcome = gateway.ask(
            kind, {overlay.png, overlay.overlay_digest, plan.image_bytes_digest});
        if (prov) prov->stage3_query = record_of(kind, outcome);
        return static_cast<int>(*outcome.answer.count);
    } catch (const Error& e) {
        throw tag_stage("stage3", "", e);
    }
}

PipelineRun enumerate_facility(const FloorPlanRef& plan,
                               std::span<const std::uint8_t> image_png,
                               const std::vector<DoorBox>& doors, Gateway& gateway,
                               const PipelineConfig& cfg) {
    plan.validate();
    std::set<int> ids;
    for (const auto& door : doors) {
        validate_door(door, plan.width_px, plan.height_px);
        if (!ids.insert(door.door_id).second) {
            throw ValidationError("duplicate door id " + std::to_string(door.door_id));
        }
    }

    PipelineRun run;
    Provenance& prov = run.provenance;
    prov.plan_id = plan.plan_id;
    prov.facility = cfg.facility;
    prov.n_doors = static_cast<int>(doors.size());
    prov.config_echo = {
        {"pair_strategy",
         cfg.pair_strategy == PairStrategy::AllPairs ? "all-pairs" : "distance-gated"},
        {"gate_radius_px", cfg.effective_radius(plan.width_px, plan.height_px)},
        {"overlay_stroke_px", cfg.overlay_stroke_px},
        {"prompt_template_version", gateway.prompts().version()},
        {"backend", gateway.backend().name()},
    };

    const auto connected = stage1_connection(doors, plan, image_png, gateway, cfg, &prov);
    const auto representatives =
        stage2_consolidate(connected, doors, plan, image_png, gateway, cfg, &prov);
    prov.n_missing = stage3_omission(representatives, doors, plan, image_png, gateway,
                                     cfg, &prov);
    prov.n_final = final_count(static_cast<int>(representatives.size()), prov.n_missing);
    validate_chain(prov);

    run.result = EnumerationResult::make(plan.plan_id, cfg.facility,
                                         static_cast<int>(doors.size()), connected,
                                         representatives, prov.n_missing, prov.n_final);
    return run;
}

ojson result_to_json(const EnumerationResult& result) {
    ojson doc;
    doc["plan_id"] = result.plan_id;
    doc["facility"] = to_string(result.facility);
    doc["door_set_size_n"] = result.door_set_size_n;
    doc["connected_doors"] = result.connected_doors;
    doc["representatives"] = result.representatives;
    doc["n_missing"] = result.n_missing;
    doc["n_final"] = result.n_final;
    return doc;
}

EnumerationResult result_from_json(const json& doc, const std::string& context) {
    return EnumerationResult::make(
        require_field(doc, "plan_id", context).get<std::string>(),
        facility_from_string(require_field(doc, "facility", context).get<std::string>()),
        require_field(doc, "door_set_size_n", context).get<int>(),
        require_field(doc, "connected_doors", context).get<std::vector<int>>(),
        require_field(doc, "representatives", context).get<std::vector<int>>(),
        require_field(doc, "n_missing", context).get<int>(),
        require_field(doc, "n_final", context).get<int>());
}

long long baseline_count(const FloorPlanRef& plan, std::span<const std::uint8_t> image_png,
                         FacilityType facility, Gateway& gateway) {
    const QueryKind kind = OmissionQuery::make(facility, {});
    // No overlay: the plain plan raster is the query image.
    const QueryImage image{{image_png.begin(), image_png.end()},
                           plan.image_bytes_digest,
                           plan.image_bytes_digest};
    const AskOutcome outcome = gateway.ask(kind, image);
    return *outcome.answer.count;
}

}  // namespace facenum
