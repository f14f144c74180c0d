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

#include "facenum/evalharness.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <iomanip>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "facenum/llm/oracle.hpp"

namespace facenum {

DatasetManifest DatasetManifest::load(const std::filesystem::path& path) {
    return from_json(load_json_file(path), path.string());
}

DatasetManifest DatasetManifest::from_json(const json& doc, const std::string& context) {
    DatasetManifest m;
    m.dataset = require_field(doc, "dataset", context).get<std::string>();
    const auto& plans = require_field(doc, "plans", context);
    if (!plans.is_array()) throw SchemaError(context + ": 'plans' must be an array");
    for (const auto& p : plans) {
        PlanEntry entry;
        const auto& plan = require_field(p, "plan", context);
        entry.plan.plan_id = require_field(plan, "plan_id", context).get<std::string>();
        entry.plan.image_bytes_digest = plan.value("image_bytes_digest", "");
        entry.plan.width_px = require_field(plan, "width_px", context).get<int>();
        entry.plan.height_px = require_field(plan, "height_px", context).get<int>();
        entry.plan.image_uri = plan.value("image_uri", "");
        for (const auto& [name, count] : require_field(p, "truth", context).items()) {
            entry.truth[facility_from_string(name)] = count.get<long long>();
        }
        if (p.contains("oracle")) entry.oracle_path = p.at("oracle").get<std::string>();
        if (p.contains("detections")) {
            entry.detections_path = p.at("detections").get<std::string>();
        }
        m.plans.push_back(std::move(entry));
    }
    m.validate();
    return m;
}

ojson DatasetManifest::to_json() const {
    ojson doc;
    doc["dataset"] = dataset;
    ojson plan_list = ojson::array();
    for (const auto& entry : plans) {
        ojson p;
        p["plan"] = {{"plan_id", entry.plan.plan_id},
                     {"image_bytes_digest", entry.plan.image_bytes_digest},
                     {"width_px", entry.plan.width_px},
                     {"height_px", entry.plan.height_px},
                     {"image_uri", entry.plan.image_uri}};
        ojson truth = ojson::object();
        for (const auto& [type, count] : entry.truth) {
            truth[std::string(to_string(type))] = count;
        }
        p["truth"] = std::move(truth);
        if (entry.oracle_path) p["oracle"] = *entry.oracle_path;
        if (entry.detections_path) p["detections"] = *entry.detections_path;
        plan_list.push_back(std::move(p));
    }
    doc["plans"] = std::move(plan_list);
    return doc;
}

void DatasetManifest::validate() const {
    std::set<std::string> ids;
    for (const auto& entry : plans) {
        entry.plan.validate();
        if (!ids.insert(entry.plan.plan_id).second) {
            throw ValidationError("duplicate plan_id '" + entry.plan.plan_id + "'");
        }
        for (const auto& [type, count] : entry.truth) {
            if (count < 0) {
                throw ValidationError("negative truth count for '" + entry.plan.plan_id +
                                      "' " + std::string(to_string(type)));
            }
        }
    }
}

double accuracy(const std::map<std::string, long long>& predictions,
                const std::map<std::string, long long>& truth) {
    std::vector<std::string> only_pred, only_truth;
    for (const auto& [k, v] : predictions) {
        if (!truth.count(k)) only_pred.push_back(k);
    }
    for (const auto& [k, v] : truth) {
        if (!predictions.count(k)) only_truth.push_back(k);
    }
    if (!only_pred.empty() || !only_truth.empty()) {
        std::ostringstream msg;
        msg << "prediction/truth key sets differ;";
        if (!only_pred.empty()) {
            msg << " only in predictions:";
            for (const auto& k : only_pred) msg << " " << k;
            msg << ";";
        }
        if (!only_truth.empty()) {
            msg << " only in truth:";
            for (const auto& k : only_truth) msg << " " << k;
        }
        throw ValidationError(msg.str());
    }
    if (truth.empty()) throw ValidationError("accuracy of an empty plan set is undefined");
    std::size_t correct = 0;
    for (const auto& [plan, count] : truth) {
        if (predictions.at(plan) == count) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(truth.size());
}

namespace {

std::vector<int> tile_origins(int extent, int tile, int overlap) {
    std::vector<int> origins;
    if (extent <= tile) return {0};
    const int stride = tile - overlap;
    for (int x = 0;; x += stride) {
        if (x + tile >= extent) {
            origins.push_back(extent - tile);
            break;
        }
        origins.push_back(x);
    }
    origins.erase(std::unique(origins.begin(), origins.end()), origins.end());
    return origins;
}

}  // namespace

TilingPlan plan_tiles(const FloorPlanRef& plan, int tile_size_px, int overlap_px) {
    plan.validate();
    if (tile_size_px <= 0) throw ValidationError("tile_size_px must be positive");
    if (overlap_px < 0 || overlap_px >= tile_size_px) {
        throw ValidationError("overlap_px must satisfy 0 <= overlap < tile_size");
    }
    TilingPlan tiling;
    tiling.tile_size_px = tile_size_px;
    tiling.overlap_px = overlap_px;
    const auto xs = tile_origins(plan.width_px, tile_size_px, overlap_px);
    const auto ys = tile_origins(plan.height_px, tile_size_px, overlap_px);
    for (int y : ys) {
        for (int x : xs) {
            tiling.tiles.push_back(Box{x, y, std::min(x + tile_size_px, plan.width_px),
                                       std::min(y + tile_size_px, plan.height_px)});
        }
    }
    return tiling;
}

std::vector<DoorBox> merge_tile_detections(const std::vector<TileDetections>& per_tile,
                                           double dedup_iou) {
    std::vector<DoorBox> global;
    for (const auto& tile : per_tile) {
        for (DoorBox det : tile.detections) {
            det.box.x_min += tile.origin_x;
            det.box.x_max += tile.origin_x;
            det.box.y_min += tile.origin_y;
            det.box.y_max += tile.origin_y;
            global.push_back(det);
        }
    }
    // Greedy highest-confidence-first suppression, then a position-stable
    // ordering so re-merging a merged set is the identity.
    std::sort(global.begin(), global.end(), [](const DoorBox& a, const DoorBox& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        return a.box < b.box;
    });
    std::vector<DoorBox> kept;
    for (const auto& cand : global) {
        bool suppressed = false;
        for (const auto& k : kept) {
            if (iou(cand.box, k.box) >= dedup_iou) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(cand);
    }
    std::sort(kept.begin(), kept.end(), [](const DoorBox& a, const DoorBox& b) {
        if (a.box != b.box) return a.box < b.box;
        return a.confidence < b.confidence;
    });
    for (std::size_t i = 0; i < kept.size(); ++i) kept[i].door_id = static_cast<int>(i);
    return kept;
}

std::string_view to_string(RunMode mode) {
    return mode == RunMode::Baseline ? "baseline" : "cot";
}

namespace {

struct CellOutcome {
    bool ok = false;
    long long predicted = -1;
    std::string error;
};

template <typename F>
void pooled_for(std::size_t n, int workers, F&& f) {
    const int use = static_cast<int>(std::min<std::size_t>(std::max(workers, 1), n));
    if (use <= 1) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < use; ++t) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= n) return;
                f(i);  // f must not throw
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace

ComparisonTable run_comparison(const DatasetManifest& manifest,
                               const BackendProvider& provider,
                               const ComparisonConfig& cfg) {
    manifest.validate();
    if (manifest.plans.empty()) {
        throw ValidationError("manifest '" + manifest.dataset + "' has no plans");
    }
    if (cfg.facilities.empty()) {
        throw ValidationError("no facility types selected for comparison");
    }

    const auto meter = std::make_shared<std::atomic<long long>>(0);

    // plan -> facility -> mode -> outcome
    std::vector<std::map<FacilityType, std::map<RunMode, CellOutcome>>> outcomes(
        manifest.plans.size());

    pooled_for(manifest.plans.size(), cfg.workers, [&](std::size_t plan_index) {
        const PlanEntry& entry = manifest.plans[plan_index];
        auto& per_plan = outcomes[plan_index];
        std::vector<std::uint8_t> image;
        std::vector<DoorBox> doors;
        std::shared_ptr<Backend> backend;
        std::unique_ptr<Gateway> gateway;
        std::string setup_error;
        try {
            image = read_file_bytes(entry.plan.image_uri);
            if (entry.detections_path) {
                doors = filter_doors(load_detections(*entry.detections_path, entry.plan),
                                     cfg.detector);
            }
            backend = provider(entry);
            backend->share_meter(meter);
            gateway = std::make_unique<Gateway>(backend, cfg.cache, cfg.prompts);
        } catch (const std::exception& e) {
            setup_error = e.what();
        }
        for (FacilityType facility : cfg.facilities) {
            for (RunMode mode : cfg.modes) {
                CellOutcome& cell = per_plan[facility][mode];
                if (!setup_error.empty()) {
                    cell.error = setup_error;
                    continue;
                }
                try {
                    if (mode == RunMode::Baseline) {
                        cell.predicted =
                            baseline_count(entry.plan, image, facility, *gateway);
                    } else {
                        PipelineConfig pipe;
                        pipe.facility = facility;
                        pipe.pair_strategy = cfg.pair_strategy;
                        cell.predicted =
                            enumerate_facility(entry.plan, image, doors, *gateway, pipe)
                                .result.n_final;
                    }
                    cell.ok = true;
                } catch (const std::exception& e) {
                    cell.error = e.what();
                }
            }
        }
    });

    ComparisonTable table;
    table.backend_invocations = meter->load();
    for (FacilityType facility : cfg.facilities) {
        for (RunMode mode : cfg.modes) {
            ComparisonCell cell;
            cell.dataset = manifest.dataset;
            cell.facility = facility;
            cell.mode = mode;
            for (std::size_t i = 0; i < manifest.plans.size(); ++i) {
                const PlanEntry& entry = manifest.plans[i];
                const CellOutcome& outcome = outcomes[i].at(facility).at(mode);
                const long long truth =
                    entry.truth.count(facility) ? entry.truth.at(facility) : 0;
                if (!outcome.ok) {
                    table.failures.push_back(entry.plan.plan_id + "/" +
                                             std::string(to_string(facility)) + "/" +
                                             std::string(to_string(mode)) + ": " +
                                             outcome.error);
                    if (cfg.exclude_failed_plans) continue;
                    ++cell.n_plans;  // scored as incorrect
                    continue;
                }
                ++cell.n_plans;
                if (outcome.predicted == truth) ++cell.n_correct;
            }
            cell.accuracy = cell.n_plans == 0
                                ? 0.0
                                : static_cast<double>(cell.n_correct) / cell.n_plans;
            table.cells.push_back(std::move(cell));
        }
    }
    std::sort(table.failures.begin(), table.failures.end());
    return table;
}

std::string ComparisonTable::to_csv() const {
    std::string out = "dataset,facility,backend,n_plans,n_correct,accuracy\n";
    for (const auto& c : cells) {
        char line[256];
        std::snprintf(line, sizeof(line), "%s,%s,%s,%d,%d,%.6f\n", c.dataset.c_str(),
                      std::string(to_string(c.facility)).c_str(),
                      std::string(to_string(c.mode)).c_str(), c.n_plans, c.n_correct,
                      c.accuracy);
        out += line;
    }
    return out;
}

std::string ComparisonTable::to_text() const {
    // Mirror of the usual comparison layout: dataset rows, one accuracy
    // column per mode, one block per facility.
    std::ostringstream out;
    std::vector<FacilityType> facilities;
    std::vector<RunMode> modes;
    for (const auto& c : cells) {
        if (std::find(facilities.begin(), facilities.end(), c.facility) ==
            facilities.end()) {
            facilities.push_back(c.facility);
        }
        if (std::find(modes.begin(), modes.end(), c.mode) == modes.end()) {
            modes.push_back(c.mode);
        }
    }
    for (FacilityType facility : facilities) {
        out << "== " << to_string(facility) << " accuracy (%) ==\n";
        out << std::left << std::setw(24) << "dataset" << std::setw(8) << "plans";
        for (RunMode m : modes) out << std::setw(12) << to_string(m);
        out << "\n";
        std::set<std::string> datasets;
        for (const auto& c : cells) {
            if (c.facility == facility) datasets.insert(c.dataset);
        }
        for (const auto& dataset : datasets) {
            int n_plans = 0;
            out << std::left << std::setw(24) << dataset;
            std::ostringstream row;
            for (RunMode m : modes) {
                for (const auto& c : cells) {
                    if (c.facility == facility && c.mode == m && c.dataset == dataset) {
                        n_plans = c.n_plans;
                        char val[32];
                        std::snprintf(val, sizeof(val), "%.2f", 100.0 * c.accuracy);
                        row << std::left << std::setw(12) << val;
                    }
                }
            }
            out << std::setw(8) << n_plans << row.str() << "\n";
        }
        out << "\n";
    }
    if (!failures.empty()) {
        out << failures.size() << " failed runs (scored as incorrect unless excluded)\n";
    }
    return out.str();
}

}  // namespace facenum
