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

#include "facenum/detection.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <thread>

#include <httplib.h>

#include "facenum/json_util.hpp"

namespace facenum {

void DetectorConfig::validate() const {
    if (confidence_threshold < 0.0 || confidence_threshold > 1.0) {
        throw ValidationError("confidence_threshold outside [0,1]");
    }
    if (dedup_iou_threshold < 0.0 || dedup_iou_threshold > 1.0) {
        throw ValidationError("dedup_iou_threshold outside [0,1]");
    }
    if (max_attempts < 1) throw ValidationError("max_attempts must be >= 1");
}

std::vector<DoorBox> parse_detections(const json& doc, const FloorPlanRef& plan,
                                      const std::string& context,
                                      std::vector<std::string>* warnings) {
    plan.validate();
    const auto& plan_id = require_field(doc, "plan_id", context);
    if (!plan_id.is_string()) throw SchemaError(context + ": 'plan_id' must be a string");
    if (plan_id.get<std::string>() != plan.plan_id) {
        throw ValidationError(context + ": manifest plan_id '" + plan_id.get<std::string>() +
                              "' does not match plan '" + plan.plan_id + "'");
    }
    const auto& detector = require_field(doc, "detector", context);
    if (!detector.is_string()) throw SchemaError(context + ": 'detector' must be a string");
    const auto& dets = require_field(doc, "detections", context);
    if (!dets.is_array()) throw SchemaError(context + ": 'detections' must be an array");

    std::vector<DoorBox> doors;
    doors.reserve(dets.size());
    int next_id = 0;
    for (const auto& entry : dets) {
        const std::string ectx = context + ": detections[" + std::to_string(next_id) + "]";
        const auto& box_field = require_field(entry, "box", ectx);
        if (!box_field.is_array() || box_field.size() != 4) {
            throw SchemaError(ectx + ": 'box' must be an array of 4 coordinates");
        }
        const auto& conf_field = require_field(entry, "confidence", ectx);
        if (!conf_field.is_number()) {
            throw SchemaError(ectx + ": 'confidence' must be a number");
        }
        for (const auto& c : box_field) {
            if (!c.is_number()) throw SchemaError(ectx + ": 'box' coordinates must be numbers");
        }
        DoorBox door;
        door.door_id = next_id++;
        // Detectors commonly emit float coordinates; round to the pixel grid.
        door.box = Box{static_cast<int>(std::lround(box_field[0].get<double>())),
                       static_cast<int>(std::lround(box_field[1].get<double>())),
                       static_cast<int>(std::lround(box_field[2].get<double>())),
                       static_cast<int>(std::lround(box_field[3].get<double>()))};
        door.confidence = conf_field.get<double>();
        if (door.confidence < 0.0 || door.confidence > 1.0) {
            throw ValidationError(ectx + ": confidence " + std::to_string(door.confidence) +
                                  " outside [0,1]");
        }
        if (!door.box.valid()) {
            throw ValidationError(ectx + ": box has no area");
        }
        const Box clamped = clamp_box(door.box, plan.width_px, plan.height_px);
        if (clamped != door.box) {
            if (!clamped.valid()) {
                throw ValidationError(ectx + ": box lies entirely outside the plan bounds");
            }
            if (warnings) {
                warnings->push_back(ectx + ": box extended past plan bounds, clamped");
            }
            door.box = clamped;
        }
        validate_door(door, plan.width_px, plan.height_px);
        doors.push_back(door);
    }
    return doors;
}

std::vector<DoorBox> load_detections(const std::filesystem::path& manifest_path,
                                     const FloorPlanRef& plan,
                                     std::vector<std::string>* warnings) {
    const json doc = load_json_file(manifest_path);
    return parse_detections(doc, plan, manifest_path.string(), warnings);
}

namespace {

// Splits "http://host:port/path" into client base and request path.
std::pair<std::string, std::string> split_url(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw ConfigError("endpoint '" + url + "' has no scheme");
    }
    auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos) return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::vector<DoorBox> fetch_detections(const FloorPlanRef& plan, const DetectorConfig& cfg,
                                      std::vector<std::string>* warnings) {
    cfg.validate();
    std::string endpoint = cfg.endpoint.value_or("");
    if (endpoint.empty()) {
        if (const char* env = std::getenv("FE_DETECTOR_URL")) endpoint = env;
    }
    if (endpoint.empty()) {
        throw ConfigError("no detector endpoint configured (set FE_DETECTOR_URL)");
    }
    const auto image = read_file_bytes(plan.image_uri);

    const auto [base, path] = split_url(endpoint);
    std::string last_failure;
    for (int attempt = 1; attempt <= cfg.max_attempts; ++attempt) {
        httplib::Client client(base);
        client.set_connection_timeout(10);
        client.set_read_timeout(30);
        auto res = client.Post(path, reinterpret_cast<const char*>(image.data()),
                               image.size(), "image/png");
        if (!res) {
            last_failure = "connection to " + endpoint + " failed: " +
                           httplib::to_string(res.error());
        } else if (res->status >= 500) {
            last_failure = endpoint + " replied " + std::to_string(res->status);
        } else if (res->status != 200) {
            throw ProtocolError("detector replied " + std::to_string(res->status) + ": " +
                                res->body);
        } else {
            json doc;
            try {
                doc = json::parse(res->body);
            } catch (const json::parse_error& e) {
                throw ProtocolError("detector payload is not JSON: " + std::string(e.what()));
            }
            try {
                return parse_detections(doc, plan, "detector reply", warnings);
            } catch (const SchemaError& e) {
                throw ProtocolError(e.what());
            }
        }
        if (attempt < cfg.max_attempts) {
            std::this_thread::sleep_for(
                std::chrono::milliseconds(cfg.retry_base_ms << (attempt - 1)));
        }
    }
    throw TransportError(last_failure, cfg.max_attempts);
}

std::vector<DoorBox> filter_doors(const std::vector<DoorBox>& doors,
                                  const DetectorConfig& cfg) {
    cfg.validate();
    std::vector<DoorBox> gated;
    for (const auto& d : doors) {
        if (d.confidence >= cfg.confidence_threshold) gated.push_back(d);
    }
    // Greedy suppression, highest confidence first; door id breaks ties so the
    // outcome does not depend on input order.
    std::vector<DoorBox> ranked = gated;
    std::sort(ranked.begin(), ranked.end(), [](const DoorBox& a, const DoorBox& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        return a.door_id < b.door_id;
    });
    std::vector<DoorBox> kept;
    for (const auto& cand : ranked) {
        bool suppressed = false;
        for (const auto& k : kept) {
            if (iou(cand.box, k.box) >= cfg.dedup_iou_threshold) {
                suppressed = true;
                break;
            }
        }
        if (!suppressed) kept.push_back(cand);
    }
    std::sort(kept.begin(), kept.end(),
              [](const DoorBox& a, const DoorBox& b) { return a.door_id < b.door_id; });
    for (std::size_t i = 0; i < kept.size(); ++i) kept[i].door_id = static_cast<int>(i);
    return kept;
}

ojson detections_to_json(const std::string& plan_id, const std::string& detector_name,
                         const std::vector<DoorBox>& doors) {
    ojson doc;
    doc["plan_id"] = plan_id;
    doc["detector"] = detector_name;
    ojson entries = ojson::array();
    for (const auto& d : doors) {
        ojson e;
        e["box"] = {d.box.x_min, d.box.y_min, d.box.x_max, d.box.y_max};
        e["confidence"] = d.confidence;
        entries.push_back(std::move(e));
    }
    doc["detections"] = std::move(entries);
    return doc;
}

}  // namespace facenum
