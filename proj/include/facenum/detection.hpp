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
#include <optional>
#include <string>
#include <vector>

#include "facenum/json_util.hpp"
#include "facenum/types.hpp"

namespace facenum {

/// Raw detector output for one plan, before post-filtering.
struct DetectionManifest {
    std::string plan_id;
    std::string detector_name;
    std::vector<DoorBox> entries;
};

/// Detector post-filter and remote-detector settings. The defaults are
/// engineering choices, echoed into every provenance record.
struct DetectorConfig {
    double confidence_threshold = 0.50;
    double dedup_iou_threshold = 0.80;
    std::optional<std::string> endpoint;  // falls back to FE_DETECTOR_URL
    int max_attempts = 3;
    int retry_base_ms = 100;

    void validate() const;
};

/// Loads a detection manifest and validates it against the plan. Door ids are
/// assigned sequentially in file order; boxes extending past the plan bounds
/// are clamped with a warning appended to `warnings` (if given).
std::vector<DoorBox> load_detections(const std::filesystem::path& manifest_path,
                                     const FloorPlanRef& plan,
                                     std::vector<std::string>* warnings = nullptr);

/// Parses the detection-manifest JSON shape out of an already-loaded document.
/// `context` names the source for error messages.
std::vector<DoorBox> parse_detections(const json& doc, const FloorPlanRef& plan,
                                      const std::string& context,
                                      std::vector<std::string>* warnings = nullptr);

/// POSTs the plan raster to the detector service and validates the reply like
/// load_detections. Transport failures are retried with backoff; exhausting
/// the attempts raises TransportError with the attempt count.
std::vector<DoorBox> fetch_detections(const FloorPlanRef& plan, const DetectorConfig& cfg,
                                      std::vector<std::string>* warnings = nullptr);

/// Confidence gate followed by greedy highest-confidence-first overlap
/// suppression (ties broken by lower door id). Survivors keep their relative
/// door-id order and are re-indexed densely from 0. Idempotent.
std::vector<DoorBox> filter_doors(const std::vector<DoorBox>& doors,
                                  const DetectorConfig& cfg);

/// Serializes doors back into the manifest JSON shape.
ojson detections_to_json(const std::string& plan_id, const std::string& detector_name,
                         const std::vector<DoorBox>& doors);

}  // namespace facenum
