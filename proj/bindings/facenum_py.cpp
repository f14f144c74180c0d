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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "facenum/compliance.hpp"
#include "facenum/digest.hpp"
#include "facenum/detection.hpp"
#include "facenum/evalharness.hpp"
#include "facenum/llm/oracle.hpp"
#include "facenum/llm/parse.hpp"
#include "facenum/raster.hpp"
#include "facenum/pipeline.hpp"
#include "facenum/synthetic.hpp"

namespace py = pybind11;
using namespace facenum;

namespace {

std::map<FacilityType, long long> counts_from_dict(
    const std::map<std::string, long long>& counts) {
    std::map<FacilityType, long long> out;
    for (const auto& [name, value] : counts) out[facility_from_string(name)] = value;
    return out;
}

/// End-to-end offline run: pipeline over a plan image + detections with the
/// oracle backend, returning the result as a plain dict.
py::dict enumerate_with_oracle(const std::string& image_path,
                               const std::string& detections_path,
                               const std::string& oracle_path,
                               const std::string& facility,
                               const std::string& plan_id) {
    const auto image = read_file_bytes(image_path);
    const Image decoded = decode_image(image);
    FloorPlanRef plan;
    plan.plan_id = plan_id;
    plan.image_bytes_digest = sha256_hex(image);
    plan.width_px = decoded.width();
    plan.height_px = decoded.height();
    plan.image_uri = image_path;

    auto doors = filter_doors(load_detections(detections_path, plan), DetectorConfig{});
    auto backend = std::make_shared<OracleBackend>(OracleFixture::load(oracle_path));
    Gateway gateway(backend, nullptr);
    PipelineConfig cfg;
    cfg.facility = facility_from_string(facility);
    const PipelineRun run = enumerate_facility(plan, image, doors, gateway, cfg);

    py::dict out;
    out["plan_id"] = run.result.plan_id;
    out["facility"] = std::string(to_string(run.result.facility));
    out["door_set_size_n"] = run.result.door_set_size_n;
    out["connected_doors"] = run.result.connected_doors;
    out["representatives"] = run.result.representatives;
    out["n_missing"] = run.result.n_missing;
    out["n_final"] = run.result.n_final;
    return out;
}

py::dict check_compliance(const std::map<std::string, long long>& provided,
                          const std::string& context_json) {
    const BuildingContext ctx =
        BuildingContext::from_json(json::parse(context_json), "context");
    const ComplianceReport report =
        evaluate(counts_from_dict(provided), ctx, RuleCatalog::builtin());
    py::dict out;
    out["overall_pass"] = report.overall_pass;
    out["report_json"] = report.to_json().dump();
    return out;
}

std::string generate_bundle(const std::string& spec_json, const std::string& out_dir) {
    const ScenarioSpec spec = ScenarioSpec::from_json(json::parse(spec_json), "spec");
    const Scenario scenario = generate(spec);
    const PlanEntry entry = write_bundle(scenario, out_dir);
    DatasetManifest manifest;
    manifest.dataset = "synthetic";
    manifest.plans.push_back(entry);
    write_json_file(std::filesystem::path(out_dir) / "manifest.json", manifest.to_json());
    return scenario.plan.plan_id;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Door-anchored facility enumeration and rule checking for floor plans";

    py::register_exception<Error>(m, "FacenumError");

    py::class_<Box>(m, "Box")
        .def(py::init<int, int, int, int>(), py::arg("x_min"), py::arg("y_min"),
             py::arg("x_max"), py::arg("y_max"))
        .def_readwrite("x_min", &Box::x_min)
        .def_readwrite("y_min", &Box::y_min)
        .def_readwrite("x_max", &Box::x_max)
        .def_readwrite("y_max", &Box::y_max)
        .def("area", &Box::area)
        .def("__repr__", [](const Box& b) {
            return "Box(" + std::to_string(b.x_min) + ", " + std::to_string(b.y_min) +
                   ", " + std::to_string(b.x_max) + ", " + std::to_string(b.y_max) + ")";
        });

    py::class_<DoorBox>(m, "DoorBox")
        .def(py::init([](int door_id, const Box& box, double confidence) {
                 return DoorBox{door_id, box, confidence};
             }),
             py::arg("door_id"), py::arg("box"), py::arg("confidence"))
        .def_readwrite("door_id", &DoorBox::door_id)
        .def_readwrite("box", &DoorBox::box)
        .def_readwrite("confidence", &DoorBox::confidence);

    m.def("iou", &iou, py::arg("a"), py::arg("b"),
          "intersection-over-union of two boxes");
    m.def("final_count", &final_count, py::arg("representatives_size"),
          py::arg("n_missing"), "n_final = representatives + missing");
    m.def(
        "parse_verdict",
        [](const std::string& raw) { return std::string(to_string(parse_verdict(raw))); },
        py::arg("raw"), "first standalone yes/no token in a reply");
    m.def("parse_count", &parse_count, py::arg("raw"),
          "first non-negative integer in a reply (zero..ten words included)");
    m.def("facility_types", [] {
        std::vector<std::string> names;
        for (FacilityType t : kAllFacilityTypes) names.emplace_back(to_string(t));
        return names;
    });

    m.def(
        "filter_doors",
        [](const std::vector<DoorBox>& doors, double confidence_threshold,
           double dedup_iou_threshold) {
            DetectorConfig cfg;
            cfg.confidence_threshold = confidence_threshold;
            cfg.dedup_iou_threshold = dedup_iou_threshold;
            return filter_doors(doors, cfg);
        },
        py::arg("doors"), py::arg("confidence_threshold") = 0.5,
        py::arg("dedup_iou_threshold") = 0.8,
        "confidence gate + overlap suppression, ids re-indexed densely");

    m.def(
        "plan_tiles",
        [](int width_px, int height_px, int tile_size_px, int overlap_px) {
            FloorPlanRef plan;
            plan.plan_id = "py";
            plan.width_px = width_px;
            plan.height_px = height_px;
            std::vector<Box> tiles = plan_tiles(plan, tile_size_px, overlap_px).tiles;
            return tiles;
        },
        py::arg("width_px"), py::arg("height_px"), py::arg("tile_size_px"),
        py::arg("overlap_px"), "sliding-window tile boxes covering the image");

    m.def(
        "merge_tile_detections",
        [](const std::vector<std::tuple<int, int, std::vector<DoorBox>>>& per_tile,
           double dedup_iou) {
            std::vector<TileDetections> tiles;
            for (const auto& [ox, oy, dets] : per_tile) {
                tiles.push_back(TileDetections{ox, oy, dets});
            }
            return merge_tile_detections(tiles, dedup_iou);
        },
        py::arg("per_tile"), py::arg("dedup_iou") = 0.8,
        "translate tile-local detections and suppress cross-tile duplicates");

    m.def(
        "accuracy",
        [](const std::map<std::string, long long>& predictions,
           const std::map<std::string, long long>& truth) {
            return accuracy(predictions, truth);
        },
        py::arg("predictions"), py::arg("truth"),
        "exact-count accuracy over plans (zero tolerance)");

    m.def("enumerate_with_oracle", &enumerate_with_oracle, py::arg("image_path"),
          py::arg("detections_path"), py::arg("oracle_path"), py::arg("facility"),
          py::arg("plan_id"),
          "run the staged pipeline offline against an oracle fixture");
    m.def("check_compliance", &check_compliance, py::arg("provided"),
          py::arg("context_json"),
          "evaluate facility counts against the built-in rule catalog");
    m.def("generate_bundle", &generate_bundle, py::arg("spec_json"), py::arg("out_dir"),
          "generate a synthetic scenario bundle and manifest; returns the plan id");

    m.attr("__version__") = "0.1.0";
}
