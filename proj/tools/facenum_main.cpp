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

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "facenum/compliance.hpp"
#include "facenum/digest.hpp"
#include "facenum/detection.hpp"
#include "facenum/evalharness.hpp"
#include "facenum/llm/oracle.hpp"
#include "facenum/llm/remote.hpp"
#include "facenum/pipeline.hpp"
#include "facenum/raster.hpp"
#include "facenum/synthetic.hpp"

namespace fs = std::filesystem;
using namespace facenum;

namespace {

// Exit-code contract: 0 success/pass, 1 compliance fail, 2 usage/config
// error, 3 runtime/transport error.
constexpr int kExitPass = 0;
constexpr int kExitComplianceFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

int exit_code_for(const Error& e) {
    switch (e.kind()) {
        case ErrorKind::Usage:
        case ErrorKind::Config:
        case ErrorKind::Validation:
        case ErrorKind::Schema:
        case ErrorKind::Generation:
            return kExitUsage;
        default:
            return kExitRuntime;
    }
}

std::string iso_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%FT%TZ", std::gmtime(&t));
    return buf;
}

/// Flags > environment > config file > defaults.
struct Settings {
    json config = json::object();

    std::string resolve(const std::string& flag_value, const char* env_name,
                        const std::string& config_key, const std::string& fallback) const {
        if (!flag_value.empty()) return flag_value;
        if (env_name) {
            if (const char* v = std::getenv(env_name)) {
                if (*v) return v;
            }
        }
        if (config.contains(config_key)) return config.at(config_key).get<std::string>();
        return fallback;
    }
};

std::vector<FacilityType> parse_facilities(const std::vector<std::string>& names) {
    std::vector<FacilityType> out;
    for (const auto& name : names) {
        if (name == "all") {
            out.assign(kAllFacilityTypes.begin(), kAllFacilityTypes.end());
            return out;
        }
        out.push_back(facility_from_string(name));
    }
    return out;
}

std::shared_ptr<AnswerCache> open_cache(const Settings& settings,
                                        const std::string& cache_flag) {
    const std::string dir =
        settings.resolve(cache_flag, "FE_CACHE_DIR", "cache_dir", "");
    if (dir.empty()) return nullptr;
    return std::make_shared<DiskCache>(dir);
}

PromptLibrary open_prompts(const Settings& settings, const std::string& prompts_flag) {
    const std::string path = settings.resolve(prompts_flag, nullptr, "prompts_path", "");
    if (path.empty()) return PromptLibrary::builtin();
    return PromptLibrary::load(path);
}

struct CommonArgs {
    std::string config_path;
    std::string cache_dir;
    std::string prompts_path;
    bool verbose = false;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "JSON config file");
    cmd->add_option("--cache-dir", args.cache_dir,
                    "answer cache directory (env FE_CACHE_DIR)");
    cmd->add_option("--prompts", args.prompts_path, "prompt template file");
    cmd->add_flag("-v,--verbose", args.verbose, "log progress to stderr");
}

Settings load_settings(const CommonArgs& args) {
    Settings settings;
    if (!args.config_path.empty()) settings.config = load_json_file(args.config_path);
    return settings;
}

// ---------------------------------------------------------------------------
// enumerate
// ---------------------------------------------------------------------------

struct EnumerateArgs {
    CommonArgs common;
    std::string image_path;
    std::string plan_id;
    std::string detections_path;
    std::string detector_url;
    std::vector<std::string> facilities{"all"};
    std::string backend = "oracle";
    std::string oracle_path;
    std::string out_dir = "facenum-out";
    double confidence_threshold = -1.0;
    double dedup_iou = -1.0;
    std::string pair_strategy = "all-pairs";
    double gate_radius = 0.0;
};

int run_enumerate(const EnumerateArgs& args) {
    const auto started = std::chrono::steady_clock::now();
    const std::string started_at = iso_now();
    const Settings settings = load_settings(args.common);

    const auto image = read_file_bytes(args.image_path);
    const Image decoded = decode_image(image);
    FloorPlanRef plan;
    plan.plan_id = args.plan_id.empty() ? fs::path(args.image_path).stem().string()
                                        : args.plan_id;
    plan.image_bytes_digest = sha256_hex(image);
    plan.width_px = decoded.width();
    plan.height_px = decoded.height();
    plan.image_uri = args.image_path;

    DetectorConfig det;
    if (args.confidence_threshold >= 0) det.confidence_threshold = args.confidence_threshold;
    else if (settings.config.contains("confidence_threshold"))
        det.confidence_threshold = settings.config.at("confidence_threshold").get<double>();
    if (args.dedup_iou >= 0) det.dedup_iou_threshold = args.dedup_iou;
    else if (settings.config.contains("dedup_iou_threshold"))
        det.dedup_iou_threshold = settings.config.at("dedup_iou_threshold").get<double>();

    std::vector<std::string> warnings;
    std::vector<DoorBox> doors;
    if (!args.detections_path.empty()) {
        doors = load_detections(args.detections_path, plan, &warnings);
    } else {
        const std::string url = settings.resolve(args.detector_url, "FE_DETECTOR_URL",
                                                 "detector_url", "");
        if (url.empty()) {
            throw UsageError(
                "no detections source: pass --detections or --detector-url "
                "(env FE_DETECTOR_URL)");
        }
        det.endpoint = url;
        doors = fetch_detections(plan, det, &warnings);
    }
    doors = filter_doors(doors, det);

    std::shared_ptr<Backend> backend;
    if (args.backend == "oracle") {
        if (args.oracle_path.empty()) {
            throw ConfigError("oracle backend needs --oracle <fixture.json>");
        }
        backend = std::make_shared<OracleBackend>(OracleFixture::load(args.oracle_path));
    } else if (args.backend == "remote") {
        RemoteConfig rc;
        rc.url = settings.resolve("", "FE_LLM_URL", "llm_url", "");
        rc.api_key = settings.resolve("", "FE_LLM_KEY", "llm_key", "");
        rc.model = settings.resolve("", "FE_LLM_MODEL", "llm_model", "");
        backend = std::make_shared<RemoteBackend>(rc);
    } else {
        throw UsageError("unknown backend '" + args.backend + "' (oracle|remote)");
    }
    Gateway gateway(backend, open_cache(settings, args.common.cache_dir),
                    open_prompts(settings, args.common.prompts_path));

    fs::create_directories(args.out_dir);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

    std::vector<std::string> failures;
    ojson per_facility_meta = ojson::object();
    for (FacilityType facility : parse_facilities(args.facilities)) {
        PipelineConfig cfg;
        cfg.facility = facility;
        cfg.pair_strategy = args.pair_strategy == "distance-gated"
                                ? PairStrategy::DistanceGated
                                : PairStrategy::AllPairs;
        cfg.gate_radius_px = args.gate_radius;
        const std::string stem =
            plan.plan_id + "-" + std::string(to_string(facility));
        try {
            const PipelineRun run = enumerate_facility(plan, image, doors, gateway, cfg);
            write_json_file(fs::path(args.out_dir) / (stem + ".result.json"),
                            result_to_json(run.result));
            write_json_file(fs::path(args.out_dir) / (stem + ".provenance.json"),
                            run.provenance.to_json());
            per_facility_meta[std::string(to_string(facility))] = "ok";
            if (args.common.verbose) {
                std::cerr << to_string(facility) << ": n_final=" << run.result.n_final
                          << "\n";
            }
        } catch (const Error& e) {
            // Stage failures abort this facility only; keep a marker so the
            // partial output is self-describing.
            failures.push_back(std::string(to_string(facility)) + ": " + e.what());
            write_json_file(fs::path(args.out_dir) / (stem + ".failed.json"),
                            ojson{{"plan_id", plan.plan_id},
                                  {"facility", to_string(facility)},
                                  {"error", e.what()}});
            per_facility_meta[std::string(to_string(facility))] = e.what();
        }
    }

    const auto elapsed = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - started)
                             .count();
    write_json_file(fs::path(args.out_dir) / "run_meta.json",
                    ojson{{"command", "enumerate"},
                          {"started_at", started_at},
                          {"elapsed_ms", elapsed},
                          {"plan_id", plan.plan_id},
                          {"backend", backend->name()},
                          {"backend_invocations", backend->invocations()},
                          {"detector_config",
                           {{"confidence_threshold", det.confidence_threshold},
                            {"dedup_iou_threshold", det.dedup_iou_threshold}}},
                          {"warnings", warnings},
                          {"facilities", per_facility_meta}});

    if (!failures.empty()) {
        for (const auto& f : failures) std::cerr << "error: " << f << "\n";
        return kExitRuntime;
    }
    return kExitPass;
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

struct CheckArgs {
    CommonArgs common;
    std::string context_path;
    std::string results_dir;
    std::string counts_path;
    std::string catalog_path;
    std::string out_path;
};

int run_check(const CheckArgs& args) {
    const json ctx_doc = load_json_file(args.context_path);
    const BuildingContext ctx = BuildingContext::from_json(ctx_doc, args.context_path);

    std::map<FacilityType, long long> provided;
    if (!args.counts_path.empty()) {
        for (const auto& [name, count] : load_json_file(args.counts_path).items()) {
            provided[facility_from_string(name)] = count.get<long long>();
        }
    } else if (!args.results_dir.empty()) {
        // Building totals: sum n_final over every result file in the directory.
        bool any = false;
        for (const auto& entry : fs::directory_iterator(args.results_dir)) {
            const std::string name = entry.path().filename().string();
            if (!name.ends_with(".result.json")) continue;
            const EnumerationResult result =
                result_from_json(load_json_file(entry.path()), entry.path().string());
            provided[result.facility] += result.n_final;
            any = true;
        }
        if (!any) {
            throw UsageError("no *.result.json files under '" + args.results_dir + "'");
        }
    } else {
        throw UsageError("pass --results <dir> or --counts <file>");
    }

    const RuleCatalog catalog = args.catalog_path.empty()
                                    ? RuleCatalog::builtin()
                                    : RuleCatalog::load(args.catalog_path);
    const ComplianceReport report = evaluate(provided, ctx, catalog);

    std::cout << report.to_table();
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    if (!args.out_path.empty()) write_json_file(args.out_path, report.to_json());
    return report.overall_pass ? kExitPass : kExitComplianceFail;
}

// ---------------------------------------------------------------------------
// evaluate
// ---------------------------------------------------------------------------

struct EvaluateArgs {
    CommonArgs common;
    std::string manifest_path;
    std::vector<std::string> modes{"baseline", "cot"};
    std::string backend = "oracle";
    double epsilon = 0.0;
    std::uint64_t seed = 0;
    std::vector<std::string> facilities;
    std::string out_dir = "facenum-eval";
    bool exclude_failed = false;
    int workers = 4;
};

int run_evaluate(const EvaluateArgs& args) {
    const auto started = std::chrono::steady_clock::now();
    const std::string started_at = iso_now();
    const Settings settings = load_settings(args.common);

    const DatasetManifest manifest = DatasetManifest::load(args.manifest_path);

    ComparisonConfig cfg;
    cfg.exclude_failed_plans = args.exclude_failed;
    cfg.workers = args.workers;
    cfg.cache = open_cache(settings, args.common.cache_dir);
    cfg.prompts = open_prompts(settings, args.common.prompts_path);
    cfg.modes.clear();
    for (const auto& mode : args.modes) {
        if (mode == "baseline") cfg.modes.push_back(RunMode::Baseline);
        else if (mode == "cot") cfg.modes.push_back(RunMode::CoT);
        else throw UsageError("unknown mode '" + mode + "' (baseline|cot)");
    }
    if (!args.facilities.empty()) {
        cfg.facilities = parse_facilities(args.facilities);
    } else {
        // Default: every type with a nonzero truth anywhere in the manifest.
        std::set<FacilityType> present;
        for (const auto& entry : manifest.plans) {
            for (const auto& [type, count] : entry.truth) {
                if (count > 0) present.insert(type);
            }
        }
        cfg.facilities.assign(present.begin(), present.end());
        if (cfg.facilities.empty()) cfg.facilities.push_back(FacilityType::Toilet);
    }

    BackendProvider provider;
    if (args.backend == "oracle") {
        const double eps = args.epsilon;
        const std::uint64_t seed = args.seed;
        provider = [eps, seed](const PlanEntry& entry) -> std::shared_ptr<Backend> {
            if (!entry.oracle_path) {
                throw ConfigError("plan '" + entry.plan.plan_id +
                                  "' has no oracle fixture path");
            }
            return std::make_shared<OracleBackend>(OracleFixture::load(*entry.oracle_path),
                                                   eps, seed);
        };
    } else if (args.backend == "remote") {
        RemoteConfig rc;
        rc.url = settings.resolve("", "FE_LLM_URL", "llm_url", "");
        rc.api_key = settings.resolve("", "FE_LLM_KEY", "llm_key", "");
        rc.model = settings.resolve("", "FE_LLM_MODEL", "llm_model", "");
        auto shared = std::make_shared<RemoteBackend>(rc);
        provider = [shared](const PlanEntry&) { return shared; };
    } else {
        throw UsageError("unknown backend '" + args.backend + "' (oracle|remote)");
    }

    const ComparisonTable table = run_comparison(manifest, provider, cfg);

    fs::create_directories(args.out_dir);
    const std::string csv = table.to_csv();
    const std::string text = table.to_text();
    {
        std::vector<std::uint8_t> bytes(csv.begin(), csv.end());
        write_file_bytes(fs::path(args.out_dir) / "results.csv", bytes);
    }
    {
        std::vector<std::uint8_t> bytes(text.begin(), text.end());
        write_file_bytes(fs::path(args.out_dir) / "results.txt", bytes);
    }
    std::cout << text;

    const auto elapsed = std::chrono::duration<double, std::milli>(
                             std::chrono::steady_clock::now() - started)
                             .count();
    write_json_file(fs::path(args.out_dir) / "run_meta.json",
                    ojson{{"command", "evaluate"},
                          {"started_at", started_at},
                          {"elapsed_ms", elapsed},
                          {"manifest", args.manifest_path},
                          {"backend", args.backend},
                          {"epsilon", args.epsilon},
                          {"seed", args.seed},
                          {"backend_invocations", table.backend_invocations},
                          {"failures", table.failures}});
    for (const auto& f : table.failures) std::cerr << "failed: " << f << "\n";
    return kExitPass;  // failures are reflected in the accuracy numbers
}

// ---------------------------------------------------------------------------
// generate
// ---------------------------------------------------------------------------

struct GenerateArgs {
    CommonArgs common;
    std::string spec_path;
    std::string out_dir = "facenum-fixtures";
    std::string dataset;
};

int run_generate(const GenerateArgs& args) {
    const json doc = load_json_file(args.spec_path);
    std::vector<ScenarioSpec> specs;
    std::string dataset = args.dataset;
    if (doc.contains("scenarios")) {
        if (dataset.empty()) dataset = doc.value("dataset", "synthetic");
        for (const auto& s : doc.at("scenarios")) {
            specs.push_back(ScenarioSpec::from_json(s, args.spec_path));
        }
    } else {
        if (dataset.empty()) dataset = "synthetic";
        specs.push_back(ScenarioSpec::from_json(doc, args.spec_path));
    }
    if (specs.empty()) throw UsageError("spec file contains no scenarios");

    DatasetManifest manifest;
    manifest.dataset = dataset;
    for (const auto& spec : specs) {
        const Scenario scenario = generate(spec);
        manifest.plans.push_back(write_bundle(scenario, args.out_dir));
        if (args.common.verbose) {
            std::cerr << "generated " << scenario.plan.plan_id << " ("
                      << scenario.doors.size() << " doors)\n";
        }
    }
    manifest.validate();
    write_json_file(fs::path(args.out_dir) / "manifest.json", manifest.to_json());
    std::cout << "wrote " << manifest.plans.size() << " plan(s) and manifest.json to "
              << args.out_dir << "\n";
    return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"facility enumeration and compliance checking for floor plans"};
    app.require_subcommand(1);

    EnumerateArgs en;
    auto* enumerate_cmd = app.add_subcommand(
        "enumerate", "run the staged enumeration pipeline on one plan");
    add_common(enumerate_cmd, en.common);
    enumerate_cmd->add_option("--image", en.image_path, "plan raster (png)")->required();
    enumerate_cmd->add_option("--plan-id", en.plan_id, "plan id (default: image stem)");
    enumerate_cmd->add_option("--detections", en.detections_path,
                              "detection manifest JSON");
    enumerate_cmd->add_option("--detector-url", en.detector_url,
                              "detector service endpoint (env FE_DETECTOR_URL)");
    enumerate_cmd->add_option("--facility", en.facilities,
                              "facility type(s) or 'all'");
    enumerate_cmd->add_option("--backend", en.backend, "oracle|remote");
    enumerate_cmd->add_option("--oracle", en.oracle_path, "oracle fixture JSON");
    enumerate_cmd->add_option("--out", en.out_dir, "output directory");
    enumerate_cmd->add_option("--conf-threshold", en.confidence_threshold,
                              "detector confidence gate");
    enumerate_cmd->add_option("--dedup-iou", en.dedup_iou, "detector dedup iou");
    enumerate_cmd->add_option("--pair-strategy", en.pair_strategy,
                              "all-pairs|distance-gated");
    enumerate_cmd->add_option("--gate-radius", en.gate_radius,
                              "distance gate radius in px (0: 40% of diagonal)");

    CheckArgs ch;
    auto* check_cmd =
        app.add_subcommand("check", "evaluate enumeration results against the rules");
    add_common(check_cmd, ch.common);
    check_cmd->add_option("--context", ch.context_path, "building context JSON")
        ->required();
    check_cmd->add_option("--results", ch.results_dir, "directory of *.result.json");
    check_cmd->add_option("--counts", ch.counts_path, "facility->count JSON file");
    check_cmd->add_option("--catalog", ch.catalog_path, "rule catalog JSON");
    check_cmd->add_option("--out", ch.out_path, "write report JSON here");

    EvaluateArgs ev;
    auto* evaluate_cmd = app.add_subcommand(
        "evaluate", "baseline-vs-pipeline accuracy over a dataset manifest");
    add_common(evaluate_cmd, ev.common);
    evaluate_cmd->add_option("--manifest", ev.manifest_path, "dataset manifest JSON")
        ->required();
    evaluate_cmd->add_option("--modes", ev.modes, "baseline and/or cot");
    evaluate_cmd->add_option("--backend", ev.backend, "oracle|remote");
    evaluate_cmd->add_option("--epsilon", ev.epsilon, "oracle verdict flip rate");
    evaluate_cmd->add_option("--seed", ev.seed, "oracle error-injection seed");
    evaluate_cmd->add_option("--facility", ev.facilities,
                             "facility type(s) (default: those in the manifest)");
    evaluate_cmd->add_option("--out", ev.out_dir, "output directory");
    evaluate_cmd->add_flag("--exclude-failed", ev.exclude_failed,
                           "drop failed plans from the denominator");
    evaluate_cmd->add_option("--workers", ev.workers, "parallel plan workers");

    GenerateArgs ge;
    auto* generate_cmd =
        app.add_subcommand("generate", "create synthetic fixture bundles");
    add_common(generate_cmd, ge.common);
    generate_cmd->add_option("--spec", ge.spec_path, "scenario spec JSON")->required();
    generate_cmd->add_option("--out", ge.out_dir, "output directory");
    generate_cmd->add_option("--dataset", ge.dataset, "dataset name for the manifest");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (*enumerate_cmd) return run_enumerate(en);
        if (*check_cmd) return run_check(ch);
        if (*evaluate_cmd) return run_evaluate(ev);
        if (*generate_cmd) return run_generate(ge);
    } catch (const Error& e) {
        std::cerr << "facenum: " << e.what() << "\n";
        return exit_code_for(e);
    } catch (const std::exception& e) {
        std::cerr << "facenum: " << e.what() << "\n";
        return kExitRuntime;
    }
    return kExitUsage;
}
