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

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "facenum/json_util.hpp"
#include "facenum/synthetic.hpp"
#include "test_support.hpp"

using namespace facenum;

namespace {

struct CliResult {
    int exit_code = -1;
    std::string output;  // stdout only
};

CliResult run_cli(const std::string& args) {
    const char* bin = std::getenv("FACENUM_CLI_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "FACENUM_CLI_BIN must point at the facenum binary");
    const std::string cmd = std::string(bin) + " " + args + " 2>/dev/null";
    FILE* pipe = ::popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CliResult result;
    char buf[4096];
    while (std::size_t n = std::fread(buf, 1, sizeof(buf), pipe)) {
        result.output.append(buf, n);
    }
    const int status = ::pclose(pipe);
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

/// One generated scenario bundle on disk, shared by the workflow cases.
struct CliWorld {
    test::TempDir tmp{"cli"};
    PlanEntry entry;
    std::filesystem::path manifest_path;

    CliWorld() {
        ScenarioSpec spec;
        spec.seed = 404;
        spec.rooms_per_type[FacilityType::Toilet] = 2;
        spec.rooms_per_type[FacilityType::Exit] = 2;
        spec.doorless_rooms[FacilityType::Toilet] = 1;
        spec.two_door_prob = 0.4;
        spec.decoy_doors = 1;
        spec.width_px = 600;
        spec.height_px = 440;
        const Scenario scenario = generate(spec);
        entry = write_bundle(scenario, tmp.path());
        DatasetManifest manifest;
        manifest.dataset = "cli-demo";
        manifest.plans.push_back(entry);
        manifest_path = tmp.path() / "manifest.json";
        write_json_file(manifest_path, manifest.to_json());
    }
};

}  // namespace

TEST_CASE("enumerate with the oracle backend reproduces the ground truth") {
    CliWorld world;
    const auto out_dir = world.tmp.path() / "out";
    const auto result = run_cli("enumerate --image " + world.entry.plan.image_uri +
                                " --plan-id " + world.entry.plan.plan_id +
                                " --detections " + *world.entry.detections_path +
                                " --backend oracle --oracle " + *world.entry.oracle_path +
                                " --facility toilet --facility exit --out " +
                                out_dir.string());
    CHECK(result.exit_code == 0);
    const auto toilet = load_json_file(
        out_dir / (world.entry.plan.plan_id + "-toilet.result.json"));
    CHECK(toilet.at("n_final").get<long long>() ==
          world.entry.truth.at(FacilityType::Toilet));
    const auto exits =
        load_json_file(out_dir / (world.entry.plan.plan_id + "-exit.result.json"));
    CHECK(exits.at("n_final").get<long long>() == world.entry.truth.at(FacilityType::Exit));
    CHECK(std::filesystem::exists(
        out_dir / (world.entry.plan.plan_id + "-toilet.provenance.json")));
    CHECK(std::filesystem::exists(out_dir / "run_meta.json"));
}

TEST_CASE("enumerate without a detections source is a usage error") {
    CliWorld world;
    const auto result = run_cli("enumerate --image " + world.entry.plan.image_uri +
                                " --backend oracle --oracle " + *world.entry.oracle_path);
    CHECK(result.exit_code == 2);
}

TEST_CASE("remote backend without credentials is a config error") {
    CliWorld world;
    const auto result = run_cli("enumerate --image " + world.entry.plan.image_uri +
                                " --detections " + *world.entry.detections_path +
                                " --backend remote");
    CHECK(result.exit_code == 2);
}

TEST_CASE("check passes a satisfied context and fails a short one") {
    CliWorld world;
    // First enumerate into a results dir.
    const auto out_dir = world.tmp.path() / "res";
    REQUIRE(run_cli("enumerate --image " + world.entry.plan.image_uri + " --plan-id " +
                    world.entry.plan.plan_id + " --detections " +
                    *world.entry.detections_path + " --backend oracle --oracle " +
                    *world.entry.oracle_path + " --facility all --out " +
                    out_dir.string())
                .exit_code == 0);

    // Class 1 house: 3 toilets, 2 exits from the fixture satisfy the minimums
    // once the rest is declared via counts in the context.
    const auto ctx_path = world.tmp.path() / "ctx.json";
    std::ofstream(ctx_path) << json{{"building_class", 1},
                                    {"dwellings", 1},
                                    {"floors", 1},
                                    {"standard_parking_spaces", 0}}
                                   .dump();
    const auto counts_path = world.tmp.path() / "counts.json";
    std::ofstream(counts_path) << json{{"toilet", 3}, {"exit", 2},   {"kitchen", 1},
                                       {"laundry", 1}, {"fire-safety", 2},
                                       {"parking-standard", 1}}
                                      .dump();
    auto pass = run_cli("check --context " + ctx_path.string() + " --counts " +
                        counts_path.string());
    CHECK(pass.exit_code == 0);
    CHECK(pass.output.find("overall: PASS") != std::string::npos);

    // Same counts against a 2-storey class-2 block: exits fall short.
    const auto ctx2_path = world.tmp.path() / "ctx2.json";
    std::ofstream(ctx2_path) << json{{"building_class", 2},
                                     {"dwellings", 1},
                                     {"floors", 2},
                                     {"standard_parking_spaces", 1}}
                                    .dump();
    const auto report_path = world.tmp.path() / "report.json";
    auto fail = run_cli("check --context " + ctx2_path.string() + " --counts " +
                        counts_path.string() + " --out " + report_path.string());
    CHECK(fail.exit_code == 1);
    CHECK(fail.output.find("FAIL") != std::string::npos);
    const auto report = load_json_file(report_path);
    CHECK_FALSE(report.at("overall_pass").get<bool>());

    // Results-directory mode work the same way as counts.
    auto via_results = run_cli("check --context " + ctx_path.string() + " --results " +
                               out_dir.string());
    // The enumerated fixture lacks kitchen/laundry/parking, so this fails but
    // must still produce a table and exit 1 (not an error code).
    CHECK(via_results.exit_code == 1);
    CHECK(via_results.output.find("overall:") != std::string::npos);
}

TEST_CASE("unknown building class exits with a usage error") {
    CliWorld world;
    const auto ctx_path = world.tmp.path() / "bad-ctx.json";
    std::ofstream(ctx_path) << json{{"building_class", 10}}.dump();
    const auto counts_path = world.tmp.path() / "counts.json";
    std::ofstream(counts_path) << json{{"toilet", 1}}.dump();
    const auto result = run_cli("check --context " + ctx_path.string() + " --counts " +
                                counts_path.string());
    CHECK(result.exit_code == 2);
}

TEST_CASE("evaluate writes a CSV and a table and exits zero") {
    CliWorld world;
    const auto out_dir = world.tmp.path() / "eval";
    const auto result = run_cli("evaluate --manifest " + world.manifest_path.string() +
                                " --backend oracle --out " + out_dir.string());
    CHECK(result.exit_code == 0);
    const auto csv_bytes = read_file_bytes(out_dir / "results.csv");
    const std::string csv(csv_bytes.begin(), csv_bytes.end());
    CHECK(csv.find("dataset,facility,backend,n_plans,n_correct,accuracy") == 0);
    CHECK(csv.find("cli-demo,toilet,cot,1,1,1.000000") != std::string::npos);
    CHECK(result.output.find("accuracy") != std::string::npos);
}

TEST_CASE("evaluate on a missing manifest exits 2") {
    const auto result = run_cli("evaluate --manifest /nonexistent/m.json");
    CHECK(result.exit_code == 2);
}

TEST_CASE("generate produces a bundle whose manifest round-trips") {
    test::TempDir tmp("cli-gen");
    const auto spec_path = tmp.path() / "spec.json";
    std::ofstream(spec_path) << json{{"seed", 9},
                                     {"rooms_per_type", {{"kitchen", 2}}},
                                     {"width_px", 480},
                                     {"height_px", 360}}
                                    .dump();
    const auto out_dir = tmp.path() / "bundle";
    const auto result = run_cli("generate --spec " + spec_path.string() + " --out " +
                                out_dir.string());
    CHECK(result.exit_code == 0);
    const auto manifest = DatasetManifest::load(out_dir / "manifest.json");
    REQUIRE(manifest.plans.size() == 1);
    CHECK(manifest.plans[0].truth.at(FacilityType::Kitchen) == 2);
    CHECK(std::filesystem::exists(manifest.plans[0].plan.image_uri));

    // identical seed, identical bundle digests
    const auto out_dir2 = tmp.path() / "bundle2";
    REQUIRE(run_cli("generate --spec " + spec_path.string() + " --out " +
                    out_dir2.string())
                .exit_code == 0);
    const auto manifest2 = DatasetManifest::load(out_dir2 / "manifest.json");
    CHECK(manifest2.plans[0].plan.image_bytes_digest ==
          manifest.plans[0].plan.image_bytes_digest);
}

TEST_CASE("generate rejects a zero-size image") {
    test::TempDir tmp("cli-gen-bad");
    const auto spec_path = tmp.path() / "spec.json";
    std::ofstream(spec_path) << json{{"seed", 1}, {"width_px", 0}, {"height_px", 100}}.dump();
    const auto result = run_cli("generate --spec " + spec_path.string());
    CHECK(result.exit_code == 2);
}

TEST_CASE("repeated evaluate runs against one cache are byte-identical") {
    CliWorld world;
    const auto cache_dir = world.tmp.path() / "cache";
    const auto out1 = world.tmp.path() / "eval1";
    const auto out2 = world.tmp.path() / "eval2";
    const std::string base = "evaluate --manifest " + world.manifest_path.string() +
                             " --backend oracle --cache-dir " + cache_dir.string();
    REQUIRE(run_cli(base + " --out " + out1.string()).exit_code == 0);
    REQUIRE(run_cli(base + " --out " + out2.string()).exit_code == 0);
    CHECK(read_file_bytes(out1 / "results.csv") == read_file_bytes(out2 / "results.csv"));
    CHECK(read_file_bytes(out1 / "results.txt") == read_file_bytes(out2 / "results.txt"));
    // The second run answered everything from the cache.
    const auto meta2 = load_json_file(out2 / "run_meta.json");
    CHECK(meta2.at("backend_invocations").get<long long>() == 0);
}
