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

#include "facenum/synthetic.hpp"

#include <algorithm>
#include <random>

#include "facenum/digest.hpp"
#include "facenum/raster.hpp"

namespace facenum {

namespace {

// mt19937_64 has a standardized output sequence, so generation is
// reproducible across platforms as long as we avoid std:: distributions.
int uniform_int(std::mt19937_64& rng, int lo, int hi) {
    return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

double uniform01(std::mt19937_64& rng) { return hash_to_unit(rng()); }

constexpr int kBorder = 20;
constexpr int kCellW = 120;
constexpr int kCellH = 100;
constexpr int kDoorLong = 18;
constexpr int kDoorShort = 8;

constexpr Rgb kWall{40, 40, 40};
constexpr Rgb kDoorColor{140, 70, 20};
constexpr Rgb kGlyph{90, 90, 90};

struct PendingDoor {
    Box box;
    double confidence;
    std::size_t room_index;
};

// Door mark straddling one wall of the room; wall 0..3 = top/bottom/left/right.
Box door_on_wall(std::mt19937_64& rng, const Box& room, int wall) {
    const int span_x = static_cast<int>(room.width()) - kDoorLong - 12;
    const int span_y = static_cast<int>(room.height()) - kDoorLong - 12;
    switch (wall) {
        case 0: {
            const int x = room.x_min + 6 + uniform_int(rng, 0, span_x);
            return Box{x, room.y_min - kDoorShort / 2, x + kDoorLong,
                       room.y_min + kDoorShort / 2};
        }
        case 1: {
            const int x = room.x_min + 6 + uniform_int(rng, 0, span_x);
            return Box{x, room.y_max - kDoorShort / 2, x + kDoorLong,
                       room.y_max + kDoorShort / 2};
        }
        case 2: {
            const int y = room.y_min + 6 + uniform_int(rng, 0, span_y);
            return Box{room.x_min - kDoorShort / 2, y, room.x_min + kDoorShort / 2,
                       y + kDoorLong};
        }
        default: {
            const int y = room.y_min + 6 + uniform_int(rng, 0, span_y);
            return Box{room.x_max - kDoorShort / 2, y, room.x_max + kDoorShort / 2,
                       y + kDoorLong};
        }
    }
}

// Small abstract glyph per facility type, centered in the room. The shapes
// only need to be deterministic and distinct, not architecturally faithful.
void draw_glyph(Image& img, const Box& room, FacilityType type) {
    const int cx = static_cast<int>(room.center_x());
    const int cy = static_cast<int>(room.center_y());
    const Box core{cx - 10, cy - 10, cx + 10, cy + 10};
    switch (type) {
        case FacilityType::Toilet:
            img.stroke_rect(core, 2, kGlyph);
            img.fill_rect({cx - 4, cy + 12, cx + 4, cy + 18}, kGlyph);
            break;
        case FacilityType::Kitchen:
            img.fill_rect({cx - 12, cy - 12, cx - 2, cy - 2}, kGlyph);
            img.fill_rect({cx + 2, cy - 12, cx + 12, cy - 2}, kGlyph);
            img.fill_rect({cx - 12, cy + 2, cx - 2, cy + 12}, kGlyph);
            img.fill_rect({cx + 2, cy + 2, cx + 12, cy + 12}, kGlyph);
            break;
        case FacilityType::Laundry:
            img.stroke_rect({cx - 12, cy - 12, cx + 12, cy + 12}, 2, kGlyph);
            img.stroke_rect(core, 2, kGlyph);
            break;
        case FacilityType::Exit:
            img.fill_rect({cx - 14, cy - 3, cx + 6, cy + 3}, kGlyph);
            img.fill_rect({cx + 6, cy - 7, cx + 14, cy + 7}, kGlyph);
            break;
        case FacilityType::EmergencyExit:
            img.stroke_rect({cx - 14, cy - 14, cx + 14, cy + 14}, 2, kGlyph);
            img.fill_rect({cx - 6, cy - 6, cx + 6, cy + 6}, kGlyph);
            break;
        case FacilityType::FireSafety:
            img.fill_rect({cx - 2, cy - 12, cx + 2, cy + 12}, kGlyph);
            img.fill_rect({cx - 12, cy - 2, cx + 12, cy + 2}, kGlyph);
            break;
        case FacilityType::Accessibility:
            img.stroke_rect(core, 2, kGlyph);
            img.fill_rect({cx - 2, cy - 16, cx + 2, cy - 10}, kGlyph);
            break;
        case FacilityType::ParkingStandard:
            img.fill_rect({cx - 8, cy - 12, cx - 3, cy + 12}, kGlyph);
            img.fill_rect({cx - 8, cy - 12, cx + 8, cy - 7}, kGlyph);
            img.fill_rect({cx + 3, cy - 12, cx + 8, cy + 2}, kGlyph);
            break;
        case FacilityType::ParkingAccessible:
            img.fill_rect({cx - 8, cy - 12, cx - 3, cy + 12}, kGlyph);
            img.fill_rect({cx - 8, cy - 12, cx + 8, cy - 7}, kGlyph);
            img.stroke_rect({cx - 14, cy - 16, cx + 14, cy + 16}, 2, kGlyph);
            break;
    }
}

}  // namespace

void ScenarioSpec::validate() const {
    if (width_px <= 0 || height_px <= 0) {
        throw ValidationError("scenario image dimensions must be positive");
    }
    if (two_door_prob < 0.0 || two_door_prob > 1.0) {
        throw ValidationError("two_door_prob outside [0,1]");
    }
    if (decoy_doors < 0) throw ValidationError("decoy_doors must be >= 0");
    for (const auto& [type, n] : rooms_per_type) {
        if (n < 0) throw ValidationError("rooms_per_type counts must be >= 0");
    }
    for (const auto& [type, n] : doorless_rooms) {
        if (n < 0) throw ValidationError("doorless_rooms counts must be >= 0");
    }
}

ScenarioSpec ScenarioSpec::from_json(const json& doc, const std::string& context) {
    ScenarioSpec spec;
    spec.seed = require_field(doc, "seed", context).get<std::uint64_t>();
    if (doc.contains("rooms_per_type")) {
        for (const auto& [name, n] : doc.at("rooms_per_type").items()) {
            spec.rooms_per_type[facility_from_string(name)] = n.get<int>();
        }
    }
    spec.two_door_prob = doc.value("two_door_prob", 0.25);
    if (doc.contains("doorless_rooms")) {
        for (const auto& [name, n] : doc.at("doorless_rooms").items()) {
            spec.doorless_rooms[facility_from_string(name)] = n.get<int>();
        }
    }
    spec.width_px = doc.value("width_px", 960);
    spec.height_px = doc.value("height_px", 720);
    spec.decoy_doors = doc.value("decoy_doors", 0);
    spec.validate();
    return spec;
}

ojson ScenarioSpec::to_json() const {
    ojson doc;
    doc["seed"] = seed;
    ojson rooms = ojson::object();
    for (const auto& [type, n] : rooms_per_type) rooms[std::string(to_string(type))] = n;
    doc["rooms_per_type"] = std::move(rooms);
    doc["two_door_prob"] = two_door_prob;
    ojson doorless = ojson::object();
    for (const auto& [type, n] : doorless_rooms) doorless[std::string(to_string(type))] = n;
    doc["doorless_rooms"] = std::move(doorless);
    doc["width_px"] = width_px;
    doc["height_px"] = height_px;
    doc["decoy_doors"] = decoy_doors;
    return doc;
}

Scenario generate(const ScenarioSpec& spec) {
    spec.validate();

    // Build the room work list in a fixed order: typed rooms, doorless rooms,
    // then decoys; the shuffled grid placement supplies the randomness.
    struct RoomPlan {
        std::optional<FacilityType> type;
        bool doorless = false;
    };
    std::vector<RoomPlan> room_plans;
    for (FacilityType type : kAllFacilityTypes) {
        auto it = spec.rooms_per_type.find(type);
        const int n = it == spec.rooms_per_type.end() ? 0 : it->second;
        for (int i = 0; i < n; ++i) room_plans.push_back({type, false});
    }
    for (FacilityType type : kAllFacilityTypes) {
        auto it = spec.doorless_rooms.find(type);
        const int n = it == spec.doorless_rooms.end() ? 0 : it->second;
        for (int i = 0; i < n; ++i) room_plans.push_back({type, true});
    }
    for (int i = 0; i < spec.decoy_doors; ++i) room_plans.push_back({std::nullopt, false});

    const int cols = std::max(0, (spec.width_px - 2 * kBorder) / kCellW);
    const int rows = std::max(0, (spec.height_px - 2 * kBorder) / kCellH);
    const std::size_t capacity = static_cast<std::size_t>(cols) * rows;
    if (room_plans.size() > capacity) {
        throw GenerationError(
            "cannot pack " + std::to_string(room_plans.size()) + " rooms into " +
            std::to_string(spec.width_px) + "x" + std::to_string(spec.height_px) +
            " (capacity " + std::to_string(capacity) + "); increase the image size");
    }

    std::mt19937_64 rng(spec.seed ^ 0xfacef00dULL);
    std::vector<std::size_t> cells(capacity);
    for (std::size_t i = 0; i < capacity; ++i) cells[i] = i;
    for (std::size_t i = capacity; i > 1; --i) {  // Fisher-Yates
        std::swap(cells[i - 1], cells[uniform_int(rng, 0, static_cast<int>(i) - 1)]);
    }

    Image img(spec.width_px, spec.height_px, kWhite);
    std::vector<SynthRoom> rooms;
    std::vector<PendingDoor> pending;

    for (std::size_t idx = 0; idx < room_plans.size(); ++idx) {
        const RoomPlan& plan = room_plans[idx];
        const std::size_t cell = cells[idx];
        const int cell_x = kBorder + static_cast<int>(cell % cols) * kCellW;
        const int cell_y = kBorder + static_cast<int>(cell / cols) * kCellH;
        const int inset_l = 10 + uniform_int(rng, 0, 6);
        const int inset_t = 10 + uniform_int(rng, 0, 6);
        const int inset_r = 10 + uniform_int(rng, 0, 6);
        const int inset_b = 10 + uniform_int(rng, 0, 6);
        const Box rect{cell_x + inset_l, cell_y + inset_t, cell_x + kCellW - inset_r,
                       cell_y + kCellH - inset_b};

        img.stroke_rect(rect, 2, kWall);
        if (plan.type) draw_glyph(img, rect, *plan.type);

        SynthRoom room;
        room.type = plan.type;
        room.rect = rect;

        if (plan.doorless) {
            // Open room: a gap in the wall instead of a door.
            const int gx = rect.x_min + 10 + uniform_int(rng, 0, 20);
            img.fill_rect({gx, rect.y_min - 2, gx + kDoorLong, rect.y_min + 2}, kWhite);
        } else {
            const int n_doors = uniform01(rng) < spec.two_door_prob ? 2 : 1;
            int first_wall = uniform_int(rng, 0, 3);
            for (int d = 0; d < n_doors; ++d) {
                const int wall = (first_wall + d * 2) % 4;  // distinct walls
                const Box door = door_on_wall(rng, rect, wall);
                img.fill_rect(door, kDoorColor);
                PendingDoor pd;
                pd.box = door;
                pd.confidence = 0.6 + 0.39 * uniform01(rng);
                pd.room_index = rooms.size();
                pending.push_back(pd);
            }
        }
        rooms.push_back(std::move(room));
    }

    // Position-stable door ids: sorted by box coordinates. Tiled detection
    // merges order the same way, so ids agree between whole and tiled runs.
    std::sort(pending.begin(), pending.end(),
              [](const PendingDoor& a, const PendingDoor& b) { return a.box < b.box; });

    Scenario scenario;
    scenario.rooms = std::move(rooms);
    for (std::size_t i = 0; i < pending.size(); ++i) {
        DoorBox door;
        door.door_id = static_cast<int>(i);
        door.box = pending[i].box;
        door.confidence = pending[i].confidence;
        scenario.doors.push_back(door);
        scenario.rooms[pending[i].room_index].door_ids.push_back(door.door_id);
    }

    scenario.png = encode_png(img);

    // Ground truth and oracle fixture straight from the layout.
    for (FacilityType type : kAllFacilityTypes) {
        long long total = 0;
        for (const auto& room : scenario.rooms) {
            if (room.type == type) ++total;
        }
        scenario.truth[type] = total;
    }
    OracleFixture& fixture = scenario.fixture;
    for (FacilityType type : kAllFacilityTypes) {
        const bool present = scenario.truth[type] > 0;
        if (!present) continue;
        auto& per_door = fixture.connection[type];
        for (const auto& door : scenario.doors) per_door[door.door_id] = false;
        for (const auto& room : scenario.rooms) {
            if (room.type != type) continue;
            for (int id : room.door_ids) per_door[id] = true;
        }
    }
    for (const auto& room : scenario.rooms) {
        for (std::size_t i = 0; i < room.door_ids.size(); ++i) {
            for (std::size_t j = i + 1; j < room.door_ids.size(); ++j) {
                const int a = room.door_ids[i];
                const int b = room.door_ids[j];
                fixture.same_room.insert({std::min(a, b), std::max(a, b)});
            }
        }
    }
    for (FacilityType type : kAllFacilityTypes) {
        int doorless = 0;
        for (const auto& room : scenario.rooms) {
            if (room.type == type && room.door_ids.empty()) ++doorless;
        }
        fixture.missing[type] = doorless;
    }

    scenario.plan.plan_id = "synth-" + std::to_string(spec.seed) + "-" +
                            sha256_hex(spec.to_json().dump()).substr(0, 8);
    scenario.plan.image_bytes_digest = sha256_hex(scenario.png);
    scenario.plan.width_px = spec.width_px;
    scenario.plan.height_px = spec.height_px;
    fixture.plan_id = scenario.plan.plan_id;
    return scenario;
}

PlanEntry write_bundle(const Scenario& scenario, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const std::string stem = scenario.plan.plan_id;
    const auto image_path = dir / (stem + ".png");
    const auto detections_path = dir / (stem + ".detections.json");
    const auto oracle_path = dir / (stem + ".oracle.json");

    write_file_bytes(image_path, scenario.png);
    write_json_file(detections_path,
                    detections_to_json(scenario.plan.plan_id, "synthetic", scenario.doors));
    write_json_file(oracle_path, scenario.fixture.to_json());

    PlanEntry entry;
    entry.plan = scenario.plan;
    entry.plan.image_uri = image_path.string();
    entry.truth = scenario.truth;
    entry.oracle_path = oracle_path.string();
    entry.detections_path = detections_path.string();
    return entry;
}

}  // namespace facenum
