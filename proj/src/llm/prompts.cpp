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

#include "facenum/llm/prompts.hpp"

#include <sstream>

namespace facenum {

namespace {

// Keep this byte-identical to data/prompts_v1.json (pinned by a unit test).
constexpr const char* kBuiltinV1 = R"JSON({
  "version": "v1",
  "suffix": "tell me the reason",
  "templates": {
    "connection": "You are looking at a floor plan image. One door in the plan is outlined by a red bounding box. {profile} Question: does the door outlined in red lead into a {facility}? Start your answer with 'yes' or 'no', then {suffix}",
    "same_room": "You are looking at a floor plan image. Two doors in the plan are outlined by red bounding boxes: door {door_a} and door {door_b}. Question: do these two doors open into the same room? Start your answer with 'yes' or 'no', then {suffix}",
    "omission": "You are looking at a floor plan image. Every {facility} identified so far is highlighted by a red bounding box drawn on one of its doors; {marked_count} boxes are marked. {profile} Question: how many additional {facility} instances are present in the plan that are not associated with any marked bounding box? Include open rooms that have no door at all. Start your answer with a single non-negative integer, then {suffix}"
  }
})JSON";

void replace_all(std::string& text, const std::string& needle, const std::string& value) {
    std::size_t pos = 0;
    while ((pos = text.find(needle, pos)) != std::string::npos) {
        text.replace(pos, needle.size(), value);
        pos += value.size();
    }
}

std::string join_ids(const std::vector<int>& ids) {
    std::ostringstream out;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i) out << ", ";
        out << ids[i];
    }
    return out.str();
}

}  // namespace

PromptLibrary PromptLibrary::from_json(const json& doc, const std::string& context) {
    PromptLibrary lib;
    lib.version_ = require_field(doc, "version", context).get<std::string>();
    lib.suffix_ = require_field(doc, "suffix", context).get<std::string>();
    const auto& templates = require_field(doc, "templates", context);
    for (const char* key : {"connection", "same_room", "omission"}) {
        std::string tpl = require_field(templates, key, context).get<std::string>();
        if (!tpl.ends_with("{suffix}")) {
            throw ConfigError(context + ": template '" + key +
                              "' must end with the {suffix} placeholder");
        }
        lib.templates_[key] = std::move(tpl);
    }
    if (lib.suffix_.empty()) throw ConfigError(context + ": suffix must be nonempty");
    return lib;
}

PromptLibrary PromptLibrary::builtin(const std::string& version) {
    if (version != "v1") {
        throw ConfigError("unknown prompt template version '" + version + "'");
    }
    return from_json(json::parse(kBuiltinV1), "builtin prompts");
}

PromptLibrary PromptLibrary::load(const std::filesystem::path& path) {
    try {
        return from_json(load_json_file(path), path.string());
    } catch (const SchemaError& e) {
        throw ConfigError(e.what());
    }
}

std::string PromptLibrary::build(const QueryKind& kind,
                                 const std::string& facility_profile) const {
    std::string text = templates_.at(std::string(kind_name(kind)));
    std::visit(
        [&](const auto& q) {
            using T = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<T, ConnectionQuery>) {
                if (facility_profile.empty()) {
                    throw ConfigError("connection query needs a nonempty facility profile");
                }
                replace_all(text, "{facility}", std::string(to_string(q.facility)));
                replace_all(text, "{door_id}", std::to_string(q.door_id));
            } else if constexpr (std::is_same_v<T, SameRoomQuery>) {
                replace_all(text, "{door_a}", std::to_string(q.door_a));
                replace_all(text, "{door_b}", std::to_string(q.door_b));
            } else {
                replace_all(text, "{facility}", std::string(to_string(q.facility)));
                replace_all(text, "{marked_count}", std::to_string(q.marked_door_ids.size()));
                replace_all(text, "{marked_ids}", join_ids(q.marked_door_ids));
            }
        },
        kind);
    replace_all(text, "{profile}", facility_profile);
    replace_all(text, "{suffix}", suffix_);
    return text;
}

const std::string& default_facility_profile(FacilityType type) {
    static const std::map<FacilityType, std::string> kProfiles = {
        {FacilityType::Toilet,
         "A toilet is a small sanitary room containing a WC pan, usually together with a "
         "wash basin and sometimes a shower or bath, drawn as a compact room with "
         "sanitary fixture symbols."},
        {FacilityType::Kitchen,
         "A kitchen is a room or zone with bench-top fixtures such as a sink, stove or "
         "cooktop, typically drawn as a run of counters with appliance symbols."},
        {FacilityType::Laundry,
         "A laundry is a utility room with a trough or washing machine symbol, often "
         "adjacent to a bathroom or kitchen."},
        {FacilityType::Exit,
         "An exit is a door that leads out of the building or into a protected egress "
         "path such as a stairwell or external landing."},
        {FacilityType::EmergencyExit,
         "An emergency exit is an exit door on a designated evacuation route, often at "
         "the end of a corridor or directly to open air."},
        {FacilityType::FireSafety,
         "Fire safety equipment means fixed fire protection items such as extinguishers, "
         "hose reels or sprinkler points, drawn as small dedicated symbols."},
        {FacilityType::Accessibility,
         "An accessibility provision is an accessible entrance or accessible facility "
         "with extra clearances, drawn wider than standard and sometimes marked with an "
         "access symbol."},
        {FacilityType::ParkingStandard,
         "A standard parking space is a rectangular car bay, usually drawn in ranks with "
         "shared aisles."},
        {FacilityType::ParkingAccessible,
         "An accessible parking space is a widened car bay with a marked shared area "
         "beside it, placed near accessible entrances."},
    };
    return kProfiles.at(type);
}

std::map<FacilityType, std::string> default_facility_profiles() {
    std::map<FacilityType, std::string> out;
    for (FacilityType t : kAllFacilityTypes) out[t] = default_facility_profile(t);
    return out;
}

}  // namespace facenum
