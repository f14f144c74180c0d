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

#include "facenum/llm/oracle.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "facenum/digest.hpp"

namespace facenum {

OracleFixture OracleFixture::load(const std::filesystem::path& path) {
    return from_json(load_json_file(path), path.string());
}

OracleFixture OracleFixture::from_json(const json& doc, const std::string& context) {
    OracleFixture f;
    f.plan_id = require_field(doc, "plan_id", context).get<std::string>();
    if (doc.contains("connection")) {
        for (const auto& [facility_name, doors] : doc.at("connection").items()) {
            const FacilityType type = facility_from_string(facility_name);
            for (const auto& [door_id, verdict] : doors.items()) {
                if (!verdict.is_boolean()) {
                    throw SchemaError(context + ": connection." + facility_name + "." +
                                      door_id + " must be a boolean");
                }
                f.connection[type][std::stoi(door_id)] = verdict.get<bool>();
            }
        }
    }
    if (doc.contains("same_room")) {
        for (const auto& pair : doc.at("same_room")) {
            if (!pair.is_array() || pair.size() != 2) {
                throw SchemaError(context + ": same_room entries must be [a, b] pairs");
            }
            const int a = pair[0].get<int>();
            const int b = pair[1].get<int>();
            if (a == b) throw SchemaError(context + ": same_room pair has equal ids");
            f.same_room.insert({std::min(a, b), std::max(a, b)});
        }
    }
    if (doc.contains("missing")) {
        for (const auto& [facility_name, count] : doc.at("missing").items()) {
            const int n = count.get<int>();
            if (n < 0) throw SchemaError(context + ": missing." + facility_name + " < 0");
            f.missing[facility_from_string(facility_name)] = n;
        }
    }
    return f;
}

ojson OracleFixture::to_json() const {
    ojson doc;
    doc["plan_id"] = plan_id;
    ojson conn = ojson::object();
    for (const auto& [type, doors] : connection) {
        ojson per_door = ojson::object();
        for (const auto& [door_id, verdict] : doors) {
            per_door[std::to_string(door_id)] = verdict;
        }
        conn[std::string(to_string(type))] = std::move(per_door);
    }
    doc["connection"] = std::move(conn);
    ojson pairs = ojson::array();
    for (const auto& [a, b] : same_room) pairs.push_back({a, b});
    doc["same_room"] = std::move(pairs);
    ojson miss = ojson::object();
    for (const auto& [type, count] : missing) miss[std::string(to_string(type))] = count;
    doc["missing"] = std::move(miss);
    return doc;
}

bool OracleFixture::connected(FacilityType type, int door_id) const {
    auto per_type = connection.find(type);
    if (per_type == connection.end()) return false;
    auto it = per_type->second.find(door_id);
    return it != per_type->second.end() && it->second;
}

bool OracleFixture::in_same_room(int a, int b) const {
    return same_room.count({std::min(a, b), std::max(a, b)}) > 0;
}

std::vector<std::vector<int>> OracleFixture::door_rooms(FacilityType type) const {
    std::vector<int> doors;
    if (auto per_type = connection.find(type); per_type != connection.end()) {
        for (const auto& [door_id, verdict] : per_type->second) {
            if (verdict) doors.push_back(door_id);
        }
    }
    std::sort(doors.begin(), doors.end());
    std::vector<std::vector<int>> rooms;
    std::set<int> seen;
    for (int start : doors) {
        if (seen.count(start)) continue;
        std::vector<int> room;
        std::queue<int> frontier;
        frontier.push(start);
        seen.insert(start);
        while (!frontier.empty()) {
            const int cur = frontier.front();
            frontier.pop();
            room.push_back(cur);
            for (int other : doors) {
                if (!seen.count(other) && in_same_room(cur, other)) {
                    seen.insert(other);
                    frontier.push(other);
                }
            }
        }
        std::sort(room.begin(), room.end());
        rooms.push_back(std::move(room));
    }
    return rooms;
}

int OracleFixture::uncovered_count(FacilityType type, const std::vector<int>& marked) const {
    const std::set<int> marks(marked.begin(), marked.end());
    int uncovered = 0;
    for (const auto& room : door_rooms(type)) {
        const bool covered = std::any_of(room.begin(), room.end(),
                                         [&](int d) { return marks.count(d) > 0; });
        if (!covered) ++uncovered;
    }
    auto it = missing.find(type);
    return uncovered + (it == missing.end() ? 0 : it->second);
}

int OracleFixture::total_count(FacilityType type) const {
    return uncovered_count(type, {});
}

OracleBackend::OracleBackend(OracleFixture fixture, double flip_epsilon, std::uint64_t seed)
    : fixture_(std::move(fixture)), flip_epsilon_(flip_epsilon), seed_(seed) {
    if (flip_epsilon_ < 0.0 || flip_epsilon_ > 1.0) {
        throw ValidationError("flip_epsilon outside [0,1]");
    }
}

std::string OracleBackend::name() const {
    if (flip_epsilon_ == 0.0) return "oracle";
    std::ostringstream out;
    out << "oracle-eps" << flip_epsilon_ << "-seed" << seed_;
    return out.str();
}

bool OracleBackend::flip(const QueryKind& kind) const {
    if (flip_epsilon_ <= 0.0) return false;
    const std::uint64_t h = fnv1a64(canonical_json(kind), seed_ ^ 0x9e3779b97f4a7c15ull);
    return hash_to_unit(h) < flip_epsilon_;
}

std::string OracleBackend::complete(const QueryKind& kind, const std::string& prompt,
                                    std::span<const std::uint8_t> image_png) {
    (void)prompt;
    (void)image_png;
    count_call();
    return std::visit(
        [&](const auto& q) -> std::string {
            using T = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<T, ConnectionQuery>) {
                bool yes = fixture_.connected(q.facility, q.door_id);
                if (flip(kind)) yes = !yes;
                return std::string(yes ? "Yes" : "No") +
                       ". Reason: recorded ground truth for door " +
                       std::to_string(q.door_id) + ".";
            } else if constexpr (std::is_same_v<T, SameRoomQuery>) {
                bool yes = fixture_.in_same_room(q.door_a, q.door_b);
                if (flip(kind)) yes = !yes;
                return std::string(yes ? "Yes" : "No") +
                       ". Reason: recorded ground truth for the door pair.";
            } else {
                const int n = fixture_.uncovered_count(q.facility, q.marked_door_ids);
                return "There are " + std::to_string(n) + " unmarked " +
                       std::string(to_string(q.facility)) +
                       " instances. Reason: recorded ground truth.";
            }
        },
        kind);
}

}  // namespace facenum
