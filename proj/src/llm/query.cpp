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

#include "facenum/llm/query.hpp"

#include <algorithm>

namespace facenum {

SameRoomQuery SameRoomQuery::make(int a, int b) {
    if (a == b) throw ValidationError("same-room query requires two distinct doors");
    return SameRoomQuery{std::min(a, b), std::max(a, b)};
}

OmissionQuery OmissionQuery::make(FacilityType facility, std::vector<int> marked) {
    std::sort(marked.begin(), marked.end());
    if (std::adjacent_find(marked.begin(), marked.end()) != marked.end()) {
        throw ValidationError("omission query marked ids must be duplicate-free");
    }
    return OmissionQuery{facility, std::move(marked)};
}

std::string canonical_json(const QueryKind& kind) {
    ojson doc;
    std::visit(
        [&](const auto& q) {
            using T = std::decay_t<decltype(q)>;
            if constexpr (std::is_same_v<T, ConnectionQuery>) {
                doc["kind"] = "connection";
                doc["facility"] = to_string(q.facility);
                doc["door_id"] = q.door_id;
            } else if constexpr (std::is_same_v<T, SameRoomQuery>) {
                doc["kind"] = "same_room";
                doc["door_a"] = std::min(q.door_a, q.door_b);
                doc["door_b"] = std::max(q.door_a, q.door_b);
            } else {
                doc["kind"] = "omission";
                doc["facility"] = to_string(q.facility);
                auto ids = q.marked_door_ids;
                std::sort(ids.begin(), ids.end());
                doc["marked_door_ids"] = ids;
            }
        },
        kind);
    return doc.dump();
}

std::string_view kind_name(const QueryKind& kind) {
    switch (kind.index()) {
        case 0: return "connection";
        case 1: return "same_room";
        default: return "omission";
    }
}

ojson ModelAnswer::to_json() const {
    ojson doc;
    doc["verdict"] = verdict ? json(std::string(to_string(*verdict))) : json(nullptr);
    doc["count"] = count ? json(*count) : json(nullptr);
    doc["raw_text"] = raw_text;
    doc["reason_text"] = reason_text;
    return doc;
}

ModelAnswer ModelAnswer::from_json(const json& doc) {
    ModelAnswer a;
    const auto& v = require_field(doc, "verdict", "model answer");
    if (v.is_string()) {
        a.verdict = v.get<std::string>() == "yes" ? Verdict::Yes : Verdict::No;
    }
    const auto& c = require_field(doc, "count", "model answer");
    if (c.is_number_integer()) {
        a.count = c.get<long long>();
        if (*a.count < 0) throw ValidationError("model answer count must be >= 0");
    }
    a.raw_text = doc.value("raw_text", "");
    a.reason_text = doc.value("reason_text", "");
    return a;
}

}  // namespace facenum
