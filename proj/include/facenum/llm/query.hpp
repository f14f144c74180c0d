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

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "facenum/json_util.hpp"
#include "facenum/types.hpp"

namespace facenum {

/// Does the door under the red box lead to a room of this facility type?
struct ConnectionQuery {
    FacilityType facility;
    int door_id;
};

/// Do these two doors open into the same room? Ids are kept ordered a < b so
/// the pair has one canonical form.
struct SameRoomQuery {
    int door_a;
    int door_b;

    static SameRoomQuery make(int a, int b);
};

/// How many instances exist beyond the marked doors? `marked_door_ids` is
/// sorted and duplicate-free; it may be empty (whole-image baseline count).
struct OmissionQuery {
    FacilityType facility;
    std::vector<int> marked_door_ids;

    static OmissionQuery make(FacilityType facility, std::vector<int> marked);
};

using QueryKind = std::variant<ConnectionQuery, SameRoomQuery, OmissionQuery>;

/// Stable, field-ordered serialization; equal queries serialize identically.
/// This is what cache keys and fixture lookups hash.
std::string canonical_json(const QueryKind& kind);

/// Short human-readable tag ("connection", "same_room", "omission").
std::string_view kind_name(const QueryKind& kind);

/// Parsed model reply. Verdict queries populate `verdict`; omission queries
/// populate `count` (always >= 0).
struct ModelAnswer {
    std::optional<Verdict> verdict;
    std::optional<long long> count;
    std::string raw_text;
    std::string reason_text;

    ojson to_json() const;
    static ModelAnswer from_json(const json& doc);
};

}  // namespace facenum
