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
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "facenum/json_util.hpp"
#include "facenum/types.hpp"

namespace facenum {

/// Everything about the building that rule formulas may reference. NCC
/// building classes: 1 house, 2 apartments, 3 hotels/boarding, 4 dwelling in
/// another building, 5 offices, 6 shops, 7 carparks/storage, 8 factories,
/// 9 public buildings.
struct BuildingContext {
    int building_class = 1;
    long long dwellings = 0;
    int floors = 1;
    long long occupant_load = 0;
    long long residents_without_private_amenities = 0;
    bool long_term_accommodation = false;
    std::set<std::string> use_tags;
    long long standard_parking_spaces = 0;  // declared spaces on the design

    void validate() const;
    static BuildingContext from_json(const json& doc, const std::string& context);
    ojson to_json() const;
};

/// How a rule computes its required quantity from the context.
struct RuleFormula {
    enum class Kind : std::uint8_t { Constant, PerFloor, PerDwelling, CeilRatio };
    Kind kind = Kind::Constant;
    long long amount = 0;     // Constant value, or the per-floor/per-dwelling multiplier
    std::string numerator;    // CeilRatio: context field name
    long long per = 1;        // CeilRatio divisor

    long long evaluate(const BuildingContext& ctx) const;
};

/// Gate that switches a rule off (not-applicable) for contexts it does not
/// cover, beyond the class match.
struct RuleCondition {
    std::vector<std::string> requires_tags_any;
    bool requires_long_term = false;
    bool requires_parking = false;

    bool satisfied(const BuildingContext& ctx) const;
};

struct Rule {
    std::string rule_id;
    std::set<int> classes;
    FacilityType facility = FacilityType::Toilet;
    RuleFormula formula;
    RuleCondition condition;
    std::string citation;
};

/// Explicit record that a (class, facility) pair has no provision, so catalog
/// coverage has no silent gaps.
struct NotApplicableMarker {
    std::set<int> classes;
    FacilityType facility = FacilityType::Toilet;
    std::string citation;
};

/// Tunable ratios for provisions the code ties to occupant load without a
/// fixed number; defaults are engineering choices, not regulation text.
struct CatalogParams {
    long long sanitary_occupant_ratio = 20;
    long long fire_occupant_ratio = 50;
};

struct RuleCatalog {
    std::string catalog_version;
    std::vector<Rule> rules;
    std::vector<NotApplicableMarker> markers;

    static RuleCatalog builtin(const CatalogParams& params = {});
    static RuleCatalog load(const std::filesystem::path& path);
    static RuleCatalog from_json(const json& doc, const std::string& context);
    ojson to_json() const;

    /// True when the pair is matched by at least one rule or marker.
    bool covers(int building_class, FacilityType facility) const;
};

/// Required quantity of the rule's facility for this context. Returns 0 when
/// the rule does not apply (class mismatch or unmet condition); sets
/// *applicable accordingly when given.
long long required_quantity(const Rule& rule, const BuildingContext& ctx,
                            bool* applicable = nullptr);

struct RuleOutcome {
    std::string rule_id;
    FacilityType facility = FacilityType::Toilet;
    bool applicable = false;
    long long required = 0;
    long long provided = 0;
    bool pass = true;
    long long shortfall = 0;  // max(0, required - provided)
    std::string citation;
};

struct ComplianceReport {
    std::vector<RuleOutcome> entries;
    bool overall_pass = true;  // conjunction over applicable entries
    std::vector<std::string> warnings;

    ojson to_json() const;
    std::string to_table() const;
};

/// Evaluates provided counts against every applicable rule. Facility types a
/// rule needs but the results lack count as provided 0, with a data-gap
/// warning.
ComplianceReport evaluate(const std::map<FacilityType, long long>& provided,
                          const BuildingContext& ctx, const RuleCatalog& catalog);

}  // namespace facenum
