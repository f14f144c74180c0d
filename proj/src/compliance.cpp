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

#include "facenum/compliance.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace facenum {

namespace {

long long ceil_div(long long value, long long per) {
    return per > 0 ? (value + per - 1) / per : 0;
}

}  // namespace

void BuildingContext::validate() const {
    if (building_class < 1 || building_class > 9) {
        throw ValidationError("building_class must be in 1..9, got " +
                              std::to_string(building_class));
    }
    if (floors < 1) throw ValidationError("floors must be >= 1");
    if (dwellings < 0 || occupant_load < 0 || residents_without_private_amenities < 0 ||
        standard_parking_spaces < 0) {
        throw ValidationError("context counts must be >= 0");
    }
}

BuildingContext BuildingContext::from_json(const json& doc, const std::string& context) {
    BuildingContext ctx;
    ctx.building_class = require_field(doc, "building_class", context).get<int>();
    ctx.dwellings = doc.value("dwellings", 0LL);
    ctx.floors = doc.value("floors", 1);
    ctx.occupant_load = doc.value("occupant_load", 0LL);
    ctx.residents_without_private_amenities =
        doc.value("residents_without_private_amenities", 0LL);
    ctx.long_term_accommodation = doc.value("long_term_accommodation", false);
    ctx.standard_parking_spaces = doc.value("standard_parking_spaces", 0LL);
    if (doc.contains("use_tags")) {
        for (const auto& tag : doc.at("use_tags")) {
            ctx.use_tags.insert(tag.get<std::string>());
        }
    }
    ctx.validate();
    return ctx;
}

ojson BuildingContext::to_json() const {
    ojson doc;
    doc["building_class"] = building_class;
    doc["dwellings"] = dwellings;
    doc["floors"] = floors;
    doc["occupant_load"] = occupant_load;
    doc["residents_without_private_amenities"] = residents_without_private_amenities;
    doc["long_term_accommodation"] = long_term_accommodation;
    doc["use_tags"] = use_tags;
    doc["standard_parking_spaces"] = standard_parking_spaces;
    return doc;
}

long long RuleFormula::evaluate(const BuildingContext& ctx) const {
    switch (kind) {
        case Kind::Constant:
            return amount;
        case Kind::PerFloor:
            return amount * ctx.floors;
        case Kind::PerDwelling:
            return amount * ctx.dwellings;
        case Kind::CeilRatio: {
            long long value = 0;
            if (numerator == "dwellings") value = ctx.dwellings;
            else if (numerator == "floors") value = ctx.floors;
            else if (numerator == "occupant_load") value = ctx.occupant_load;
            else if (numerator == "residents_without_private_amenities")
                value = ctx.residents_without_private_amenities;
            else if (numerator == "standard_parking_spaces")
                value = ctx.standard_parking_spaces;
            else throw ConfigError("unknown formula numerator '" + numerator + "'");
            return ceil_div(value, per);
        }
    }
    return 0;
}

bool RuleCondition::satisfied(const BuildingContext& ctx) const {
    if (requires_long_term && !ctx.long_term_accommodation) return false;
    if (requires_parking && ctx.standard_parking_spaces <= 0) return false;
    if (!requires_tags_any.empty()) {
        const bool any = std::any_of(requires_tags_any.begin(), requires_tags_any.end(),
                                     [&](const std::string& t) { return ctx.use_tags.count(t); });
        if (!any) return false;
    }
    return true;
}

long long required_quantity(const Rule& rule, const BuildingContext& ctx, bool* applicable) {
    ctx.validate();
    const bool applies =
        rule.classes.count(ctx.building_class) > 0 && rule.condition.satisfied(ctx);
    if (applicable) *applicable = applies;
    if (!applies) return 0;
    const long long required = rule.formula.evaluate(ctx);
    return required < 0 ? 0 : required;
}

namespace {

constexpr std::array<int, 8> kClasses2to9 = {2, 3, 4, 5, 6, 7, 8, 9};
constexpr std::array<int, 5> kClasses5to9 = {5, 6, 7, 8, 9};
constexpr std::array<int, 9> kAllClasses = {1, 2, 3, 4, 5, 6, 7, 8, 9};

std::set<int> cls(std::initializer_list<int> list) { return {list}; }

template <std::size_t N>
std::set<int> cls(const std::array<int, N>& list) {
    return {list.begin(), list.end()};
}

}  // namespace

RuleCatalog RuleCatalog::builtin(const CatalogParams& params) {
    RuleCatalog cat;
    cat.catalog_version = "ncc-summary-v1";

    auto rule = [&](std::string id, std::set<int> classes, FacilityType facility,
                    RuleFormula formula, RuleCondition condition, std::string citation) {
        cat.rules.push_back({std::move(id), std::move(classes), facility, formula,
                             std::move(condition), std::move(citation)});
    };
    auto na = [&](std::set<int> classes, FacilityType facility, std::string citation) {
        cat.markers.push_back({std::move(classes), facility, std::move(citation)});
    };

    using FK = RuleFormula::Kind;

    // Sanitary facilities (counted as toilet rooms).
    rule("sanitary-dwelling", cls({1, 2, 3, 4}), FacilityType::Toilet,
         {FK::PerDwelling, 1}, {},
         "Each dwelling or unit in residential Classes 1-4 must include at least one "
         "toilet, wash basin, and shower or bath.");
    rule("sanitary-class3-shared", cls({3}), FacilityType::Toilet,
         {FK::CeilRatio, 0, "residents_without_private_amenities", 10}, {},
         "Class 3: one set of sanitary facilities for every ten residents without "
         "private amenities.");
    rule("sanitary-occupant-load", cls(kClasses5to9), FacilityType::Toilet,
         {FK::CeilRatio, 0, "occupant_load", params.sanitary_occupant_ratio}, {},
         "Classes 5-9: sanitary facility count is determined by occupant load. The "
         "ratio of 1 set per " + std::to_string(params.sanitary_occupant_ratio) +
         " occupants is a configurable default, not regulation text.");

    // Kitchens.
    rule("kitchen-dwelling", cls({1, 2, 4}), FacilityType::Kitchen, {FK::PerDwelling, 1},
         {},
         "Dwellings (Classes 1, 2, 4) must have a functional kitchen.");
    rule("kitchen-class3-longterm", cls({3}), FacilityType::Kitchen, {FK::Constant, 1},
         {.requires_long_term = true},
         "Class 3 requires kitchens or kitchenettes for long-term accommodation; "
         "short-term stays may rely on shared facilities.");
    rule("kitchen-use-demand", cls({5, 6, 8, 9}), FacilityType::Kitchen, {FK::Constant, 1},
         {.requires_tags_any = {"staff-facilities", "canteen", "hospital"}},
         "Classes 5-9 require kitchens only where building use demands them, such as "
         "staff facilities, canteens, or hospital kitchens.");
    na(cls({7}), FacilityType::Kitchen, "Carparks (Class 7) do not require kitchens.");

    // Laundries.
    rule("laundry-residential", cls({1, 2, 4}), FacilityType::Laundry, {FK::Constant, 1},
         {},
         "Residential Classes 1, 2, 4 require an in-unit laundry or access to a shared "
         "laundry.");
    rule("laundry-class3", cls({3}), FacilityType::Laundry, {FK::Constant, 1}, {},
         "Class 3 buildings must provide shared laundry facilities for residents.");
    rule("laundry-class9-use", cls({9}), FacilityType::Laundry, {FK::Constant, 1},
         {.requires_tags_any = {"hospital", "aged-care"}},
         "Class 9 requires laundries only where the specific use demands them, such as "
         "hospitals or aged care.");
    na(cls({5, 6, 7, 8}), FacilityType::Laundry,
       "Laundries are not generally required in Classes 5-8.");

    // Exits.
    rule("exits-class1", cls({1}), FacilityType::Exit, {FK::Constant, 1}, {},
         "Class 1 dwellings require at least one exit.");
    rule("exits-per-floor", cls(kClasses2to9), FacilityType::Exit, {FK::PerFloor, 2}, {},
         "Classes 2-9 require a minimum of two exits per floor; checked here as a "
         "building total of 2 x floors.");
    na(cls(kAllClasses), FacilityType::EmergencyExit,
       "Emergency exit doors are assessed under the exits provision; no separate count "
       "is prescribed.");

    // Fire and safety equipment.
    rule("fire-smoke-alarms-residential", cls({1, 2, 3, 4}), FacilityType::FireSafety,
         {FK::Constant, 1}, {},
         "Smoke alarms are mandatory in habitable rooms of residential classes; "
         "room-level placement needs room segmentation, so this check is a "
         "building-level minimum of one.");
    rule("fire-equipment-occupant-load", cls(kClasses5to9), FacilityType::FireSafety,
         {FK::CeilRatio, 0, "occupant_load", params.fire_occupant_ratio}, {},
         "Non-residential classes require fire extinguishers, hose reels and often "
         "sprinklers, tied to occupant load and assessed risk. The ratio of 1 item per " +
             std::to_string(params.fire_occupant_ratio) +
             " occupants is a configurable default, not regulation text.");

    // Accessibility.
    rule("accessibility-per-floor", cls(kClasses2to9), FacilityType::Accessibility,
         {FK::PerFloor, 2}, {},
         "Each floor of Class 2-9 buildings must provide at least one accessible "
         "entrance and one accessible facility (two provisions per floor).");
    rule("accessible-sanitary-per-floor", cls(kClasses5to9), FacilityType::Accessibility,
         {FK::PerFloor, 1}, {},
         "Non-residential classes require at least one accessible unisex sanitary "
         "facility per floor.");
    na(cls({1}), FacilityType::Accessibility,
       "Class 1 dwellings are exempt from common-area accessibility requirements.");

    // Parking.
    rule("parking-per-dwelling", cls({1, 2}), FacilityType::ParkingStandard,
         {FK::PerDwelling, 1}, {},
         "Class 1 and Class 2 dwellings require at least one car parking space per "
         "dwelling.");
    na(cls({3, 4, 5, 6, 7, 8, 9}), FacilityType::ParkingStandard,
       "No minimum standard-space count is prescribed; parking demand is assessed per "
       "development.");
    rule("parking-accessible-ratio", cls(kAllClasses), FacilityType::ParkingAccessible,
         {FK::CeilRatio, 0, "standard_parking_spaces", 50},
         {.requires_parking = true},
         "Where parking is provided, at least one accessible parking space per fifty "
         "standard parking spaces.");

    return cat;
}

bool RuleCatalog::covers(int building_class, FacilityType facility) const {
    for (const auto& r : rules) {
        if (r.facility == facility && r.classes.count(building_class)) return true;
    }
    for (const auto& m : markers) {
        if (m.facility == facility && m.classes.count(building_class)) return true;
    }
    return false;
}

namespace {

RuleFormula formula_from_json(const json& doc, const std::string& context) {
    RuleFormula f;
    const std::string kind = require_field(doc, "kind", context).get<std::string>();
    if (kind == "constant") {
        f.kind = RuleFormula::Kind::Constant;
        f.amount = require_field(doc, "amount", context).get<long long>();
    } else if (kind == "per_floor") {
        f.kind = RuleFormula::Kind::PerFloor;
        f.amount = require_field(doc, "amount", context).get<long long>();
    } else if (kind == "per_dwelling") {
        f.kind = RuleFormula::Kind::PerDwelling;
        f.amount = require_field(doc, "amount", context).get<long long>();
    } else if (kind == "ceil_ratio") {
        f.kind = RuleFormula::Kind::CeilRatio;
        f.numerator = require_field(doc, "numerator", context).get<std::string>();
        f.per = require_field(doc, "per", context).get<long long>();
        if (f.per < 1) throw SchemaError(context + ": 'per' must be >= 1");
    } else {
        throw SchemaError(context + ": unknown formula kind '" + kind + "'");
    }
    return f;
}

ojson formula_to_json(const RuleFormula& f) {
    ojson doc;
    switch (f.kind) {
        case RuleFormula::Kind::Constant:
            doc["kind"] = "constant";
            doc["amount"] = f.amount;
            break;
        case RuleFormula::Kind::PerFloor:
            doc["kind"] = "per_floor";
            doc["amount"] = f.amount;
            break;
        case RuleFormula::Kind::PerDwelling:
            doc["kind"] = "per_dwelling";
            doc["amount"] = f.amount;
            break;
        case RuleFormula::Kind::CeilRatio:
            doc["kind"] = "ceil_ratio";
            doc["numerator"] = f.numerator;
            doc["per"] = f.per;
            break;
    }
    return doc;
}

}  // namespace

RuleCatalog RuleCatalog::from_json(const json& doc, const std::string& context) {
    RuleCatalog cat;
    cat.catalog_version = require_field(doc, "catalog_version", context).get<std::string>();
    for (const auto& r : require_field(doc, "rules", context)) {
        Rule rule;
        rule.rule_id = require_field(r, "rule_id", context).get<std::string>();
        for (const auto& c : require_field(r, "classes", context)) {
            rule.classes.insert(c.get<int>());
        }
        rule.facility =
            facility_from_string(require_field(r, "facility", context).get<std::string>());
        rule.formula = formula_from_json(require_field(r, "formula", context),
                                         context + ": rule " + rule.rule_id);
        if (r.contains("condition")) {
            const auto& c = r.at("condition");
            if (c.contains("requires_tags_any")) {
                for (const auto& t : c.at("requires_tags_any")) {
                    rule.condition.requires_tags_any.push_back(t.get<std::string>());
                }
            }
            rule.condition.requires_long_term = c.value("requires_long_term", false);
            rule.condition.requires_parking = c.value("requires_parking", false);
        }
        rule.citation = require_field(r, "citation", context).get<std::string>();
        cat.rules.push_back(std::move(rule));
    }
    for (const auto& m : require_field(doc, "not_applicable", context)) {
        NotApplicableMarker marker;
        for (const auto& c : require_field(m, "classes", context)) {
            marker.classes.insert(c.get<int>());
        }
        marker.facility =
            facility_from_string(require_field(m, "facility", context).get<std::string>());
        marker.citation = require_field(m, "citation", context).get<std::string>();
        cat.markers.push_back(std::move(marker));
    }
    return cat;
}

RuleCatalog RuleCatalog::load(const std::filesystem::path& path) {
    return from_json(load_json_file(path), path.string());
}

ojson RuleCatalog::to_json() const {
    ojson doc;
    doc["catalog_version"] = catalog_version;
    ojson rules_json = ojson::array();
    for (const auto& r : rules) {
        ojson rj;
        rj["rule_id"] = r.rule_id;
        rj["classes"] = r.classes;
        rj["facility"] = to_string(r.facility);
        rj["formula"] = formula_to_json(r.formula);
        if (!r.condition.requires_tags_any.empty() || r.condition.requires_long_term ||
            r.condition.requires_parking) {
            ojson cj;
            if (!r.condition.requires_tags_any.empty()) {
                cj["requires_tags_any"] = r.condition.requires_tags_any;
            }
            if (r.condition.requires_long_term) cj["requires_long_term"] = true;
            if (r.condition.requires_parking) cj["requires_parking"] = true;
            rj["condition"] = std::move(cj);
        }
        rj["citation"] = r.citation;
        rules_json.push_back(std::move(rj));
    }
    doc["rules"] = std::move(rules_json);
    ojson markers_json = ojson::array();
    for (const auto& m : markers) {
        markers_json.push_back({{"classes", m.classes},
                                {"facility", to_string(m.facility)},
                                {"citation", m.citation}});
    }
    doc["not_applicable"] = std::move(markers_json);
    return doc;
}

ComplianceReport evaluate(const std::map<FacilityType, long long>& provided,
                          const BuildingContext& ctx, const RuleCatalog& catalog) {
    ctx.validate();
    ComplianceReport report;
    std::set<FacilityType> missing_data;
    for (const auto& rule : catalog.rules) {
        if (!rule.classes.count(ctx.building_class)) continue;
        RuleOutcome out;
        out.rule_id = rule.rule_id;
        out.facility = rule.facility;
        out.citation = rule.citation;
        out.required = required_quantity(rule, ctx, &out.applicable);
        auto it = provided.find(rule.facility);
        if (it != provided.end()) {
            out.provided = it->second;
        } else if (out.applicable && out.required > 0) {
            missing_data.insert(rule.facility);
        }
        if (out.applicable) {
            out.pass = out.provided >= out.required;
            out.shortfall = std::max(0LL, out.required - out.provided);
            report.overall_pass = report.overall_pass && out.pass;
        }
        report.entries.push_back(std::move(out));
    }
    for (FacilityType f : missing_data) {
        report.warnings.push_back("no enumeration result for '" +
                                  std::string(to_string(f)) + "'; treated as provided 0");
    }
    return report;
}

ojson ComplianceReport::to_json() const {
    ojson doc;
    doc["overall_pass"] = overall_pass;
    ojson entries_json = ojson::array();
    for (const auto& e : entries) {
        entries_json.push_back({{"rule_id", e.rule_id},
                                {"facility", to_string(e.facility)},
                                {"applicable", e.applicable},
                                {"required", e.required},
                                {"provided", e.provided},
                                {"pass", e.pass},
                                {"shortfall", e.shortfall},
                                {"citation", e.citation}});
    }
    doc["entries"] = std::move(entries_json);
    doc["warnings"] = warnings;
    return doc;
}

std::string ComplianceReport::to_table() const {
    std::ostringstream out;
    out << std::left << std::setw(34) << "rule" << std::setw(22) << "facility"
        << std::right << std::setw(9) << "required" << std::setw(9) << "provided"
        << "  status\n";
    for (const auto& e : entries) {
        out << std::left << std::setw(34) << e.rule_id << std::setw(22)
            << to_string(e.facility) << std::right << std::setw(9) << e.required
            << std::setw(9) << e.provided << "  "
            << (!e.applicable ? "n/a" : (e.pass ? "PASS" : "FAIL"));
        if (e.applicable && !e.pass) out << " (shortfall " << e.shortfall << ")";
        out << "\n";
    }
    out << "overall: " << (overall_pass ? "PASS" : "FAIL") << "\n";
    return out.str();
}

}  // namespace facenum
