#include "bayesrisk/scenario.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <span>
#include <sstream>

#include <nlohmann/json.hpp>

namespace bayesrisk {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string_view to_string(CostProfile p) {
    switch (p) {
    case CostProfile::zero_one:
        return "zero_one";
    case CostProfile::abs:
        return "abs";
    case CostProfile::squared:
        return "squared";
    }
    return "?";
}

std::optional<CostProfile> parse_cost_profile(std::string_view name) {
    for (auto p : {CostProfile::zero_one, CostProfile::abs, CostProfile::squared}) {
        if (to_string(p) == name) {
            return p;
        }
    }
    return std::nullopt;
}

namespace {

// ---------------------------------------------------------------------------
// Parsing

std::vector<double> number_array(const json& value, const std::string& path) {
    if (!value.is_array()) {
        throw SchemaError(path, "expected an array of numbers");
    }
    std::vector<double> out;
    for (std::size_t i = 0; i < value.size(); ++i) {
        if (!value[i].is_number()) {
            throw SchemaError(path + "[" + std::to_string(i) + "]", "expected a number");
        }
        out.push_back(value[i].get<double>());
    }
    return out;
}

std::vector<std::vector<double>> square_matrix(const json& value, const std::string& path,
                                               std::size_t n) {
    if (!value.is_array() || value.size() != n) {
        throw SchemaError(path, "expected " + std::to_string(n) + " rows");
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < n; ++i) {
        const std::string row_path = path + "[" + std::to_string(i) + "]";
        rows.push_back(number_array(value[i], row_path));
        if (rows.back().size() != n) {
            throw SchemaError(row_path, "expected " + std::to_string(n) + " entries");
        }
    }
    return rows;
}

std::size_t count_field(const json& value, const std::string& path) {
    if (!value.is_number_unsigned()) {
        throw SchemaError(path, "expected a non-negative integer");
    }
    return value.get<std::size_t>();
}

double number_field(const json& value, const std::string& path) {
    if (!value.is_number()) {
        throw SchemaError(path, "expected a number");
    }
    return value.get<double>();
}

CostSpec parse_cost(const json& value, std::size_t n, bool embedded) {
    if (value.is_string()) {
        const auto name = value.get<std::string>();
        const auto profile = parse_cost_profile(name);
        if (!profile) {
            throw SchemaError("cost", "unknown cost profile '" + name + "'");
        }
        if (*profile != CostProfile::zero_one && !embedded) {
            throw SchemaError("cost", "profile '" + name + "' requires an embedding");
        }
        return *profile;
    }
    if (!value.is_object() || value.size() != 1) {
        throw SchemaError("cost",
                          "expected a profile name or an object with one of 'matrix', 'payoff'");
    }
    if (value.contains("matrix")) {
        return MatrixCost{square_matrix(value["matrix"], "cost.matrix", n)};
    }
    if (value.contains("payoff")) {
        return PayoffCost{square_matrix(value["payoff"], "cost.payoff", n)};
    }
    throw SchemaError("cost." + value.begin().key(), "unknown cost kind");
}

SearchConfig parse_search(const json& value) {
    if (!value.is_object()) {
        throw SchemaError("search", "expected an object");
    }
    SearchConfig config;
    for (const auto& [key, field] : value.items()) {
        const std::string path = "search." + key;
        if (key == "resolution") {
            config.resolution = number_field(field, path);
        } else if (key == "support_cap") {
            config.support_cap = count_field(field, path);
        } else if (key == "refine_iterations") {
            config.refine_iterations = count_field(field, path);
        } else if (key == "epsilon") {
            config.epsilon = number_field(field, path);
        } else {
            throw SchemaError(path, "unknown key");
        }
    }
    return config;
}

std::vector<CostProfile> parse_profile_checks(const json& value) {
    if (!value.is_array()) {
        throw SchemaError("profile_checks", "expected an array of profile names");
    }
    std::vector<CostProfile> out;
    for (std::size_t i = 0; i < value.size(); ++i) {
        const std::string path = "profile_checks[" + std::to_string(i) + "]";
        const auto profile =
            value[i].is_string() ? parse_cost_profile(value[i].get<std::string>()) : std::nullopt;
        if (!profile || *profile == CostProfile::zero_one) {
            throw SchemaError(path, "expected 'abs' or 'squared'");
        }
        out.push_back(*profile);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Rendering

/// Round to 9 significant digits so the JSON writer emits at most 9.
double sig9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    const double r = std::strtod(buf, nullptr);
    return r == 0.0 ? 0.0 : r;
}

std::string fmt9(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", sig9(v));
    return buf;
}

ordered_json number(double v) { return sig9(v); }

ordered_json number(const RelativeError& e) {
    if (e.is_unbounded()) {
        return "unbounded";
    }
    return sig9(e.value());
}

ordered_json numbers(std::span<const double> values) {
    auto out = ordered_json::array();
    for (double v : values) {
        out.push_back(number(v));
    }
    return out;
}

ordered_json labels_of(const std::vector<std::string>& states, std::span<const StateIndex> idx) {
    auto out = ordered_json::array();
    for (auto s : idx) {
        out.push_back(states[s]);
    }
    return out;
}

ordered_json distance_json(const DistanceVerdict& v, bool with_split) {
    ordered_json out;
    out["appropriate"] = v.appropriate;
    out["max_residual"] = number(v.max_residual);
    out["tolerance"] = number(v.tolerance);
    out["worst_x"] = number(v.worst_x);
    if (with_split) {
        out["worst_n"] = v.worst_n;
    }
    return out;
}

std::string render_json(const RiskReport& r) {
    ordered_json doc;
    doc["scenario"] = r.scenario;
    doc["states"] = r.states;

    ordered_json cost;
    auto matrix = ordered_json::array();
    for (const auto& row : r.cost.rows()) {
        matrix.push_back(numbers(row));
    }
    cost["normalized"] = std::move(matrix);
    cost["trivial"] = r.cost.trivial();
    doc["cost"] = std::move(cost);

    if (r.distribution) {
        doc["distribution"] = numbers(r.distribution->probs());
    } else {
        doc["distribution"] = "worst_case";
    }

    auto rows = ordered_json::array();
    for (const auto& row : r.rows) {
        ordered_json entry;
        entry["estimator"] = to_string(row.estimator);
        entry["estimate"] = r.states[row.estimate];
        if (row.raw_mean) {
            entry["raw_mean"] = number(*row.raw_mean);
        }
        entry["expected_cost"] = number(row.expected_cost);
        entry["relative_error"] = number(row.relative_error);
        rows.push_back(std::move(entry));
    }
    doc["estimators"] = std::move(rows);

    ordered_json mode;
    mode["appropriate"] = r.mode_verdict.appropriate;
    mode["classification"] = to_string(r.mode_verdict.classification);
    auto violations = ordered_json::array();
    for (const auto& v : r.mode_verdict.violations) {
        ordered_json entry;
        entry["condition"] = to_string(v.condition);
        entry["states"] = labels_of(r.states, v.states);
        entry["lower_bound"] = number(v.lower_bound);
        violations.push_back(std::move(entry));
    }
    mode["violations"] = std::move(violations);
    ordered_json bound;
    bound["value"] = number(r.mode_bound.value);
    bound["construction"] = to_string(r.mode_bound.construction);
    bound["states"] = labels_of(r.states, r.mode_bound.states);
    if (r.mode_bound.witness) {
        bound["witness"] = numbers(r.mode_bound.witness->probs());
    }
    mode["lower_bound"] = std::move(bound);

    ordered_json appropriateness;
    appropriateness["mode"] = std::move(mode);
    auto profiles = ordered_json::array();
    for (const auto& check : r.distance_checks) {
        ordered_json entry;
        entry["profile"] = to_string(check.profile);
        entry["mean"] = distance_json(check.mean, true);
        entry["median"] = distance_json(check.median, false);
        profiles.push_back(std::move(entry));
    }
    appropriateness["distance_profiles"] = std::move(profiles);
    doc["appropriateness"] = std::move(appropriateness);

    auto searches = ordered_json::array();
    for (const auto& block : r.worst_cases) {
        const auto& w = block.result;
        ordered_json entry;
        entry["estimator"] = to_string(block.estimator);
        entry["value"] = number(w.value);
        if (w.limit) {
            entry["limit"] = number(*w.limit);
        }
        entry["method"] = to_string(w.method);
        entry["witness"] = numbers(w.witness.probs());
        entry["estimate"] = r.states[w.estimator_state];
        entry["optimal"] = r.states[w.optimal_state];
        if (w.raw_mean) {
            entry["raw_mean"] = number(*w.raw_mean);
        }
        entry["grid_skipped"] = w.grid_skipped;
        searches.push_back(std::move(entry));
    }
    doc["worst_case"] = std::move(searches);
    return doc.dump(2) + "\n";
}

std::string join_numbers(std::span<const double> values) {
    std::string out = "(";
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += (i ? ", " : "") + fmt9(values[i]);
    }
    return out + ")";
}

std::string join_labels(const std::vector<std::string>& states, std::span<const StateIndex> idx) {
    std::string out;
    for (std::size_t i = 0; i < idx.size(); ++i) {
        out += (i ? "," : "") + states[idx[i]];
    }
    return out;
}

std::string render_text(const RiskReport& r) {
    std::ostringstream out;
    out << "scenario " << r.scenario << "\n";
    out << "states  ";
    for (const auto& s : r.states) {
        out << " " << s;
    }
    out << "\n\nnormalized cost" << (r.cost.trivial() ? " (trivial)" : "") << "\n";
    for (const auto& row : r.cost.rows()) {
        out << "  " << join_numbers(row) << "\n";
    }
    out << "\ndistribution "
        << (r.distribution ? join_numbers(r.distribution->probs()) : "worst_case") << "\n";
    for (const auto& row : r.rows) {
        out << "  " << to_string(row.estimator) << ": " << r.states[row.estimate];
        if (row.raw_mean) {
            out << " (raw " << fmt9(*row.raw_mean) << ")";
        }
        out << "  expected cost " << fmt9(row.expected_cost) << "  relative error "
            << row.relative_error.to_string() << "\n";
    }

    out << "\nmode estimation: " << to_string(r.mode_verdict.classification) << "\n";
    for (const auto& v : r.mode_verdict.violations) {
        out << "  violation " << to_string(v.condition) << " on "
            << join_labels(r.states, v.states) << ", lower bound " << v.lower_bound.to_string()
            << "\n";
    }
    out << "  lower bound " << r.mode_bound.value.to_string() << " via "
        << to_string(r.mode_bound.construction);
    if (!r.mode_bound.states.empty()) {
        out << " on " << join_labels(r.states, r.mode_bound.states);
    }
    out << "\n";
    for (const auto& check : r.distance_checks) {
        out << "  " << to_string(check.profile) << ": mean "
            << (check.mean.appropriate ? "appropriate" : "inappropriate") << " (residual "
            << fmt9(check.mean.max_residual) << "), median "
            << (check.median.appropriate ? "appropriate" : "inappropriate") << " (residual "
            << fmt9(check.median.max_residual) << ")\n";
    }

    if (!r.worst_cases.empty()) {
        out << "\nworst case\n";
    }
    for (const auto& block : r.worst_cases) {
        const auto& w = block.result;
        out << "  " << to_string(block.estimator) << ": " << w.value.to_string();
        if (w.limit) {
            out << " (limit " << w.limit->to_string() << ")";
        }
        out << " via " << to_string(w.method) << " at " << join_numbers(w.witness.probs())
            << ", estimate " << r.states[w.estimator_state] << ", optimal "
            << r.states[w.optimal_state] << "\n";
        if (w.grid_skipped) {
            out << "    note: grid phase skipped for more than " << kMaxGridStates
                << " states\n";
        }
    }
    return out.str();
}

template <typename Fn>
auto attributed(const std::string& field, Fn&& fn) {
    try {
        return fn();
    } catch (const ScenarioError&) {
        throw;
    } catch (const Error& e) {
        throw ScenarioError(field, e.what());
    }
}

CostMatrix raw_cost(const CostSpec& spec, const StateSpace& space) {
    if (const auto* profile = std::get_if<CostProfile>(&spec)) {
        switch (*profile) {
        case CostProfile::zero_one: {
            std::vector<std::vector<double>> rows(space.size(),
                                                  std::vector<double>(space.size(), 1.0));
            for (std::size_t s = 0; s < space.size(); ++s) {
                rows[s][s] = 0.0;
            }
            return validate_cost(rows);
        }
        case CostProfile::abs:
            return distance_to_matrix(DistanceCost::absolute(), space);
        case CostProfile::squared:
            return distance_to_matrix(DistanceCost::squared(), space);
        }
    }
    if (const auto* matrix = std::get_if<MatrixCost>(&spec)) {
        return validate_cost(matrix->rows);
    }
    auto rows = std::get<PayoffCost>(spec).rows;
    for (auto& row : rows) {
        for (double& v : row) {
            v = -v;
        }
    }
    return validate_cost(rows);
}

DistanceCost profile_cost(CostProfile p) {
    return p == CostProfile::squared ? DistanceCost::squared() : DistanceCost::absolute();
}

constexpr std::size_t kProfileSamples = 200;

}  // namespace

Scenario parse_scenario(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw SchemaError("", std::string("invalid JSON at byte ") + std::to_string(e.byte) +
                                  ": " + e.what());
    }
    if (!doc.is_object()) {
        throw SchemaError("", "scenario must be a JSON object");
    }
    static const std::vector<std::string> known = {
        "name",     "states",     "embedding",      "cost",  "distribution",
        "worst_case", "estimators", "profile_checks", "search"};
    for (const auto& [key, _] : doc.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw SchemaError(key, "unknown key");
        }
    }

    Scenario s;
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) {
            throw SchemaError("name", "expected a string");
        }
        s.name = doc["name"].get<std::string>();
    } else {
        s.name = "unnamed";
    }

    if (!doc.contains("states") || !doc["states"].is_array() || doc["states"].empty()) {
        throw SchemaError("states", "expected a non-empty array of labels");
    }
    for (std::size_t i = 0; i < doc["states"].size(); ++i) {
        if (!doc["states"][i].is_string()) {
            throw SchemaError("states[" + std::to_string(i) + "]", "expected a string");
        }
        s.states.push_back(doc["states"][i].get<std::string>());
    }
    const std::size_t n = s.states.size();

    if (doc.contains("embedding")) {
        s.embedding = number_array(doc["embedding"], "embedding");
        if (s.embedding->size() != n) {
            throw SchemaError("embedding", "expected " + std::to_string(n) + " positions");
        }
    }

    if (!doc.contains("cost")) {
        throw SchemaError("cost", "missing");
    }
    s.cost = parse_cost(doc["cost"], n, s.embedding.has_value());

    if (!doc.contains("distribution")) {
        throw SchemaError("distribution", "missing");
    }
    const auto& dist = doc["distribution"];
    if (dist.is_string()) {
        if (dist.get<std::string>() != "worst_case") {
            throw SchemaError("distribution", "expected probabilities or 'worst_case'");
        }
        s.worst_case = true;
    } else {
        s.distribution = number_array(dist, "distribution");
        if (s.distribution->size() != n) {
            throw SchemaError("distribution", "expected " + std::to_string(n) + " probabilities");
        }
    }
    if (doc.contains("worst_case")) {
        if (!doc["worst_case"].is_boolean()) {
            throw SchemaError("worst_case", "expected a boolean");
        }
        s.worst_case = s.worst_case || doc["worst_case"].get<bool>();
    }

    if (doc.contains("estimators")) {
        const auto& list = doc["estimators"];
        if (!list.is_array() || list.empty()) {
            throw SchemaError("estimators", "expected a non-empty array of estimator names");
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string path = "estimators[" + std::to_string(i) + "]";
            const auto e =
                list[i].is_string() ? parse_estimator(list[i].get<std::string>()) : std::nullopt;
            if (!e) {
                throw SchemaError(path, "expected one of mode, mean, median, bayes");
            }
            if ((*e == Estimator::mean_snapped || *e == Estimator::median) && !s.embedding) {
                throw SchemaError(path, std::string(to_string(*e)) + " requires an embedding");
            }
            s.estimators.push_back(*e);
        }
    } else {
        s.estimators = {Estimator::mode, Estimator::bayes};
    }

    if (doc.contains("profile_checks")) {
        s.profile_checks = parse_profile_checks(doc["profile_checks"]);
    } else if (const auto* p = std::get_if<CostProfile>(&s.cost); p && *p != CostProfile::zero_one) {
        s.profile_checks = {*p};
    }

    if (doc.contains("search")) {
        s.search = parse_search(doc["search"]);
    }
    return s;
}

RiskReport run_scenario(const Scenario& scenario) {
    attributed("states", [&] { return StateSpace(scenario.states); });
    const StateSpace space =
        attributed("embedding", [&] { return StateSpace(scenario.states, scenario.embedding); });
    const CostMatrix cost =
        attributed("cost", [&] { return normalize_cost(raw_cost(scenario.cost, space)); });
    std::optional<Posterior> distribution;
    if (scenario.distribution) {
        distribution = attributed("distribution", [&] { return Posterior(*scenario.distribution); });
    }
    attributed("search", [&] {
        scenario.search.validate();
        return 0;
    });

    RiskReport report{scenario.name,
                      scenario.states,
                      cost,
                      distribution,
                      {},
                      check_mode_appropriate(cost),
                      mode_error_lower_bound(cost, scenario.search.epsilon),
                      {},
                      {}};

    if (distribution) {
        for (auto e : scenario.estimators) {
            const auto state =
                attributed("estimators", [&] { return estimate_state(e, *distribution, space, cost); });
            EstimatorRow row{e, state, std::nullopt, expected_cost(state, *distribution, cost),
                             relative_error(state, *distribution, cost)};
            if (e == Estimator::mean_snapped) {
                row.raw_mean = mean_estimate(*distribution, space);
            }
            report.rows.push_back(row);
        }
    }

    const double diameter =
        space.has_embedding() && space.diameter() > 0.0 ? space.diameter() : 1.0;
    for (auto p : scenario.profile_checks) {
        const auto f = profile_cost(p);
        report.distance_checks.push_back({p, check_mean_appropriate(f, diameter, kProfileSamples),
                                          check_median_appropriate(f, diameter, kProfileSamples)});
    }

    if (scenario.worst_case) {
        for (auto e : scenario.estimators) {
            report.worst_cases.push_back(
                {e, attributed("estimators",
                               [&] { return worst_case(e, cost, space, scenario.search); })});
        }
    }
    return report;
}

std::string render_report(const RiskReport& report, ReportFormat format) {
    return format == ReportFormat::json ? render_json(report) : render_text(report);
}

namespace {

struct Builtin {
    std::string_view name;
    std::string_view text;
};

constexpr Builtin kBuiltins[] = {
    {"coin_game", R"({
  "name": "coin_game",
  "states": ["H", "T"],
  "cost": {"payoff": [[1, -2], [-1, 1]]},
  "distribution": "worst_case",
  "estimators": ["mode", "bayes"],
  "search": {"resolution": 0.001}
})"},
    {"two_coin", R"({
  "name": "two_coin",
  "states": ["HH", "HT", "TH", "TT"],
  "cost": {"matrix": [[0, 0, 1, 1], [0, 0, 2, 1], [1, 2, 0, 1], [1, 1, 1, 0]]},
  "distribution": [0.39, 0.40, 0.21, 0],
  "worst_case": true,
  "estimators": ["mode", "bayes"],
  "search": {"resolution": 0.02}
})"},
    {"three_state_abs", R"({
  "name": "three_state_abs",
  "states": ["0", "1", "2"],
  "embedding": [0, 1, 2],
  "cost": "abs",
  "distribution": "worst_case",
  "estimators": ["mode", "mean", "median", "bayes"],
  "profile_checks": ["abs", "squared"],
  "search": {"resolution": 0.01}
})"},
    {"zero_class", R"({
  "name": "zero_class",
  "states": ["s", "t", "u"],
  "cost": {"matrix": [[0, 0, 1], [0, 0, 1], [1, 1, 0]]},
  "distribution": [0.333, 0.333, 0.334],
  "worst_case": true,
  "estimators": ["mode", "bayes"],
  "search": {"resolution": 0.01}
})"},
};

}  // namespace

std::vector<std::string> builtin_names() {
    std::vector<std::string> out;
    for (const auto& b : kBuiltins) {
        out.emplace_back(b.name);
    }
    return out;
}

std::optional<Scenario> builtin_scenario(std::string_view name) {
    for (const auto& b : kBuiltins) {
        if (b.name == name) {
            return parse_scenario(b.text);
        }
    }
    return std::nullopt;
}

}  // namespace bayesrisk
