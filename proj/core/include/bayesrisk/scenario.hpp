#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "bayesrisk/adversarial.hpp"
#include "bayesrisk/appropriateness.hpp"
#include "bayesrisk/cost_model.hpp"
#include "bayesrisk/error.hpp"
#include "bayesrisk/estimators.hpp"

namespace bayesrisk {

/// Malformed scenario document. `path` names the offending key, e.g.
/// "cost" or "search.resolution"; empty for syntax errors.
class SchemaError : public Error {
public:
    SchemaError(std::string path, const std::string& reason)
        : Error(path.empty() ? reason : path + ": " + reason), path_(std::move(path)) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

/// A well-formed scenario whose values fail numeric validation.
class ScenarioError : public Error {
public:
    ScenarioError(std::string field, const std::string& reason)
        : Error(field + ": " + reason), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

enum class CostProfile { zero_one, abs, squared };

std::string_view to_string(CostProfile p);
std::optional<CostProfile> parse_cost_profile(std::string_view name);

struct MatrixCost {
    std::vector<std::vector<double>> rows;
};

/// Winnings; ingested as negated costs.
struct PayoffCost {
    std::vector<std::vector<double>> rows;
};

using CostSpec = std::variant<CostProfile, MatrixCost, PayoffCost>;

/**
 * Scenario document (JSON):
 *
 *   {
 *     "name": "coin_game",
 *     "states": ["H", "T"],
 *     "embedding": [0, 1],                      // optional
 *     "cost": "abs" | {"matrix": [[...]]} | {"payoff": [[...]]},
 *     "distribution": [0.5, 0.5] | "worst_case",
 *     "worst_case": true,                       // optional, adds a search
 *     "estimators": ["mode", "mean", "median", "bayes"],
 *     "profile_checks": ["abs", "squared"],     // optional
 *     "search": {"resolution": 0.02, "support_cap": 3,
 *                "refine_iterations": 20, "epsilon": 1e-4}
 *   }
 */
struct Scenario {
    std::string name;
    std::vector<std::string> states;
    std::optional<std::vector<double>> embedding;
    CostSpec cost = CostProfile::zero_one;
    /// Explicit posterior; absent when only a worst-case search is requested.
    std::optional<std::vector<double>> distribution;
    bool worst_case = false;
    std::vector<Estimator> estimators;
    /// Distance profiles to classify for mean and median estimation. Defaults
    /// to the cost's own profile when it is abs or squared.
    std::vector<CostProfile> profile_checks;
    SearchConfig search;
};

/// Throws SchemaError.
Scenario parse_scenario(std::string_view text);

struct EstimatorRow {
    Estimator estimator;
    StateIndex estimate;
    /// Mean only: the value before snapping to a state.
    std::optional<double> raw_mean;
    double expected_cost;
    RelativeError relative_error;
};

struct DistanceCheck {
    CostProfile profile;
    DistanceVerdict mean;
    DistanceVerdict median;
};

struct WorstCaseBlock {
    Estimator estimator;
    WorstCase result;
};

struct RiskReport {
    std::string scenario;
    std::vector<std::string> states;
    CostMatrix cost;
    std::optional<Posterior> distribution;
    std::vector<EstimatorRow> rows;
    ModeVerdict mode_verdict;
    ModeLowerBound mode_bound;
    std::vector<DistanceCheck> distance_checks;
    std::vector<WorstCaseBlock> worst_cases;
};

/// Throws ScenarioError naming the scenario field at fault.
RiskReport run_scenario(const Scenario& scenario);

enum class ReportFormat { text, json };

/// Deterministic rendering; numbers carry 9 significant digits.
std::string render_report(const RiskReport& report, ReportFormat format);

std::vector<std::string> builtin_names();
/// Worked examples shipped with the tool: coin_game, two_coin,
/// three_state_abs, zero_class.
std::optional<Scenario> builtin_scenario(std::string_view name);

}  // namespace bayesrisk
