#pragma once

#include <optional>
#include <string_view>

#include "bayesrisk/cost_model.hpp"
#include "bayesrisk/relative_error.hpp"

namespace bayesrisk {

enum class Estimator { mode, mean_snapped, median, bayes };

std::string_view to_string(Estimator e);
std::optional<Estimator> parse_estimator(std::string_view name);

/// State reported by `estimator` for posterior `p`. Mean is snapped to the
/// nearest embedded state.
StateIndex estimate_state(Estimator estimator, const Posterior& p, const StateSpace& space,
                          const CostMatrix& cost);

/**
 * (E[cost of estimate] - E[cost of optimum]) / E[cost of optimum] under `p`.
 *
 * Zero when the estimate ties the optimum; unbounded when the optimum costs
 * nothing and the estimate does. Throws NotNormalized, DimensionMismatch.
 */
RelativeError relative_error(StateIndex estimate, const Posterior& p, const CostMatrix& cost);

struct SearchConfig {
    /// Simplex grid step; the grid uses multiples of 1 / round(1 / resolution).
    double resolution = 0.02;
    /// Largest support size of the structured near-tie families.
    std::size_t support_cap = 3;
    std::size_t refine_iterations = 20;
    double epsilon = 1e-4;

    /// Throws InvalidArgument when out of range.
    void validate() const;
};

/// Largest state count for which the full simplex grid is searched.
inline constexpr std::size_t kMaxGridStates = 6;

enum class SearchMethod { structured_pair, structured_triple, structured_support, grid, refined };

std::string_view to_string(SearchMethod m);

struct WorstCase {
    RelativeError value;
    Posterior witness;
    StateIndex estimator_state;
    StateIndex optimal_state;
    SearchMethod method;
    /// Mean estimator only: the unsnapped mean at the witness.
    std::optional<double> raw_mean;
    /// Mode estimator with a near-tie witness: value of the family in the
    /// limit epsilon -> 0, which the search approaches but does not attain.
    std::optional<RelativeError> limit;
    /// True when the state space was too large for the grid phase.
    bool grid_skipped = false;
};

/**
 * Searches the probability simplex for the posterior maximizing the relative
 * error of `estimator`.
 *
 * Three phases, keeping the best (strictly larger values replace earlier
 * ones):
 *   1. near-tie families on supports of 2..support_cap states,
 *      plus every two-point split on the grid;
 *   2. the full simplex grid, for at most kMaxGridStates states;
 *   3. coordinate hill climbing from the best candidate, halving the step
 *      each round.
 *
 * The result is fully deterministic. Throws NotNormalized, MissingEmbedding,
 * DimensionMismatch, InvalidArgument.
 */
WorstCase worst_case(Estimator estimator, const CostMatrix& cost, const StateSpace& space,
                     const SearchConfig& config = {});

}  // namespace bayesrisk
