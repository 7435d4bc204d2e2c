#pragma once

#include "bayesrisk/cost_model.hpp"

namespace bayesrisk {

/// Expected costs closer than this (relative to max(1, |cost|)) count as ties.
inline constexpr double kCostTieTolerance = 1e-12;

struct BayesEstimate {
    StateIndex state;
    double cost;
};

/// sum_t cost(s, t) * P(t). Throws DimensionMismatch.
double expected_cost(StateIndex s, const Posterior& p, const CostMatrix& cost);

/// Most probable state, lowest index on ties.
StateIndex mode_estimate(const Posterior& p);

/// Posterior expectation of the embedded position. The result is a point of
/// the line, not necessarily a state.
double mean_estimate(const Posterior& p, const StateSpace& space);

/// Embedded state nearest to `x`; equidistant states resolve to the lower
/// position.
StateIndex snap_to_state(double x, const StateSpace& space);

/// Lower median: first state in embedding order whose cumulative mass
/// reaches one half.
StateIndex median_estimate(const Posterior& p, const StateSpace& space);

/// Expected-cost minimizer. Costs within kCostTieTolerance of the minimum are
/// ties and resolve to the lowest index.
BayesEstimate bayes_estimate(const Posterior& p, const CostMatrix& cost);

/**
 * Balance of the derivative mass on either side of a point estimate `e`:
 *
 *   sum_{x_t < e} f'(e - x_t) P(t) - sum_{x_t > e} f'(x_t - e) P(t)
 *
 * Atoms exactly at `e` contribute nothing. An interior cost-minimizing
 * estimate has residual zero.
 */
double stationarity_residual(double e, const Posterior& p, const StateSpace& space,
                             const DistanceCost& f);

/// sum_t f(|e - x_t|) P(t) for an arbitrary point `e` of the line.
double expected_distance_cost(double e, const Posterior& p, const StateSpace& space,
                              const DistanceCost& f);

}  // namespace bayesrisk
