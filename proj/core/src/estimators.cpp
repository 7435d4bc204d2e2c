#include "bayesrisk/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "bayesrisk/error.hpp"

namespace bayesrisk {

namespace {

void check_sizes(std::size_t posterior, std::size_t other, const char* what) {
    if (posterior != other) {
        throw DimensionMismatch(std::string("posterior has ") + std::to_string(posterior) +
                                " states but " + what + " has " + std::to_string(other));
    }
}

}  // namespace

double expected_cost(StateIndex s, const Posterior& p, const CostMatrix& cost) {
    check_sizes(p.size(), cost.size(), "cost matrix");
    if (s >= cost.size()) {
        throw DimensionMismatch("state index " + std::to_string(s) + " out of range");
    }
    double total = 0.0;
    for (std::size_t t = 0; t < p.size(); ++t) {
        total += cost(s, t) * p[t];
    }
    return total;
}

StateIndex mode_estimate(const Posterior& p) {
    StateIndex best = 0;
    for (std::size_t s = 1; s < p.size(); ++s) {
        if (p[s] > p[best]) {
            best = s;
        }
    }
    return best;
}

double mean_estimate(const Posterior& p, const StateSpace& space) {
    auto x = space.embedding();
    check_sizes(p.size(), x.size(), "state space");
    double mean = 0.0;
    for (std::size_t s = 0; s < p.size(); ++s) {
        mean += p[s] * x[s];
    }
    return mean;
}

StateIndex snap_to_state(double x, const StateSpace& space) {
    auto order = space.embedding_order();
    auto pos = space.embedding();
    StateIndex best = order.front();
    for (StateIndex s : order) {
        // strict comparison keeps the lower position on equidistant ties
        if (std::abs(pos[s] - x) < std::abs(pos[best] - x)) {
            best = s;
        }
    }
    return best;
}

StateIndex median_estimate(const Posterior& p, const StateSpace& space) {
    auto order = space.embedding_order();
    check_sizes(p.size(), order.size(), "state space");
    double cumulative = 0.0;
    for (StateIndex s : order) {
        cumulative += p[s];
        if (cumulative >= 0.5 - kCostTieTolerance) {
            return s;
        }
    }
    return order.back();
}

BayesEstimate bayes_estimate(const Posterior& p, const CostMatrix& cost) {
    check_sizes(p.size(), cost.size(), "cost matrix");
    std::vector<double> costs(cost.size());
    for (std::size_t s = 0; s < cost.size(); ++s) {
        costs[s] = expected_cost(s, p, cost);
    }
    const double lowest = *std::min_element(costs.begin(), costs.end());
    const double slack = kCostTieTolerance * std::max(1.0, std::abs(lowest));
    for (std::size_t s = 0; s < costs.size(); ++s) {
        if (costs[s] <= lowest + slack) {
            return {s, costs[s]};
        }
    }
    return {0, costs[0]};  // unreachable: the minimum is always within slack
}

double stationarity_residual(double e, const Posterior& p, const StateSpace& space,
                             const DistanceCost& f) {
    auto x = space.embedding();
    check_sizes(p.size(), x.size(), "state space");
    double below = 0.0;
    double above = 0.0;
    for (std::size_t t = 0; t < p.size(); ++t) {
        if (p[t] == 0.0) {
            continue;
        }
        if (x[t] < e) {
            below += f.derivative(e - x[t]) * p[t];
        } else if (x[t] > e) {
            above += f.derivative(x[t] - e) * p[t];
        }
    }
    return below - above;
}

double expected_distance_cost(double e, const Posterior& p, const StateSpace& space,
                              const DistanceCost& f) {
    auto x = space.embedding();
    check_sizes(p.size(), x.size(), "state space");
    double total = 0.0;
    for (std::size_t t = 0; t < p.size(); ++t) {
        total += f(std::abs(e - x[t])) * p[t];
    }
    return total;
}

}  // namespace bayesrisk
