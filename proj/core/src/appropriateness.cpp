#include "bayesrisk/appropriateness.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "bayesrisk/error.hpp"

namespace bayesrisk {

std::string_view to_string(ModeClass c) {
    switch (c) {
    case ModeClass::zero_one:
        return "zero_one";
    case ModeClass::trivial:
        return "trivial";
    case ModeClass::inappropriate:
        return "inappropriate";
    }
    return "?";
}

std::string_view to_string(ModeCondition c) {
    switch (c) {
    case ModeCondition::asymmetry:
        return "asymmetry";
    case ModeCondition::equivalence:
        return "equivalence";
    case ModeCondition::unequal_positive:
        return "unequal_positive";
    case ModeCondition::zero_class:
        return "zero_class";
    }
    return "?";
}

std::string_view to_string(ModeConstruction c) {
    switch (c) {
    case ModeConstruction::none:
        return "none";
    case ModeConstruction::asymmetry:
        return "asymmetry";
    case ModeConstruction::equivalence:
        return "equivalence";
    case ModeConstruction::unequal_positive_s_optimal:
        return "unequal_positive_s_optimal";
    case ModeConstruction::unequal_positive_t_optimal:
        return "unequal_positive_t_optimal";
    case ModeConstruction::zero_class:
        return "zero_class";
    }
    return "?";
}

ModeCondition condition_of(ModeConstruction c) {
    switch (c) {
    case ModeConstruction::asymmetry:
        return ModeCondition::asymmetry;
    case ModeConstruction::equivalence:
        return ModeCondition::equivalence;
    case ModeConstruction::unequal_positive_s_optimal:
    case ModeConstruction::unequal_positive_t_optimal:
        return ModeCondition::unequal_positive;
    case ModeConstruction::zero_class:
        return ModeCondition::zero_class;
    case ModeConstruction::none:
        break;
    }
    throw std::invalid_argument("construction 'none' has no condition");
}

namespace {

bool is_zero(double v) { return v <= kEntryTolerance; }
bool same(double a, double b) { return std::abs(a - b) <= kEntryTolerance; }
bool less(double a, double b) { return a < b - kEntryTolerance; }

/// numerator / denominator - 1, unbounded on a zero denominator.
RelativeError ratio_excess(double numerator, double denominator) {
    if (denominator == 0.0) {
        return RelativeError::unbounded();
    }
    return RelativeError::finite(numerator / denominator - 1.0);
}

Posterior support_witness(std::size_t n, const std::vector<std::pair<StateIndex, double>>& mass) {
    std::vector<double> probs(n, 0.0);
    for (auto [s, p] : mass) {
        probs[s] = p;
    }
    return Posterior(std::move(probs));
}

/// Larger bound first; then earlier construction kind; then smaller tuple.
bool better(const ModeLowerBound& a, const ModeLowerBound& b) {
    if (a.value != b.value) {
        return a.value > b.value;
    }
    if (a.construction != b.construction) {
        return a.construction < b.construction;
    }
    return a.states < b.states;
}

std::optional<ModeLowerBound> best_of(const std::vector<ModeLowerBound>& all,
                                      std::optional<ModeCondition> condition) {
    std::optional<ModeLowerBound> best;
    for (const auto& c : all) {
        if (condition && condition_of(c.construction) != *condition) {
            continue;
        }
        if (!best || better(c, *best)) {
            best = c;
        }
    }
    return best;
}

bool triple_symmetric(const CostMatrix& d, StateIndex a, StateIndex b, StateIndex c) {
    return same(d(a, b), d(b, a)) && same(d(a, c), d(c, a)) && same(d(b, c), d(c, b));
}

}  // namespace

std::vector<ModeLowerBound> mode_constructions(const CostMatrix& d, double epsilon) {
    require_normalized(d);
    const std::size_t n = d.size();
    std::vector<ModeLowerBound> out;

    const double pair_hi = (1.0 + epsilon) / 2.0;
    const double pair_lo = (1.0 - epsilon) / 2.0;
    const double triple_lo = (1.0 - epsilon) / 3.0;
    const double triple_hi = 1.0 - 2.0 * triple_lo;

    // Two-point support: the mode s pays delta(s,t) while t would pay
    // delta(t,s); the ratio is approached as P(t) rises to P(s).
    for (StateIndex s = 0; s < n; ++s) {
        for (StateIndex t = 0; t < n; ++t) {
            if (s == t || !less(d(t, s), d(s, t))) {
                continue;
            }
            out.push_back({ratio_excess(d(s, t), d(t, s)), ModeConstruction::asymmetry, {s, t},
                           support_witness(n, {{s, pair_hi}, {t, pair_lo}})});
        }
    }

    // s and u are cost-equivalent yet t tells them apart.
    for (StateIndex s = 0; s < n; ++s) {
        for (StateIndex u = 0; u < n; ++u) {
            if (s == u || !is_zero(d(s, u)) || !is_zero(d(u, s))) {
                continue;
            }
            for (StateIndex t = 0; t < n; ++t) {
                if (t == s || t == u || !less(d(u, t), d(s, t))) {
                    continue;
                }
                out.push_back({ratio_excess(d(s, t), d(u, t)), ModeConstruction::equivalence,
                               {s, u, t},
                               support_witness(n, {{s, 1.0 - epsilon}, {t, epsilon}})});
            }
        }
    }

    for (StateIndex s = 0; s < n; ++s) {
        for (StateIndex t = 0; t < n; ++t) {
            for (StateIndex u = 0; u < n; ++u) {
                if (s == t || t == u || s == u || !triple_symmetric(d, s, t, u)) {
                    continue;
                }
                auto witness = [&] {
                    return support_witness(n, {{s, triple_lo}, {t, triple_lo}, {u, triple_hi}});
                };

                // Two unequal positive costs sharing state t.
                if (!is_zero(d(s, t)) && !is_zero(d(t, u)) && less(d(s, t), d(t, u))) {
                    const double mode_cost = d(s, u) + d(u, t);
                    if (less(d(s, u), d(t, u))) {
                        out.push_back({ratio_excess(mode_cost, d(s, u) + d(s, t)),
                                       ModeConstruction::unequal_positive_s_optimal,
                                       {s, t, u}, witness()});
                    } else {
                        out.push_back({ratio_excess(mode_cost, d(s, t) + d(u, t)),
                                       ModeConstruction::unequal_positive_t_optimal,
                                       {s, t, u}, witness()});
                    }
                }

                // Zero pair {s, t} at unit cost from u: (P(s) + P(t)) / P(u) - 1 -> 1.
                if (s < t && is_zero(d(s, t)) && same(d(s, u), 1.0) && same(d(t, u), 1.0) &&
                    same(d(u, s), 1.0) && same(d(u, t), 1.0)) {
                    out.push_back({RelativeError::finite(1.0), ModeConstruction::zero_class,
                                   {s, t, u}, witness()});
                }
            }
        }
    }
    return out;
}

ModeLowerBound mode_error_lower_bound(const CostMatrix& cost, double epsilon) {
    auto all = mode_constructions(cost, epsilon);
    if (auto best = best_of(all, std::nullopt)) {
        return *best;
    }
    return {RelativeError::finite(0.0), ModeConstruction::none, {}, std::nullopt};
}

ModeVerdict check_mode_appropriate(const CostMatrix& d) {
    require_normalized(d);
    const std::size_t n = d.size();
    ModeVerdict verdict;

    if (d.trivial()) {
        verdict.appropriate = true;
        verdict.classification = ModeClass::trivial;
        return verdict;
    }

    bool asymmetric = false;
    bool inequivalent = false;
    bool has_zero = false;
    double lowest_positive = 2.0;
    double highest_positive = 0.0;
    for (StateIndex s = 0; s < n; ++s) {
        for (StateIndex u = 0; u < n; ++u) {
            if (s == u) {
                continue;
            }
            const double v = d(s, u);
            if (!same(v, d(u, s))) {
                asymmetric = true;
            }
            if (is_zero(v)) {
                has_zero = true;
                for (StateIndex k = 0; k < n; ++k) {
                    if (!same(d(s, k), d(u, k)) || !same(d(k, s), d(k, u))) {
                        inequivalent = true;
                    }
                }
            } else {
                lowest_positive = std::min(lowest_positive, v);
                highest_positive = std::max(highest_positive, v);
            }
        }
    }
    const bool has_positive = highest_positive > 0.0;
    const bool unequal = has_positive && less(lowest_positive, highest_positive);

    if (!asymmetric && !inequivalent && !unequal && !has_zero) {
        verdict.appropriate = true;
        verdict.classification = ModeClass::zero_one;
        return verdict;
    }

    const auto all = mode_constructions(d);
    auto record = [&](ModeCondition condition) {
        auto best = best_of(all, condition);
        if (!best) {
            best = best_of(all, std::nullopt);
        }
        if (!best) {
            throw std::logic_error("inappropriate cost without a lower-bound construction");
        }
        verdict.violations.push_back({condition, best->states, best->value});
    };
    if (asymmetric) {
        record(ModeCondition::asymmetry);
    }
    if (inequivalent) {
        record(ModeCondition::equivalence);
    }
    if (unequal) {
        record(ModeCondition::unequal_positive);
    }
    if (has_zero && has_positive) {
        record(ModeCondition::zero_class);
    }
    verdict.classification = ModeClass::inappropriate;
    return verdict;
}

double mean_balance_residual(const DistanceCost& f, double x, int n) {
    const double scaled = f.derivative(n * x);
    return std::abs(n * f.derivative(x) - scaled) / std::max(1.0, std::abs(scaled));
}

std::vector<double> distance_grid(double diameter, std::size_t samples) {
    if (!(diameter > 0.0) || samples == 0) {
        throw InvalidArgument("distance grid needs a positive diameter and at least one sample");
    }
    if (samples == 1) {
        return {diameter};
    }
    std::vector<double> grid(samples);
    for (std::size_t k = 0; k < samples; ++k) {
        const double exponent =
            -4.0 + 4.0 * static_cast<double>(k) / static_cast<double>(samples - 1);
        grid[k] = diameter * std::pow(10.0, exponent);
    }
    grid.back() = diameter;
    return grid;
}

namespace {

double tolerance_for(const DistanceCost& f) {
    switch (f.derivative_kind()) {
    case DistanceCost::DerivativeKind::closed_form:
        return kClosedFormResidualTolerance;
    case DistanceCost::DerivativeKind::numeric:
        return kNumericResidualTolerance;
    case DistanceCost::DerivativeKind::unavailable:
        break;
    }
    throw DerivativeUnavailable();
}

}  // namespace

DistanceVerdict check_mean_appropriate(const DistanceCost& f, double diameter,
                                       std::size_t samples) {
    DistanceVerdict verdict;
    verdict.tolerance = tolerance_for(f);
    // x up to diameter / 2 so that n x stays in range for n = 2
    for (double x : distance_grid(diameter / 2.0, samples)) {
        for (int n : kMeanSplitFactors) {
            if (n * x > diameter * (1.0 + 1e-12)) {
                continue;
            }
            const double r = mean_balance_residual(f, x, n);
            if (verdict.worst_n == 0 || r > verdict.max_residual) {
                verdict.max_residual = r;
                verdict.worst_x = x;
                verdict.worst_n = n;
            }
        }
    }
    verdict.appropriate = verdict.max_residual < verdict.tolerance;
    return verdict;
}

DistanceVerdict check_median_appropriate(const DistanceCost& f, double diameter,
                                         std::size_t samples) {
    DistanceVerdict verdict;
    verdict.tolerance = tolerance_for(f);
    const auto grid = distance_grid(diameter, samples);
    const double base = f.derivative(grid.front());
    verdict.worst_x = grid.front();
    for (double x : grid) {
        const double r = std::abs(f.derivative(x) - base) / std::max(1.0, std::abs(base));
        if (r > verdict.max_residual) {
            verdict.max_residual = r;
            verdict.worst_x = x;
        }
    }
    verdict.appropriate = verdict.max_residual < verdict.tolerance;
    return verdict;
}

}  // namespace bayesrisk
