#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "bayesrisk/cost_model.hpp"
#include "bayesrisk/relative_error.hpp"

namespace bayesrisk {

/// Normalized entries closer than this are treated as equal.
inline constexpr double kEntryTolerance = 1e-9;

/// Mean/median functional checks pass below these residuals.
inline constexpr double kClosedFormResidualTolerance = 1e-6;
inline constexpr double kNumericResidualTolerance = 1e-3;

/// Default epsilon for the limit-construction witnesses.
inline constexpr double kDefaultEpsilon = 1e-4;

enum class ModeClass { zero_one, trivial, inappropriate };

/// Necessary conditions for mode estimation, in the order they are checked.
enum class ModeCondition { asymmetry, equivalence, unequal_positive, zero_class };

std::string_view to_string(ModeClass c);
std::string_view to_string(ModeCondition c);

struct ModeViolation {
    ModeCondition condition;
    /// States of the instance achieving `lower_bound`, in the order of the
    /// construction that produced it (see ModeConstruction).
    std::vector<StateIndex> states;
    /// Strictly positive lower bound on the relative error of mode estimation.
    RelativeError lower_bound;
};

struct ModeVerdict {
    bool appropriate = false;
    ModeClass classification = ModeClass::inappropriate;
    /// At most one record per condition, in check order.
    std::vector<ModeViolation> violations;
};

/**
 * Classifies a normalized cost for mode estimation.
 *
 * Mode is appropriate only for the 0-1 cost (every off-diagonal entry equal
 * and positive) and for the trivial all-zero cost. Anything else fails at
 * least one of symmetry, zero-cost equivalence, equal positive costs, or the
 * zero-class rule, and each failed condition is reported with the strongest
 * lower bound found for it. Throws NotNormalized.
 */
ModeVerdict check_mode_appropriate(const CostMatrix& cost);

/// Adversarial posterior families whose limits bound mode's relative error.
enum class ModeConstruction {
    none,
    /// two states s, t; s is the mode, P(t) rises to P(s)
    asymmetry,
    /// states (s, u, t): delta(s,u) = delta(u,s) = 0, delta(s,t) > delta(u,t);
    /// s carries nearly all mass, t the rest
    equivalence,
    /// states (s, t, u) with 0 < delta(s,t) < delta(t,u) and
    /// delta(s,u) < delta(t,u); equal masses, u the mode
    unequal_positive_s_optimal,
    /// as above with delta(s,u) >= delta(t,u)
    unequal_positive_t_optimal,
    /// states (s, t, u): delta(s,t) = 0, unit costs between {s,t} and u;
    /// equal masses, u the mode
    zero_class,
};

std::string_view to_string(ModeConstruction c);
ModeCondition condition_of(ModeConstruction c);

struct ModeLowerBound {
    RelativeError value;
    ModeConstruction construction = ModeConstruction::none;
    std::vector<StateIndex> states;
    /// Value of the construction at finite epsilon; the lower bound is its
    /// limit as epsilon goes to zero.
    std::optional<Posterior> witness;
};

/**
 * Strongest closed-form lower bound on mode's relative error over every pair
 * and triple of states. Ties prefer the earlier construction kind, then the
 * lexicographically smallest state tuple. Throws NotNormalized.
 */
ModeLowerBound mode_error_lower_bound(const CostMatrix& cost, double epsilon = kDefaultEpsilon);

/// Every applicable construction instance, unsorted. Exposed for testing.
std::vector<ModeLowerBound> mode_constructions(const CostMatrix& cost,
                                               double epsilon = kDefaultEpsilon);

struct DistanceVerdict {
    bool appropriate = false;
    double max_residual = 0.0;
    double tolerance = 0.0;
    /// Where the worst residual occurred; `worst_n` is 0 for median checks.
    double worst_x = 0.0;
    int worst_n = 0;
};

/// Mass splits used when sampling the mean balance equation.
inline constexpr int kMeanSplitFactors[] = {2, 3, 5, 10};

/// |n f'(x) - f'(n x)| / max(1, |f'(n x)|)
double mean_balance_residual(const DistanceCost& f, double x, int n);

/// x values in (0, diameter], log-spaced over four decades.
std::vector<double> distance_grid(double diameter, std::size_t samples);

/// Mean estimation minimizes f(|s - t|) only if n f'(x) = f'(n x) for all x.
/// Throws DerivativeUnavailable, InvalidArgument.
DistanceVerdict check_mean_appropriate(const DistanceCost& f, double diameter,
                                       std::size_t samples);

/// Median estimation minimizes f(|s - t|) only if f' is constant.
DistanceVerdict check_median_appropriate(const DistanceCost& f, double diameter,
                                         std::size_t samples);

}  // namespace bayesrisk
