// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "../oracle.hpp"
#include "bayesrisk/adversarial.hpp"
#include "bayesrisk/appropriateness.hpp"
#include "bayesrisk/cost_model.hpp"
#include "bayesrisk/estimators.hpp"
#include "bayesrisk/scenario.hpp"

namespace {

using namespace bayesrisk;
using Clock = std::chrono::steady_clock;

constexpr double kCoinResolution = 1e-3;
constexpr double kCoinLow = 0.499;
constexpr double kCoinHigh = 0.5;
constexpr double kCoinSeconds = 1.0;

constexpr double kThreeStateResolution = 1e-2;
constexpr double kThreeStateFloor = 0.49;
constexpr double kThreeStateWitnessL1 = 0.02;
constexpr double kThreeStateSeconds = 5.0;

constexpr double kTwoCoinWorstFloor = 0.9;
constexpr double kZeroClassTolerance = 1e-9;
constexpr double kZeroClassWorstFloor = 0.99;

constexpr int kSoundnessDraws = 1000;
constexpr int kOptimalityDraws = 100;
constexpr std::size_t kGridPoints = 10000;
constexpr double kStationarityTolerance = 1e-9;
constexpr double kAbsResidualFloor = 0.5;
constexpr double kQuarticResidual = 0.75;
constexpr std::size_t kResidualSamples = 200;

constexpr int kNormalizationMatrices = 200;
constexpr int kNormalizationDraws = 200;

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Gate {
public:
    void run(int id, const std::string& title, const std::function<Outcome()>& body) {
        Outcome o;
        try {
            o = body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        failures_ += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << id << "  " << title;
        if (!o.detail.empty()) {
            std::cout << "  [" << o.detail << "]";
        }
        std::cout << std::endl;
    }

    int failures() const { return failures_; }

private:
    int failures_ = 0;
};

struct Checks {
    Outcome out;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            out.pass = false;
            detail << "failed: " << what << "; ";
        }
    }

    Outcome done() {
        out.detail += detail.str();
        return out;
    }
};

CostMatrix normalized(const oracle::Matrix& rows) { return normalize_cost(validate_cost(rows)); }

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

const oracle::Matrix kTwoCoin = {{0, 0, 1, 1}, {0, 0, 2, 1}, {1, 2, 0, 1}, {1, 1, 1, 0}};

Outcome coin_game() {
    Checks c;
    const auto cost = normalized({{-1, 2}, {1, -1}});
    SearchConfig cfg;
    cfg.resolution = kCoinResolution;
    const auto start = Clock::now();
    const auto w = worst_case(Estimator::mode, cost, StateSpace({"H", "T"}), cfg);
    const double elapsed = seconds_since(start);
    const auto bound = mode_error_lower_bound(cost);
    c.require(!w.value.is_unbounded() && w.value.value() >= kCoinLow &&
                  w.value.value() <= kCoinHigh,
              "worst value in range");
    c.require(bound.value == RelativeError::finite(0.5), "lower bound exactly 0.5");
    c.require(elapsed < kCoinSeconds, "runtime");
    c.detail << "worst=" << w.value.to_string() << " bound=" << bound.value.to_string()
             << " t=" << num(elapsed) << "s; ";
    return c.done();
}

Outcome three_state_abs() {
    Checks c;
    const auto space = StateSpace::on_line({0, 1, 2});
    const auto cost = normalize_cost(distance_to_matrix(DistanceCost::absolute(), space));
    const auto bound = mode_error_lower_bound(cost);
    c.require(bound.value == RelativeError::finite(0.5), "lower bound exactly 0.5");
    c.require(bound.construction == ModeConstruction::unequal_positive_s_optimal,
              "s-optimal unequal-positive construction");
    c.require(bound.states == std::vector<StateIndex>{1, 0, 2}, "triple (s=1, t=0, u=2)");

    SearchConfig cfg;
    cfg.resolution = kThreeStateResolution;
    const auto start = Clock::now();
    const auto w = worst_case(Estimator::mode, cost, space, cfg);
    const double elapsed = seconds_since(start);
    double l1 = 0.0;
    for (double p : w.witness.probs()) {
        l1 += std::abs(p - 1.0 / 3.0);
    }
    c.require(!w.value.is_unbounded() && w.value.value() >= kThreeStateFloor, "worst >= 0.49");
    c.require(l1 <= kThreeStateWitnessL1, "witness near uniform");
    c.require(elapsed < kThreeStateSeconds, "runtime");
    c.detail << "bound=" << bound.value.to_string() << " worst=" << w.value.to_string()
             << " l1=" << num(l1) << " t=" << num(elapsed) << "s; ";
    return c.done();
}

Outcome two_coin() {
    Checks c;
    const auto cost = normalized(kTwoCoin);
    const auto verdict = check_mode_appropriate(cost);
    bool flagged = false;
    for (const auto& v : verdict.violations) {
        if (v.condition == ModeCondition::equivalence && v.states.size() == 3) {
            const bool pair = (v.states[0] == 0 && v.states[1] == 1) ||
                              (v.states[0] == 1 && v.states[1] == 0);
            flagged = flagged || (pair && v.states[2] == 2);
        }
    }
    c.require(flagged, "equivalence violation on HH, HT against TH");

    const auto bound = mode_error_lower_bound(cost);
    c.require(bound.value == RelativeError::finite(1.0), "lower bound exactly 1.0");
    c.require(bound.construction == ModeConstruction::equivalence, "equivalence construction");

    const auto w = worst_case(Estimator::mode, cost, StateSpace({"HH", "HT", "TH", "TT"}));
    c.require(w.value.value() >= kTwoCoinWorstFloor, "worst >= 0.9");

    const std::vector<double> probs = {0.39, 0.40, 0.21, 0.0};
    const Posterior p(probs);
    const auto mode = mode_estimate(p);
    const auto bayes = bayes_estimate(p, cost);
    const auto err = relative_error(mode, p, cost);
    c.require(mode == 1, "mode is HT");
    c.require(bayes.state == 0 && oracle::argmin_cost(cost.rows(), probs) == 0, "bayes is HH");
    c.require(err == RelativeError::finite(1.0), "relative error exactly 1.0");
    c.detail << "bound=" << bound.value.to_string() << " worst=" << w.value.to_string()
             << " err=" << err.to_string() << "; ";
    return c.done();
}

Outcome zero_class() {
    Checks c;
    const auto scenario = builtin_scenario("zero_class");
    c.require(scenario.has_value(), "built-in exists");
    if (!scenario) {
        return c.done();
    }
    const auto& rows = std::get<MatrixCost>(scenario->cost).rows;
    const auto cost = normalized(rows);
    const Posterior p({0.333, 0.333, 0.334});
    const auto err = relative_error(mode_estimate(p), p, cost);
    const double expected = 0.666 / 0.334 - 1.0;
    c.require(!err.is_unbounded() && std::abs(err.value() - expected) <= kZeroClassTolerance,
              "relative error matches 0.666/0.334 - 1");
    const auto w = worst_case(Estimator::mode, cost, StateSpace(scenario->states));
    c.require(w.value.value() >= kZeroClassWorstFloor, "worst >= 0.99");
    c.detail << "err=" << err.to_string() << " expected=" << num(expected)
             << " worst=" << w.value.to_string() << "; ";
    return c.done();
}

Outcome zero_one_soundness() {
    Checks c;
    std::mt19937_64 rng(2024);
    int mismatches = 0;
    int nonzero = 0;
    for (std::size_t n = 2; n <= 6; ++n) {
        const auto rows = oracle::zero_one(n);
        const auto cost = normalized(rows);
        for (int k = 0; k < kSoundnessDraws; ++k) {
            const auto probs = oracle::random_posterior(rng, n);
            const Posterior p(probs);
            const auto mode = mode_estimate(p);
            mismatches += mode != bayes_estimate(p, cost).state ||
                          mode != oracle::argmin_cost(rows, probs);
            nonzero += relative_error(mode, p, cost) != RelativeError::finite(0.0);
        }
    }
    c.require(mismatches == 0, "mode equals bayes");
    c.require(nonzero == 0, "relative error zero");
    c.detail << "cases=" << 5 * kSoundnessDraws << " mismatches=" << mismatches
             << " nonzero=" << nonzero << "; ";
    return c.done();
}

std::vector<double> random_positions(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> pos(-1.0, 1.0);
    std::vector<double> x(5);
    for (auto& v : x) {
        v = pos(rng);
    }
    return x;
}

Outcome mean_optimality() {
    Checks c;
    std::mt19937_64 rng(2025);
    const auto sq = DistanceCost::squared();
    const double step = 2.0 / static_cast<double>(kGridPoints - 1);
    double worst_gap = 0.0;
    double worst_stationarity = 0.0;
    for (int k = 0; k < kOptimalityDraws; ++k) {
        const auto space = StateSpace::on_line(random_positions(rng));
        const Posterior p(oracle::random_posterior(rng, 5));
        const auto& x = space.embedding();
        const auto& probs = p.probs();
        const double minimizer = oracle::grid_minimizer(
            [&](double e) {
                long double total = 0.0L;
                for (std::size_t i = 0; i < x.size(); ++i) {
                    const long double d = e - x[i];
                    total += probs[i] * d * d;
                }
                return static_cast<double>(total);
            },
            -1.0, 1.0, kGridPoints);
        const double mean = mean_estimate(p, space);
        worst_gap = std::max(worst_gap, std::abs(minimizer - mean));
        worst_stationarity =
            std::max(worst_stationarity, std::abs(stationarity_residual(mean, p, space, sq)));
    }
    c.require(worst_gap <= step, "grid minimizer within one step of mean");
    c.require(worst_stationarity < kStationarityTolerance, "stationarity residual");

    double sq_residual = 0.0;
    for (double x : distance_grid(2.0, kResidualSamples)) {
        for (int n : kMeanSplitFactors) {
            sq_residual = std::max(sq_residual, mean_balance_residual(sq, x, n));
        }
    }
    c.require(sq_residual == 0.0, "quadratic balance residual zero");

    double abs_residual = INFINITY;
    for (double x : distance_grid(1.0, kResidualSamples)) {
        abs_residual = std::min(abs_residual, mean_balance_residual(DistanceCost::absolute(), x, 2));
    }
    c.require(abs_residual >= kAbsResidualFloor, "linear balance residual >= 0.5 at n=2");

    const double quartic = mean_balance_residual(DistanceCost::power(4), 1.0, 2);
    c.require(quartic == kQuarticResidual, "quartic residual 0.75");
    c.detail << "gap=" << num(worst_gap) << " step=" << num(step)
             << " stat=" << num(worst_stationarity) << " sq=" << num(sq_residual)
             << " abs_min=" << num(abs_residual) << " quartic=" << num(quartic) << "; ";
    return c.done();
}

Outcome median_optimality() {
    Checks c;
    std::mt19937_64 rng(2026);
    const double step = 2.0 / static_cast<double>(kGridPoints - 1);
    double worst_gap = 0.0;
    for (int k = 0; k < kOptimalityDraws; ++k) {
        const auto space = StateSpace::on_line(random_positions(rng));
        const Posterior p(oracle::random_posterior(rng, 5));
        const auto& x = space.embedding();
        const auto& probs = p.probs();
        const double minimizer = oracle::grid_minimizer(
            [&](double e) {
                long double total = 0.0L;
                for (std::size_t i = 0; i < x.size(); ++i) {
                    total += probs[i] * std::abs(static_cast<long double>(e) - x[i]);
                }
                return static_cast<double>(total);
            },
            -1.0, 1.0, kGridPoints);
        const double median = space.position(median_estimate(p, space));
        worst_gap = std::max(worst_gap, std::abs(minimizer - median));
    }
    c.require(worst_gap <= step, "grid minimizer within one step of median");
    const bool lin = check_median_appropriate(DistanceCost::absolute(), 2.0, kResidualSamples).appropriate;
    const bool lin3 = check_median_appropriate(DistanceCost::absolute(3.0), 2.0, kResidualSamples).appropriate;
    const bool quad = check_median_appropriate(DistanceCost::squared(), 2.0, kResidualSamples).appropriate;
    c.require(lin, "accepts d");
    c.require(lin3, "accepts 3d");
    c.require(!quad, "rejects d^2");
    c.detail << "gap=" << num(worst_gap) << " step=" << num(step) << "; ";
    return c.done();
}

Outcome normalization_equivalence() {
    Checks c;
    std::mt19937_64 rng(2027);
    int mismatches = 0;
    int oracle_mismatches = 0;
    for (int m = 0; m < kNormalizationMatrices; ++m) {
        const std::size_t n = 1 + static_cast<std::size_t>(m % 5);
        const auto rows = oracle::random_valid_cost(rng, n);
        const auto raw = validate_cost(rows);
        const auto norm = normalize_cost(raw);
        for (int k = 0; k < kNormalizationDraws; ++k) {
            const auto probs = oracle::random_posterior(rng, n);
            const Posterior p(probs);
            const auto before = bayes_estimate(p, raw).state;
            mismatches += before != bayes_estimate(p, norm).state;
            oracle_mismatches += before != oracle::argmin_cost(rows, probs);
        }
    }
    c.require(mismatches == 0, "argmin unchanged by normalization");
    c.require(oracle_mismatches == 0, "argmin matches brute force");
    c.detail << "cases=" << kNormalizationMatrices * kNormalizationDraws
             << " mismatches=" << mismatches << " oracle_mismatches=" << oracle_mismatches
             << "; ";
    return c.done();
}

std::string capture(const std::string& cmd, int& status) {
    FILE* pipe = popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        status = -1;
        return {};
    }
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        out.append(buf.data(), n);
    }
    status = pclose(pipe);
    return out;
}

Outcome determinism() {
    Checks c;
    for (const auto& name : builtin_names()) {
        const std::string cmd =
            std::string(BAYESRISK_CLI_PATH) + " builtin " + name + " --format json";
        int s1 = 0;
        int s2 = 0;
        const auto first = capture(cmd, s1);
        const auto second = capture(cmd, s2);
        c.require(s1 == 0 && s2 == 0 && !first.empty(), name + " runs");
        c.require(first == second, name + " byte-identical");
        c.detail << name << "=" << first.size() << "B ";
    }
    return c.done();
}

}  // namespace

int main() {
    Gate gate;
    gate.run(1, "coin game worst case and lower bound", coin_game);
    gate.run(2, "three-state absolute distance", three_state_abs);
    gate.run(3, "two-coin equivalence violation", two_coin);
    gate.run(4, "zero-class construction", zero_class);
    gate.run(5, "mode soundness under 0-1 cost", zero_one_soundness);
    gate.run(6, "mean optimality for quadratic cost", mean_optimality);
    gate.run(7, "median optimality for absolute cost", median_optimality);
    gate.run(8, "normalization preserves the Bayes estimate", normalization_equivalence);
    gate.run(9, "deterministic built-in reports", determinism);
    std::cout << (gate.failures() == 0 ? "all criteria passed" : "some criteria failed")
              << std::endl;
    return gate.failures() == 0 ? 0 : 1;
}
