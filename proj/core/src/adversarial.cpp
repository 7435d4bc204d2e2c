#include "bayesrisk/adversarial.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <thread>
#include <vector>

#include "bayesrisk/error.hpp"
#include "bayesrisk/estimators.hpp"

namespace bayesrisk {

std::string RelativeError::to_string() const {
    if (unbounded_) {
        return "unbounded";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", value_);
    return buf;
}

std::string_view to_string(Estimator e) {
    switch (e) {
    case Estimator::mode:
        return "mode";
    case Estimator::mean_snapped:
        return "mean";
    case Estimator::median:
        return "median";
    case Estimator::bayes:
        return "bayes";
    }
    return "?";
}

std::optional<Estimator> parse_estimator(std::string_view name) {
    for (auto e : {Estimator::mode, Estimator::mean_snapped, Estimator::median, Estimator::bayes}) {
        if (to_string(e) == name) {
            return e;
        }
    }
    return std::nullopt;
}

std::string_view to_string(SearchMethod m) {
    switch (m) {
    case SearchMethod::structured_pair:
        return "structured_pair";
    case SearchMethod::structured_triple:
        return "structured_triple";
    case SearchMethod::structured_support:
        return "structured_support";
    case SearchMethod::grid:
        return "grid";
    case SearchMethod::refined:
        return "refined";
    }
    return "?";
}

StateIndex estimate_state(Estimator estimator, const Posterior& p, const StateSpace& space,
                          const CostMatrix& cost) {
    switch (estimator) {
    case Estimator::mode:
        return mode_estimate(p);
    case Estimator::mean_snapped:
        return snap_to_state(mean_estimate(p, space), space);
    case Estimator::median:
        return median_estimate(p, space);
    case Estimator::bayes:
        return bayes_estimate(p, cost).state;
    }
    return 0;
}

RelativeError relative_error(StateIndex estimate, const Posterior& p, const CostMatrix& cost) {
    require_normalized(cost);
    const double optimum = bayes_estimate(p, cost).cost;
    const double incurred = expected_cost(estimate, p, cost);
    if (incurred <= optimum + kCostTieTolerance * std::max(1.0, std::abs(optimum))) {
        return RelativeError::finite(0.0);
    }
    if (optimum == 0.0) {
        return RelativeError::unbounded();
    }
    return RelativeError::finite(incurred / optimum - 1.0);
}

void SearchConfig::validate() const {
    if (!(resolution > 0.0 && resolution <= 0.5)) {
        throw InvalidArgument("search resolution must lie in (0, 0.5]");
    }
    if (support_cap < 2) {
        throw InvalidArgument("search support cap must be at least 2");
    }
    if (!(epsilon > 0.0 && epsilon < 0.5)) {
        throw InvalidArgument("search epsilon must lie in (0, 0.5)");
    }
}

namespace {

struct Candidate {
    RelativeError value;
    Posterior witness;
    SearchMethod method;
    /// Designated mode of a near-tie family, used for the epsilon -> 0 limit.
    std::optional<StateIndex> tie_mode;
    /// Support of the near-tie family.
    std::vector<StateIndex> support;
};

class Searcher {
public:
    Searcher(Estimator estimator, const CostMatrix& cost, const StateSpace& space,
             const SearchConfig& config)
        : estimator_(estimator), cost_(cost), space_(space), config_(config),
          n_(cost.size()),
          steps_(static_cast<std::size_t>(std::max(1.0, std::round(1.0 / config.resolution)))) {}

    RelativeError evaluate(const Posterior& p) const {
        return relative_error(estimate_state(estimator_, p, space_, cost_), p, cost_);
    }

    /// Strictly larger values replace the incumbent.
    void offer(std::vector<double> probs, SearchMethod method,
               std::optional<StateIndex> tie_mode = std::nullopt,
               std::vector<StateIndex> support = {}) {
        Posterior p(probs);
        const auto value = evaluate(p);
        if (!best_ || value > best_->value) {
            best_ = Candidate{value, std::move(p), method, tie_mode, std::move(support)};
        }
    }

    void structured() {
        const double eps = config_.epsilon;
        for (StateIndex i = 0; i < n_; ++i) {
            for (StateIndex j = i + 1; j < n_; ++j) {
                for (std::size_t k = 1; k < steps_; ++k) {
                    const double q = static_cast<double>(k) / static_cast<double>(steps_);
                    offer(pair(i, q, j, 1.0 - q), SearchMethod::structured_pair);
                }
                for (auto [hi, lo] : {std::pair{i, j}, std::pair{j, i}}) {
                    offer(pair(hi, (1.0 + eps) / 2.0, lo, (1.0 - eps) / 2.0),
                          SearchMethod::structured_pair, hi, {std::min(i, j), std::max(i, j)});
                    offer(pair(hi, 1.0 - eps, lo, eps), SearchMethod::structured_pair);
                }
            }
        }
        const std::size_t cap = std::min(config_.support_cap, n_);
        for (std::size_t k = 3; k <= cap; ++k) {
            for_each_subset(k, [&](const std::vector<StateIndex>& support) {
                const double low = (1.0 - eps) / static_cast<double>(k);
                const double high = 1.0 - static_cast<double>(k - 1) * low;
                for (StateIndex mode : support) {
                    std::vector<double> probs(n_, 0.0);
                    for (StateIndex s : support) {
                        probs[s] = s == mode ? high : low;
                    }
                    offer(std::move(probs),
                          k == 3 ? SearchMethod::structured_triple
                                 : SearchMethod::structured_support,
                          mode, support);
                }
            });
        }
    }

    void grid() {
        if (n_ == 1) {
            offer({1.0}, SearchMethod::grid);
            return;
        }
        // One slot per value of the first coordinate, merged in order so
        // the result does not depend on scheduling.
        std::vector<std::optional<Candidate>> slots(steps_ + 1);
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (std::size_t first = next++; first <= steps_; first = next++) {
                Searcher local(estimator_, cost_, space_, config_);
                std::vector<std::size_t> counts(n_, 0);
                counts[0] = first;
                local.compositions(counts, 1, steps_ - first);
                slots[first] = std::move(local.best_);
            }
        };
        const unsigned threads =
            std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(),
                                            static_cast<unsigned>(steps_ + 1)));
        std::vector<std::thread> pool;
        for (unsigned t = 1; t < threads; ++t) {
            pool.emplace_back(work);
        }
        work();
        for (auto& th : pool) {
            th.join();
        }
        for (auto& slot : slots) {
            if (slot && (!best_ || slot->value > best_->value)) {
                best_ = std::move(slot);
            }
        }
    }

    void refine() {
        if (!best_ || best_->value.is_unbounded() || n_ < 2) {
            return;
        }
        double step = config_.resolution / 2.0;
        const std::size_t max_moves = 64 * n_ * n_;
        for (std::size_t round = 0; round < config_.refine_iterations; ++round, step /= 2.0) {
            for (std::size_t moves = 0; moves < max_moves; ++moves) {
                if (!climb(step)) {
                    break;
                }
            }
        }
    }

    WorstCase result(bool grid_skipped) const {
        const Posterior& witness = best_->witness;
        WorstCase out{best_->value,
                      witness,
                      estimate_state(estimator_, witness, space_, cost_),
                      bayes_estimate(witness, cost_).state,
                      best_->method,
                      std::nullopt,
                      std::nullopt,
                      grid_skipped};
        if (estimator_ == Estimator::mean_snapped) {
            out.raw_mean = mean_estimate(witness, space_);
        }
        if (estimator_ == Estimator::mode && best_->tie_mode) {
            out.limit = tie_limit(*best_->tie_mode, best_->support);
        }
        return out;
    }

private:
    std::vector<double> pair(StateIndex a, double pa, StateIndex b, double pb) const {
        std::vector<double> probs(n_, 0.0);
        probs[a] = pa;
        probs[b] = pb;
        return probs;
    }

    template <typename Fn>
    void for_each_subset(std::size_t k, Fn&& fn) const {
        std::vector<StateIndex> subset(k);
        for (std::size_t i = 0; i < k; ++i) {
            subset[i] = i;
        }
        while (true) {
            fn(subset);
            std::size_t i = k;
            while (i > 0 && subset[i - 1] == n_ - k + (i - 1)) {
                --i;
            }
            if (i == 0) {
                return;
            }
            ++subset[i - 1];
            for (std::size_t j = i; j < k; ++j) {
                subset[j] = subset[j - 1] + 1;
            }
        }
    }

    void compositions(std::vector<std::size_t>& counts, std::size_t index, std::size_t remaining) {
        if (index + 1 == n_) {
            counts[index] = remaining;
            std::vector<double> probs(n_);
            for (std::size_t s = 0; s < n_; ++s) {
                probs[s] = static_cast<double>(counts[s]) / static_cast<double>(steps_);
            }
            offer(std::move(probs), SearchMethod::grid);
            return;
        }
        for (std::size_t c = 0; c <= remaining; ++c) {
            counts[index] = c;
            compositions(counts, index + 1, remaining - c);
        }
    }

    /// Applies the first improving mass transfer in index order.
    bool climb(double step) {
        for (StateIndex to = 0; to < n_; ++to) {
            for (StateIndex from = 0; from < n_; ++from) {
                const double amount = std::min(step, best_->witness[from]);
                if (to == from || amount <= 0.0) {
                    continue;
                }
                std::vector<double> probs(best_->witness.probs().begin(),
                                          best_->witness.probs().end());
                probs[to] += amount;
                probs[from] -= amount;
                Posterior p(std::move(probs));
                const auto value = evaluate(p);
                if (value > best_->value) {
                    best_ = Candidate{value, std::move(p), SearchMethod::refined, std::nullopt, {}};
                    return true;
                }
            }
        }
        return false;
    }

    /// Relative error at the exact tie of a near-tie family, with the
    /// designated state kept as the mode.
    RelativeError tie_limit(StateIndex mode, const std::vector<StateIndex>& support) const {
        std::vector<double> probs(n_, 0.0);
        for (StateIndex s : support) {
            probs[s] = 1.0 / static_cast<double>(support.size());
        }
        Posterior p(std::move(probs));
        return relative_error(mode, p, cost_);
    }

    Estimator estimator_;
    const CostMatrix& cost_;
    const StateSpace& space_;
    const SearchConfig& config_;
    std::size_t n_;
    std::size_t steps_;
    std::optional<Candidate> best_;
};

}  // namespace

WorstCase worst_case(Estimator estimator, const CostMatrix& cost, const StateSpace& space,
                     const SearchConfig& config) {
    require_normalized(cost);
    config.validate();
    if (space.size() != cost.size()) {
        throw DimensionMismatch("state space and cost matrix disagree on the number of states");
    }
    if (estimator == Estimator::mean_snapped || estimator == Estimator::median) {
        (void)space.embedding();
    }

    Searcher search(estimator, cost, space, config);
    search.structured();
    const bool grid_skipped = cost.size() > kMaxGridStates;
    if (!grid_skipped) {
        search.grid();
    }
    search.refine();
    return search.result(grid_skipped);
}

}  // namespace bayesrisk
