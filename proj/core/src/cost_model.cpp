#include "bayesrisk/cost_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "bayesrisk/error.hpp"

namespace bayesrisk {

StateSpace::StateSpace(std::vector<std::string> labels,
                       std::optional<std::vector<double>> embedding)
    : labels_(std::move(labels)), embedding_(std::move(embedding)) {
    if (labels_.empty()) {
        throw InvalidArgument("state space needs at least one state");
    }
    std::set<std::string> seen;
    for (const auto& label : labels_) {
        if (label.empty()) {
            throw InvalidArgument("state labels must be non-empty");
        }
        if (!seen.insert(label).second) {
            throw InvalidArgument("duplicate state label '" + label + "'");
        }
    }
    if (!embedding_) {
        return;
    }
    if (embedding_->size() != labels_.size()) {
        throw DimensionMismatch("embedding has " + std::to_string(embedding_->size()) +
                                " positions for " + std::to_string(labels_.size()) +
                                " states");
    }
    for (double x : *embedding_) {
        if (!std::isfinite(x)) {
            throw NonFinite("embedding positions must be finite");
        }
    }
    order_.resize(labels_.size());
    std::iota(order_.begin(), order_.end(), StateIndex{0});
    std::stable_sort(order_.begin(), order_.end(), [this](StateIndex a, StateIndex b) {
        return (*embedding_)[a] < (*embedding_)[b];
    });
    for (std::size_t i = 1; i < order_.size(); ++i) {
        if ((*embedding_)[order_[i - 1]] == (*embedding_)[order_[i]]) {
            throw InvalidArgument("embedding positions must be pairwise distinct");
        }
    }
}

StateSpace StateSpace::on_line(std::vector<double> positions) {
    std::vector<std::string> labels;
    labels.reserve(positions.size());
    for (std::size_t i = 0; i < positions.size(); ++i) {
        labels.push_back(std::to_string(i));
    }
    return StateSpace(std::move(labels), std::move(positions));
}

std::optional<StateIndex> StateSpace::find(const std::string& label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) {
        return std::nullopt;
    }
    return static_cast<StateIndex>(it - labels_.begin());
}

std::span<const double> StateSpace::embedding() const {
    if (!embedding_) {
        throw MissingEmbedding();
    }
    return *embedding_;
}

std::span<const StateIndex> StateSpace::embedding_order() const {
    if (!embedding_) {
        throw MissingEmbedding();
    }
    return order_;
}

double StateSpace::diameter() const {
    auto order = embedding_order();
    return (*embedding_)[order.back()] - (*embedding_)[order.front()];
}

Posterior::Posterior(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) {
        throw InvalidArgument("posterior needs at least one state");
    }
    double sum = 0.0;
    for (double p : probs_) {
        if (!std::isfinite(p)) {
            throw NonFinite("posterior probabilities must be finite");
        }
        if (p < 0.0) {
            throw InvalidArgument("posterior probabilities must be non-negative");
        }
        sum += p;
    }
    if (std::abs(sum - 1.0) > kProbabilityTolerance) {
        throw InvalidArgument("posterior probabilities sum to " + std::to_string(sum));
    }
    if (sum != 1.0) {
        for (double& p : probs_) {
            p /= sum;
        }
    }
}

Posterior Posterior::uniform(std::size_t n) {
    return Posterior(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Posterior Posterior::point_mass(std::size_t n, StateIndex s) {
    std::vector<double> probs(n, 0.0);
    probs.at(s) = 1.0;
    return Posterior(std::move(probs));
}

bool CostMatrix::trivial() const noexcept {
    return std::all_of(entries_.begin(), entries_.end(), [](double v) { return v == 0.0; });
}

double CostMatrix::max_entry() const noexcept {
    return *std::max_element(entries_.begin(), entries_.end());
}

bool CostMatrix::symmetric(double tolerance) const noexcept {
    for (std::size_t s = 0; s < n_; ++s) {
        for (std::size_t t = s + 1; t < n_; ++t) {
            if (std::abs((*this)(s, t) - (*this)(t, s)) > tolerance) {
                return false;
            }
        }
    }
    return true;
}

std::vector<std::vector<double>> CostMatrix::rows() const {
    std::vector<std::vector<double>> out(n_);
    for (std::size_t s = 0; s < n_; ++s) {
        out[s].assign(entries_.begin() + static_cast<std::ptrdiff_t>(s * n_),
                      entries_.begin() + static_cast<std::ptrdiff_t>((s + 1) * n_));
    }
    return out;
}

CostMatrix CostMatrix::permuted(std::span<const StateIndex> perm) const {
    if (perm.size() != n_) {
        throw DimensionMismatch("permutation size does not match cost matrix");
    }
    std::vector<double> out(n_ * n_);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) {
            out[i * n_ + j] = (*this)(perm[i], perm[j]);
        }
    }
    return CostMatrix(n_, std::move(out), normalized_);
}

CostMatrix validate_cost(const std::vector<std::vector<double>>& entries) {
    const std::size_t n = entries.size();
    if (n == 0) {
        throw DimensionMismatch("cost matrix must have at least one row");
    }
    std::vector<double> flat;
    flat.reserve(n * n);
    for (const auto& row : entries) {
        if (row.size() != n) {
            throw DimensionMismatch("cost matrix must be square");
        }
        for (double v : row) {
            if (!std::isfinite(v)) {
                throw NonFinite("cost entries must be finite");
            }
            flat.push_back(v);
        }
    }
    for (std::size_t t = 0; t < n; ++t) {
        for (std::size_t s = 0; s < n; ++s) {
            if (flat[s * n + t] < flat[t * n + t]) {
                throw DiagonalNotMinimal(t, s);
            }
        }
    }
    return CostMatrix(n, std::move(flat), false);
}

CostMatrix normalize_cost(const CostMatrix& cost) {
    const std::size_t n = cost.size();
    std::vector<double> regret(n * n);
    double largest = 0.0;
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = 0; t < n; ++t) {
            regret[s * n + t] = cost(s, t) - cost(t, t);
            largest = std::max(largest, regret[s * n + t]);
        }
    }
    if (largest > 0.0) {
        for (double& v : regret) {
            v /= largest;
        }
    }
    return CostMatrix(n, std::move(regret), true);
}

void require_normalized(const CostMatrix& cost) {
    if (!cost.normalized()) {
        throw NotNormalized();
    }
}

DistanceCost::DistanceCost(std::string name, Profile profile, Profile derivative)
    : name_(std::move(name)), profile_(std::move(profile)),
      derivative_(std::move(derivative)), kind_(DerivativeKind::closed_form) {
    if (profile_(0.0) != 0.0) {
        throw InvalidArgument("distance cost '" + name_ + "' must vanish at distance 0");
    }
}

DistanceCost::DistanceCost(std::string name, Profile profile, DerivativeKind kind)
    : name_(std::move(name)), profile_(std::move(profile)), kind_(kind) {
    if (kind_ == DerivativeKind::closed_form) {
        throw InvalidArgument("closed-form derivative requires a derivative function");
    }
    if (profile_(0.0) != 0.0) {
        throw InvalidArgument("distance cost '" + name_ + "' must vanish at distance 0");
    }
}

DistanceCost DistanceCost::absolute(double scale) {
    return DistanceCost(
        scale == 1.0 ? "abs" : "abs*" + std::to_string(scale),
        [scale](double d) { return scale * d; }, [scale](double) { return scale; });
}

DistanceCost DistanceCost::squared(double scale) {
    return DistanceCost(
        scale == 1.0 ? "squared" : "squared*" + std::to_string(scale),
        [scale](double d) { return scale * d * d; },
        [scale](double d) { return 2.0 * scale * d; });
}

DistanceCost DistanceCost::power(double p) {
    return DistanceCost(
        "power" + std::to_string(p), [p](double d) { return std::pow(d, p); },
        [p](double d) { return p * std::pow(d, p - 1.0); });
}

double DistanceCost::derivative(double d) const {
    switch (kind_) {
    case DerivativeKind::closed_form:
        return derivative_(d);
    case DerivativeKind::numeric: {
        const double h = 1e-5 * std::max(1.0, std::abs(d));
        // Profiles are only defined for non-negative distances.
        if (d - h < 0.0) {
            return (profile_(d + h) - profile_(d)) / h;
        }
        return (profile_(d + h) - profile_(d - h)) / (2.0 * h);
    }
    case DerivativeKind::unavailable:
        break;
    }
    throw DerivativeUnavailable();
}

CostMatrix distance_to_matrix(const DistanceCost& f, const StateSpace& space) {
    auto x = space.embedding();
    const std::size_t n = space.size();
    std::vector<std::vector<double>> entries(n, std::vector<double>(n));
    for (std::size_t s = 0; s < n; ++s) {
        for (std::size_t t = 0; t < n; ++t) {
            const double v = f(std::abs(x[s] - x[t]));
            if (v < 0.0) {
                throw NegativeCost("distance cost '" + f.name() + "' is negative at distance " +
                                   std::to_string(std::abs(x[s] - x[t])));
            }
            entries[s][t] = v;
        }
    }
    return validate_cost(entries);
}

}  // namespace bayesrisk
