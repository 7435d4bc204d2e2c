#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace bayesrisk {

using StateIndex = std::size_t;

/// Probability entries must sum to one within this tolerance.
inline constexpr double kProbabilityTolerance = 1e-9;

/**
 * Finite set of labeled states, optionally placed on the real line.
 *
 * States are indexed 0..n-1 in declaration order. The embedding, when
 * present, is what makes mean and median estimation meaningful.
 */
class StateSpace {
public:
    explicit StateSpace(std::vector<std::string> labels,
                        std::optional<std::vector<double>> embedding = std::nullopt);

    /// States labeled "0".."n-1" embedded at the given positions.
    static StateSpace on_line(std::vector<double> positions);

    std::size_t size() const noexcept { return labels_.size(); }
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    const std::string& label(StateIndex s) const { return labels_.at(s); }
    std::optional<StateIndex> find(const std::string& label) const;

    bool has_embedding() const noexcept { return embedding_.has_value(); }
    /// Throws MissingEmbedding when the space is not embedded.
    std::span<const double> embedding() const;
    double position(StateIndex s) const { return embedding()[s]; }

    /// State indices sorted by ascending embedding value.
    std::span<const StateIndex> embedding_order() const;

    /// max position - min position; 0 for a single state.
    double diameter() const;

private:
    std::vector<std::string> labels_;
    std::optional<std::vector<double>> embedding_;
    std::vector<StateIndex> order_;
};

/// Probability assignment over the states of a space.
class Posterior {
public:
    /// Entries must be finite and non-negative and sum to one within
    /// kProbabilityTolerance. A sum that is off by less than the tolerance is
    /// divided out.
    explicit Posterior(std::vector<double> probs);

    static Posterior uniform(std::size_t n);
    static Posterior point_mass(std::size_t n, StateIndex s);

    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](StateIndex s) const { return probs_[s]; }
    std::span<const double> probs() const noexcept { return probs_; }

    friend bool operator==(const Posterior&, const Posterior&) = default;

private:
    std::vector<double> probs_;
};

/**
 * Cost of reporting state s when t is the state of nature, stored row-major
 * as entry(s, t).
 *
 * Every instance satisfies the column-minimum rule: entry(t, t) is the
 * smallest entry of column t. Normalized matrices additionally have a zero
 * diagonal and maximum entry exactly 1, except the all-zero trivial cost.
 */
class CostMatrix {
public:
    std::size_t size() const noexcept { return n_; }
    double operator()(StateIndex s, StateIndex t) const { return entries_[s * n_ + t]; }
    bool normalized() const noexcept { return normalized_; }
    /// Every entry is zero.
    bool trivial() const noexcept;
    double max_entry() const noexcept;
    bool symmetric(double tolerance = 0.0) const noexcept;

    std::vector<std::vector<double>> rows() const;

    /// Relabel states: result(i, j) = entry(perm[i], perm[j]).
    CostMatrix permuted(std::span<const StateIndex> perm) const;

    friend bool operator==(const CostMatrix&, const CostMatrix&) = default;

private:
    friend CostMatrix validate_cost(const std::vector<std::vector<double>>& entries);
    friend CostMatrix normalize_cost(const CostMatrix& cost);

    CostMatrix(std::size_t n, std::vector<double> entries, bool normalized)
        : n_(n), entries_(std::move(entries)), normalized_(normalized) {}

    std::size_t n_ = 0;
    std::vector<double> entries_;
    bool normalized_ = false;
};

/// Checks shape, finiteness and the column-minimum rule.
/// Throws DimensionMismatch, NonFinite or DiagonalNotMinimal.
CostMatrix validate_cost(const std::vector<std::vector<double>>& entries);

/// Canonical equivalent cost: subtract each column's diagonal (regret), then
/// divide by the largest regret. All-zero regret yields the trivial cost.
CostMatrix normalize_cost(const CostMatrix& cost);

/// Throws NotNormalized unless `cost` came out of normalize_cost.
void require_normalized(const CostMatrix& cost);

/**
 * Cost as a function of distance, delta(s, t) = f(|x_s - x_t|).
 *
 * The derivative is either given in closed form or approximated by central
 * differences with step 1e-5 * max(1, |x|). Profiles must satisfy f(0) = 0.
 */
class DistanceCost {
public:
    using Profile = std::function<double(double)>;

    enum class DerivativeKind { closed_form, numeric, unavailable };

    DistanceCost(std::string name, Profile profile, Profile derivative);
    DistanceCost(std::string name, Profile profile, DerivativeKind kind);

    /// f(d) = scale * d
    static DistanceCost absolute(double scale = 1.0);
    /// f(d) = scale * d^2
    static DistanceCost squared(double scale = 1.0);
    /// f(d) = d^p
    static DistanceCost power(double p);

    const std::string& name() const noexcept { return name_; }
    DerivativeKind derivative_kind() const noexcept { return kind_; }
    double operator()(double d) const { return profile_(d); }
    /// Throws DerivativeUnavailable when kind is unavailable.
    double derivative(double d) const;

private:
    std::string name_;
    Profile profile_;
    Profile derivative_;
    DerivativeKind kind_;
};

/// entry(s, t) = f(|x_s - x_t|). Throws MissingEmbedding, NegativeCost.
CostMatrix distance_to_matrix(const DistanceCost& f, const StateSpace& space);

}  // namespace bayesrisk
