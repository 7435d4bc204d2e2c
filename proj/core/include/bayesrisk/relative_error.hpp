#pragma once

#include <compare>
#include <limits>
#include <string>

namespace bayesrisk {

/// Extra expected cost over the optimum, as a fraction of the optimum.
/// Unbounded when the optimum costs nothing but the estimate does not.
class RelativeError {
public:
    constexpr RelativeError() = default;

    static constexpr RelativeError finite(double value) { return RelativeError(value, false); }
    static constexpr RelativeError unbounded() { return RelativeError(0.0, true); }

    constexpr bool is_unbounded() const noexcept { return unbounded_; }
    /// Finite value; +infinity when unbounded.
    constexpr double value() const noexcept {
        return unbounded_ ? std::numeric_limits<double>::infinity() : value_;
    }

    /// Unbounded errors dominate every finite value and tie with each other.
    friend constexpr std::partial_ordering operator<=>(const RelativeError& a,
                                                       const RelativeError& b) noexcept {
        if (a.unbounded_ || b.unbounded_) {
            return a.unbounded_ <=> b.unbounded_;
        }
        return a.value_ <=> b.value_;
    }
    friend constexpr bool operator==(const RelativeError& a, const RelativeError& b) noexcept {
        return (a <=> b) == 0;
    }

    std::string to_string() const;

private:
    constexpr RelativeError(double value, bool unbounded) : value_(value), unbounded_(unbounded) {}

    double value_ = 0.0;
    bool unbounded_ = false;
};

}  // namespace bayesrisk
