#pragma once

#include <cmath>
#include <stdexcept>

namespace lpbm {

/// A numeric result with a one-sigma standard error. Exact computations carry
/// se = 0; Monte Carlo estimators report their sampling error. Arithmetic
/// propagates errors to first order (independent-term assumption), which is
/// how slack records combine functional values of different bodies.
struct Estimate {
    double value = 0.0;
    double se = 0.0;

    bool exact() const { return se == 0.0; }

    Estimate operator+(const Estimate& o) const {
        return {value + o.value, std::hypot(se, o.se)};
    }
    Estimate operator-(const Estimate& o) const {
        return {value - o.value, std::hypot(se, o.se)};
    }
    Estimate operator*(double c) const { return {value * c, std::abs(c) * se}; }

    /// Delta method: se(x^g) = |g x^{g-1}| se(x).  Requires value > 0 when the
    /// exponent is fractional (all functionals here are positive on K^n_o).
    Estimate pow(double g) const {
        if (g == 1.0) return *this;
        double v = std::pow(value, g);
        if (!std::isfinite(v))
            throw std::runtime_error("Estimate::pow: non-finite result");
        double deriv = (value == 0.0) ? 0.0 : std::abs(g * v / value);
        return {v, deriv * se};
    }
};

inline Estimate operator*(double c, const Estimate& e) { return e * c; }

} // namespace lpbm
