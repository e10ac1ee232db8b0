#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lpbm {

/// Volume of the unit ball in R^j (omega_j = pi^{j/2} / Gamma(j/2 + 1)).
/// omega_0 = 1, omega_1 = 2, omega_2 = pi, omega_3 = 4pi/3.
inline double unit_ball_volume(int j) {
    if (j < 0) throw std::invalid_argument("unit_ball_volume: negative dimension");
    // The two-step recurrence omega_j = omega_{j-2} * 2*pi/j is exact in the
    // reals and keeps floating error at a few ulps; tgamma would do as well.
    if (j == 0) return 1.0;
    if (j == 1) return 2.0;
    return unit_ball_volume(j - 2) * 2.0 * std::numbers::pi / j;
}

/// Surface measure of the unit sphere S^{n-1}: n * omega_n (2pi in R^2, 4pi in R^3).
inline double unit_sphere_surface(int n) {
    if (n < 1) throw std::invalid_argument("unit_sphere_surface: dimension < 1");
    return n * unit_ball_volume(n);
}

} // namespace lpbm
