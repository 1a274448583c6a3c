#pragma once

// Closed-form references used by the tests. Nothing here calls the library.

#include <cmath>
#include <cstddef>
#include <functional>
#include <numbers>
#include <vector>

namespace oracle {

using Fn = std::function<double(double)>;

inline constexpr double pi = std::numbers::pi;

/// Left Dirichlet datum u (zero for s <= 0), y(L, .) = 0, zero initial data,
/// unit speed: y(x,t) = sum_k u(t - x - 2kL) - u(t - (2L - x) - 2kL).
inline double dalembert_left(const Fn& u, double length, double x, double t) {
    const auto uu = [&](double s) { return s > 0.0 ? u(s) : 0.0; };
    double y = 0.0;
    for (int k = 0;; ++k) {
        const double a = t - x - 2.0 * k * length;
        const double b = t - (2.0 * length - x) - 2.0 * k * length;
        if (a <= 0.0 && b <= 0.0) break;
        y += uu(a) - uu(b);
    }
    return y;
}

/// psi_x(0, t) for the unit-speed adjoint problem with psi(L, .) = s, zero final
/// data at T: -2 sum_k s'(t + (2k+1)L), terms beyond T dropped.
inline double adjoint_left_flux(const Fn& ds, double length, double horizon, double t) {
    double v = 0.0;
    for (int k = 0;; ++k) {
        const double tau = t + (2.0 * k + 1.0) * length;
        if (tau >= horizon) break;
        v -= 2.0 * ds(tau);
    }
    return v;
}

inline double smooth_pulse(double t, double start, double stop) {
    if (t <= start || t >= stop) return 0.0;
    const double r = (2.0 * t - start - stop) / (stop - start);
    return std::exp(1.0 - 1.0 / (1.0 - r * r));
}

inline double trapezoid(const std::vector<double>& v, double h) {
    if (v.size() < 2) return 0.0;
    double s = 0.5 * (v.front() + v.back());
    for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
    return s * h;
}

inline double observed_order(double coarse, double fine) { return std::log2(coarse / fine); }

}  // namespace oracle
