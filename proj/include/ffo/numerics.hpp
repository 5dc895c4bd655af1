#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace ffo {

/// Uniform grid t_k = k * dt, k = 0..steps, with t_steps landing on t_final.
struct TimeGrid {
    double dt = 1e-3;
    std::size_t steps = 0;

    static TimeGrid over(double t_final, double dt) {
        if (!(dt > 0.0)) throw std::invalid_argument("time grid: dt must be positive");
        if (!(t_final > 0.0)) throw std::invalid_argument("time grid: t_final must be positive");
        const auto n = static_cast<std::size_t>(std::llround(t_final / dt));
        return {t_final / static_cast<double>(std::max<std::size_t>(n, 1)), std::max<std::size_t>(n, 1)};
    }

    double t(std::size_t k) const noexcept { return static_cast<double>(k) * dt; }
    double t_final() const noexcept { return t(steps); }
    std::size_t size() const noexcept { return steps + 1; }

    std::vector<double> times() const {
        std::vector<double> out(size());
        for (std::size_t k = 0; k < out.size(); ++k) out[k] = t(k);
        return out;
    }
};

/// One classical fourth-order Runge-Kutta step for y' = rhs(t, y). State needs
/// vector-space operators (+ and scalar *).
template <class State, class Rhs>
State rk4_step(const Rhs& rhs, double t, const State& y, double h) {
    const State k1 = rhs(t, y);
    const State k2 = rhs(t + 0.5 * h, y + (0.5 * h) * k1);
    const State k3 = rhs(t + 0.5 * h, y + (0.5 * h) * k2);
    const State k4 = rhs(t + h, y + h * k3);
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Cumulative integral of a function on the grid, Simpson's rule on every
/// interval using the analytic midpoint value.
template <class T, class F>
std::vector<T> cumulative_simpson(const F& fn, const TimeGrid& grid) {
    std::vector<T> out(grid.size());
    out[0] = T{};
    T left = fn(grid.t(0));
    for (std::size_t k = 0; k < grid.steps; ++k) {
        const double t0 = grid.t(k);
        const T mid = fn(t0 + 0.5 * grid.dt);
        const T right = fn(grid.t(k + 1));
        out[k + 1] = out[k] + (grid.dt / 6.0) * (left + 4.0 * mid + right);
        left = right;
    }
    return out;
}

/// Definite integral on [0, t] by composite Simpson with n panels.
template <class T, class F>
T simpson(const F& fn, double t, std::size_t n = 2000) {
    if (t == 0.0) return T{};
    if (n % 2) ++n;
    const double h = t / static_cast<double>(n);
    T acc = fn(0.0) + fn(t);
    for (std::size_t k = 1; k < n; ++k) acc = acc + ((k % 2) ? 4.0 : 2.0) * fn(h * static_cast<double>(k));
    return (h / 3.0) * acc;
}

/// Continuous phase of a complex sequence: arg(z_0) in (-pi, pi], later
/// values shifted by multiples of 2 pi to avoid jumps.
inline std::vector<double> unwrap_phase(const std::vector<std::complex<double>>& z) {
    std::vector<double> out(z.size());
    double prev = 0.0;
    for (std::size_t k = 0; k < z.size(); ++k) {
        const double raw = std::arg(z[k]);
        if (k == 0) {
            out[k] = raw;
        } else {
            double d = raw - std::remainder(prev, 2.0 * std::numbers::pi);
            d = std::remainder(d, 2.0 * std::numbers::pi);
            out[k] = prev + d;
        }
        prev = out[k];
    }
    return out;
}

/// Wraps an angle into (-pi, pi].
inline double wrap_angle(double a) { return std::remainder(a, 2.0 * std::numbers::pi); }

}  // namespace ffo
