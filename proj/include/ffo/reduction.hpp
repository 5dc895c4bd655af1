#pragma once

// Forced-oscillator reduction of the nu system: everything expressed through
// nu_plus, its first integral lambda, and the second-order epsilon equation.
// All routines require f(t) != 0.

#include <cmath>
#include <cstddef>
#include <vector>

#include "ffo/errors.hpp"
#include "ffo/hamiltonian.hpp"
#include "ffo/invariants.hpp"
#include "ffo/numerics.hpp"
#include "ffo/tolerances.hpp"

namespace ffo {

namespace detail {

inline void require_forced(Complex f, double t, double f_min, const char* where) {
    if (!(std::abs(f) >= f_min)) throw SingularReductionError(std::string(where) + ": |f| below f_min", t);
}

}  // namespace detail

/// nu_plus and its first three time derivatives.
struct NuPlusJet {
    Complex p{}, dp{}, ddp{}, dddp{};
};

/// Derivatives of nu_plus obtained by differentiating the nu system
/// analytically (no finite differences).
inline NuPlusJet nu_plus_jet(const HamiltonianSpec& spec, double t, const NuVector& nu) {
    const SignalJet s = spec.jet(t);
    const Complex fc = std::conj(s.f), fc_dot = std::conj(s.f_dot);
    const NuVector d1 = nu_rhs(s.omega, s.f, nu);
    const Complex dd_three = 2.0 * kI * (d1.plus * fc + nu.plus * fc_dot - d1.minus * s.f - nu.minus * s.f_dot);
    const Complex dd_plus = kI * (d1.three * s.f + nu.three * s.f_dot - d1.plus * s.omega - nu.plus * s.omega_dot);
    const Complex ddd_plus = kI * (dd_three * s.f + 2.0 * d1.three * s.f_dot + nu.three * s.f_ddot -
                                   dd_plus * s.omega - 2.0 * d1.plus * s.omega_dot - nu.plus * s.omega_ddot);
    return {nu.plus, d1.plus, dd_plus, ddd_plus};
}

/// nu_3 = -(i/f)(nu_plus' + i nu_plus omega)
inline Complex nu3_from_nu_plus(const HamiltonianSpec& spec, double t, Complex nu_plus, Complex nu_plus_dot,
                                const ToleranceConfig& tol = {}) {
    const Complex f = spec.f(t);
    detail::require_forced(f, t, tol.f_min, "nu3_from_nu_plus");
    return -(kI / f) * (nu_plus_dot + kI * nu_plus * spec.omega(t));
}

/// nu_- = [nu_+'' + (i w - f'/f) nu_+' + (2|f|^2 + i w' - i w f'/f) nu_+] / (2 f^2)
inline Complex nu_minus_from_nu_plus_2nd(const HamiltonianSpec& spec, double t, Complex p, Complex dp, Complex ddp,
                                         const ToleranceConfig& tol = {}) {
    const SignalJet s = spec.jet(t);
    detail::require_forced(s.f, t, tol.f_min, "nu_minus_from_nu_plus_2nd");
    const Complex r = s.f_dot / s.f;
    return (ddp + (kI * s.omega - r) * dp + (2.0 * std::norm(s.f) + kI * s.omega_dot - kI * s.omega * r) * p) /
           (2.0 * s.f * s.f);
}

/// Which coefficient set to use for the third-order nu_plus equation.
enum class ThirdOrderForm {
    /// Coefficients re-derived from the nu system.
    derived,
    /// Same, but with i w'/(2 f^2) in the nu_plus' coefficient. Kept for comparison.
    halved_omega_rate,
};

/// |LHS - RHS| of the third-order equation for nu_plus, written as
/// nu_+''' / (2 f^2) = A nu_+'' - B nu_+' - C nu_+.
inline double third_order_residual(const HamiltonianSpec& spec, double t, const NuPlusJet& j,
                                   ThirdOrderForm form = ThirdOrderForm::derived, const ToleranceConfig& tol = {}) {
    const SignalJet s = spec.jet(t);
    detail::require_forced(s.f, t, tol.f_min, "third_order_residual");
    const Complex f = s.f, f2 = f * f, f3 = f2 * f, f4 = f2 * f2;
    const Complex fd = s.f_dot, fdd = s.f_ddot;
    const double w = s.omega, wd = s.omega_dot, wdd = s.omega_ddot;
    const double wd_weight = form == ThirdOrderForm::derived ? 1.0 : 0.5;
    const Complex a = 3.0 * fd / (2.0 * f3);
    const Complex b = 2.0 * std::conj(f) / f + w * w / (2.0 * f2) + kI * wd_weight * wd / f2 + 3.0 * fd * fd / (2.0 * f4) -
                      kI * w * fd / f3 - fdd / (2.0 * f3);
    const Complex c = std::conj(fd) / f + w * wd / (2.0 * f2) - w * w * fd / (2.0 * f3) - std::conj(f) * fd / f2 -
                      kI * 3.0 * wd * fd / (2.0 * f3) + kI * wdd / (2.0 * f2) - kI * w * fdd / (2.0 * f3) +
                      kI * 3.0 * w * fd * fd / (2.0 * f4);
    const Complex lhs = j.dddp / (2.0 * f2);
    const Complex rhs = a * j.ddp - b * j.dp - c * j.p;
    return std::abs(lhs - rhs);
}

/// First integral of the third-order equation; equals 16 lambda1.
inline Complex first_integral_lambda(const HamiltonianSpec& spec, double t, Complex p, Complex dp, Complex ddp,
                                     const ToleranceConfig& tol = {}) {
    const SignalJet s = spec.jet(t);
    detail::require_forced(s.f, t, tol.f_min, "first_integral_lambda");
    const Complex r = s.f_dot / s.f;
    const Complex bracket = 2.0 * p * ddp - dp * dp - 2.0 * p * dp * r +
                            4.0 * p * p *
                                (std::norm(s.f) + 0.25 * s.omega * s.omega + 0.5 * kI * s.omega_dot -
                                 0.5 * kI * s.omega * r);
    return 4.0 / (s.f * s.f) * bracket;
}

/// nu_- = lambda / (16 nu_+) - (w nu_+ - i nu_+')^2 / (4 f^2 nu_+)
inline Complex nu_minus_compact(const HamiltonianSpec& spec, double t, Complex p, Complex dp, Complex lambda,
                                const ToleranceConfig& tol = {}) {
    const Complex f = spec.f(t);
    detail::require_forced(f, t, tol.f_min, "nu_minus_compact");
    if (!(std::abs(p) >= tol.nu_min)) throw SingularReductionError("nu_minus_compact: |nu_plus| below nu_min", t);
    const Complex q = spec.omega(t) * p - kI * dp;
    return lambda / (16.0 * p) - q * q / (4.0 * f * f * p);
}

/// The same nu_- through nu_3: (lambda/4 - nu_3^2) / (4 nu_+).
inline Complex nu_minus_from_nu3(Complex p, Complex nu3, Complex lambda) {
    return (0.25 * lambda - nu3 * nu3) / (4.0 * p);
}

/// Normalized invariant annihilation operator built from a lambda = 0
/// solution nu_plus:
///   B = [ (w nu_+ - i nu_+')/f J3 + nu_+ b^dagger - (w nu_+ - i nu_+')^2/(4 f^2 nu_+) b ] / sqrt(lambda2)
inline Operator2 build_B_normalized(const HamiltonianSpec& spec, double t, Complex p, Complex dp,
                                    const ToleranceConfig& tol = {}) {
    const Complex f = spec.f(t);
    detail::require_forced(f, t, tol.f_min, "build_B_normalized");
    if (!(std::abs(p) >= tol.nu_min)) throw SingularReductionError("build_B_normalized: |nu_plus| below nu_min", t);
    const Complex q = spec.omega(t) * p - kI * dp;
    const NuVector nu{-q * q / (4.0 * f * f * p), p, q / f};
    const double lambda2 = motion_constants(nu).lambda2;
    if (!(lambda2 > 0.0)) throw SingularReductionError("build_B_normalized: lambda2 vanishes", t);
    return build_B(nu) / Complex{std::sqrt(lambda2)};
}

// -- epsilon equation -------------------------------------------------------

struct EpsilonState {
    Complex eps{};
    Complex eps_dot{};

    friend EpsilonState operator+(const EpsilonState& a, const EpsilonState& b) {
        return {a.eps + b.eps, a.eps_dot + b.eps_dot};
    }
    friend EpsilonState operator*(double s, const EpsilonState& a) { return {s * a.eps, s * a.eps_dot}; }
    bool finite() const noexcept { return is_finite(eps) && is_finite(eps_dot); }
};

/// Omega(t) = |f|^2 + w^2/4 + i w'/2 - i w f'/(2 f)
inline Complex epsilon_omega(const SignalJet& s) {
    return std::norm(s.f) + 0.25 * s.omega * s.omega + 0.5 * kI * s.omega_dot - 0.5 * kI * s.omega * s.f_dot / s.f;
}

/// Omega'(t) = Omega + f''/(2 f) - 3 f'^2 / (4 f^2)
inline Complex epsilon_omega_prime(const SignalJet& s) {
    const Complex r = s.f_dot / s.f;
    return epsilon_omega(s) + 0.5 * s.f_ddot / s.f - 0.75 * r * r;
}

/// d/dt (eps, eps') for eps'' - (f'/f) eps' + Omega eps = 0.
inline EpsilonState epsilon_rhs(const HamiltonianSpec& spec, double t, const EpsilonState& e,
                                const ToleranceConfig& tol = {}) {
    const SignalJet s = spec.jet(t);
    detail::require_forced(s.f, t, tol.f_min, "epsilon_rhs");
    return {e.eps_dot, (s.f_dot / s.f) * e.eps_dot - epsilon_omega(s) * e.eps};
}

struct EpsilonTrajectory {
    TimeGrid grid;
    std::vector<EpsilonState> states;
};

inline EpsilonTrajectory integrate_epsilon(const HamiltonianSpec& spec, const EpsilonState& e0, double t_final,
                                           double dt = 1e-3, const ToleranceConfig& tol = {}) {
    const TimeGrid grid = TimeGrid::over(t_final, dt);
    EpsilonTrajectory out{grid, {}};
    out.states.reserve(grid.size());
    const auto rhs = [&](double t, const EpsilonState& y) { return epsilon_rhs(spec, t, y, tol); };
    EpsilonState y = e0;
    out.states.push_back(y);
    for (std::size_t k = 0; k < grid.steps; ++k) {
        y = rk4_step(rhs, grid.t(k), y, grid.dt);
        if (!y.finite()) throw IntegrationError("epsilon", grid.t(k + 1));
        out.states.push_back(y);
    }
    return out;
}

/// nu_+ = eps^2/2, nu_- = -(w eps/2 - i eps')^2/(2 f^2), nu_3 = (w eps^2/2 - i eps eps')/f
inline NuVector nu_from_epsilon(const HamiltonianSpec& spec, double t, const EpsilonState& e,
                                const ToleranceConfig& tol = {}) {
    const Complex f = spec.f(t);
    detail::require_forced(f, t, tol.f_min, "nu_from_epsilon");
    const Complex w = 0.5 * spec.omega(t) * e.eps - kI * e.eps_dot;
    return {-w * w / (2.0 * f * f), 0.5 * e.eps * e.eps, e.eps * w / f};
}

/// Exact time derivative of nu_from_epsilon along a solution of the epsilon
/// equation (chain rule with eps'' taken from the equation).
inline NuVector nu_dot_from_epsilon(const HamiltonianSpec& spec, double t, const EpsilonState& e,
                                    const ToleranceConfig& tol = {}) {
    const SignalJet s = spec.jet(t);
    detail::require_forced(s.f, t, tol.f_min, "nu_dot_from_epsilon");
    const Complex eps_ddot = (s.f_dot / s.f) * e.eps_dot - epsilon_omega(s) * e.eps;
    const Complex w = 0.5 * s.omega * e.eps - kI * e.eps_dot;
    const Complex w_dot = 0.5 * s.omega_dot * e.eps + 0.5 * s.omega * e.eps_dot - kI * eps_ddot;
    const Complex f = s.f, f2 = f * f;
    return {-w * w_dot / f2 + w * w * s.f_dot / (f2 * f), e.eps * e.eps_dot,
            (e.eps_dot * w + e.eps * w_dot) / f - e.eps * w * s.f_dot / f2};
}

/// lambda2 along the epsilon route: (|eps|^2 + |w|^2/|f|^2)^2 / 4 with
/// w = w eps/2 - i eps'.
inline double lambda2_from_epsilon(const HamiltonianSpec& spec, double t, const EpsilonState& e,
                                   const ToleranceConfig& tol = {}) {
    const Complex f = spec.f(t);
    detail::require_forced(f, t, tol.f_min, "lambda2_from_epsilon");
    const Complex w = 0.5 * spec.omega(t) * e.eps - kI * e.eps_dot;
    const double x = std::norm(e.eps) + std::norm(w) / std::norm(f);
    return 0.25 * x * x;
}

/// Omega'(t_k) and gauge factors exp(1/2 int_0^t f'/f) on a grid; eps = eps' * gauge.
struct EpsilonPrimeTransform {
    TimeGrid grid;
    std::vector<Complex> omega_prime;
    std::vector<Complex> gauge;
};

inline EpsilonPrimeTransform epsilon_prime_transform(const HamiltonianSpec& spec, const TimeGrid& grid,
                                                     const ToleranceConfig& tol = {}) {
    EpsilonPrimeTransform out{grid, {}, {}};
    out.omega_prime.reserve(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double t = grid.t(k);
        const SignalJet s = spec.jet(t);
        detail::require_forced(s.f, t, tol.f_min, "epsilon_prime_transform");
        out.omega_prime.push_back(epsilon_omega_prime(s));
    }
    const auto log_f = cumulative_simpson<Complex>(
        [&spec](double t) {
            const SignalJet s = spec.jet(t);
            return s.f_dot / s.f;
        },
        grid);
    out.gauge.reserve(log_f.size());
    for (const auto& x : log_f) out.gauge.push_back(std::exp(0.5 * x));
    return out;
}

/// Integrates eps'' + Omega' eps = 0 from the eps initial data, maps back
/// through the gauge factor, and returns max_k |eps_k - eps'_k gauge_k|
/// against the direct epsilon trajectory.
inline double epsilon_prime_round_trip(const HamiltonianSpec& spec, const EpsilonTrajectory& direct,
                                       const ToleranceConfig& tol = {}) {
    const TimeGrid& grid = direct.grid;
    const auto xf = epsilon_prime_transform(spec, grid, tol);
    const SignalJet s0 = spec.jet(0.0);
    const EpsilonState& e0 = direct.states.front();
    // eps' = eps / G with G(0) = 1 and G' = (f'/2f) G
    EpsilonState y{e0.eps, e0.eps_dot - 0.5 * (s0.f_dot / s0.f) * e0.eps};
    const auto rhs = [&spec](double t, const EpsilonState& e) {
        return EpsilonState{e.eps_dot, -epsilon_omega_prime(spec.jet(t)) * e.eps};
    };
    double worst = std::abs(y.eps * xf.gauge[0] - e0.eps);
    for (std::size_t k = 0; k < grid.steps; ++k) {
        y = rk4_step(rhs, grid.t(k), y, grid.dt);
        worst = std::max(worst, std::abs(y.eps * xf.gauge[k + 1] - direct.states[k + 1].eps));
    }
    return worst;
}

}  // namespace ffo
