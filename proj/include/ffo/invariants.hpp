#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "ffo/errors.hpp"
#include "ffo/hamiltonian.hpp"
#include "ffo/numerics.hpp"
#include "ffo/operator2.hpp"
#include "ffo/tolerances.hpp"

namespace ffo {

/// Coefficients of B = nu_minus J- + nu_plus J+ + nu_3 J3.
struct NuVector {
    Complex minus{};
    Complex plus{};
    Complex three{};

    bool finite() const noexcept { return is_finite(minus) && is_finite(plus) && is_finite(three); }
    double max_abs() const noexcept { return std::max({std::abs(minus), std::abs(plus), std::abs(three)}); }

    friend NuVector operator+(const NuVector& a, const NuVector& b) {
        return {a.minus + b.minus, a.plus + b.plus, a.three + b.three};
    }
    friend NuVector operator-(const NuVector& a, const NuVector& b) {
        return {a.minus - b.minus, a.plus - b.plus, a.three - b.three};
    }
    friend NuVector operator*(Complex s, const NuVector& a) { return {s * a.minus, s * a.plus, s * a.three}; }
    friend NuVector operator*(double s, const NuVector& a) { return Complex{s} * a; }
};

/// B(0) = b.
inline constexpr NuVector kCanonicalNu{1.0, 0.0, 0.0};

/// lambda1 = B^2 coefficient, lambda2 = {B, B^dagger} coefficient.
struct MotionConstants {
    Complex lambda1{};
    double lambda2 = 0.0;
};

inline MotionConstants motion_constants(const NuVector& nu) {
    return {nu.plus * nu.minus + 0.25 * nu.three * nu.three,
            std::norm(nu.minus) + std::norm(nu.plus) + 0.5 * std::norm(nu.three)};
}

/// d nu / dt from the invariance condition dB/dt = i [B, H].
inline NuVector nu_rhs(double omega, Complex f, const NuVector& nu) {
    const Complex fc = std::conj(f);
    return {kI * (nu.minus * omega - nu.three * fc), kI * (nu.three * f - nu.plus * omega),
            2.0 * kI * (nu.plus * fc - nu.minus * f)};
}

inline NuVector nu_rhs(const HamiltonianSpec& spec, double t, const NuVector& nu) {
    return nu_rhs(spec.omega(t), spec.f(t), nu);
}

struct NuTrajectory {
    TimeGrid grid;
    std::vector<NuVector> nu;
    std::vector<MotionConstants> constants;

    double max_lambda1_drift() const {
        double r = 0.0;
        for (const auto& c : constants) r = std::max(r, std::abs(c.lambda1 - constants.front().lambda1));
        return r;
    }
    double max_lambda2_drift() const {
        double r = 0.0;
        for (const auto& c : constants) r = std::max(r, std::abs(c.lambda2 - constants.front().lambda2));
        return r;
    }
};

/// Fixed-step RK4 integration of the nu system on the grid shared with the
/// propagator.
inline NuTrajectory integrate_nu(const HamiltonianSpec& spec, const NuVector& nu0, double t_final, double dt = 1e-3) {
    const TimeGrid grid = TimeGrid::over(t_final, dt);
    NuTrajectory out{grid, {}, {}};
    out.nu.reserve(grid.size());
    out.constants.reserve(grid.size());
    const auto rhs = [&spec](double t, const NuVector& y) { return nu_rhs(spec, t, y); };
    NuVector y = nu0;
    out.nu.push_back(y);
    out.constants.push_back(motion_constants(y));
    for (std::size_t k = 0; k < grid.steps; ++k) {
        y = rk4_step(rhs, grid.t(k), y, grid.dt);
        if (!y.finite()) throw IntegrationError("invariants", grid.t(k + 1));
        out.nu.push_back(y);
        out.constants.push_back(motion_constants(y));
    }
    return out;
}

/// B as a 2x2 matrix.
inline Operator2 build_B(const NuVector& nu) {
    return {-0.5 * nu.three, nu.minus, nu.plus, 0.5 * nu.three};
}

/// nu_-^* J+ + nu_+^* J- + nu_3^* J3.
inline Operator2 build_B_dagger(const NuVector& nu) { return build_B(nu).adjoint(); }

/// Recovers the coefficients from a matrix of the form nu_- J- + nu_+ J+ + nu_3 J3.
inline NuVector nu_from_matrix(const Operator2& b) { return {b(0, 1), b(1, 0), b(1, 1) - b(0, 0)}; }

struct LadderResiduals {
    /// ||B^2||_max from matrix arithmetic.
    double residual_B2 = 0.0;
    /// ||{B, B^dagger} - 1||_max from matrix arithmetic.
    double residual_anticomm = 0.0;
    /// The same two quantities from the scalar constants: |lambda1|, |lambda2 - 1|.
    double scalar_B2 = 0.0;
    double scalar_anticomm = 0.0;

    /// Largest disagreement between the two routes.
    double route_gap() const {
        return std::max(std::abs(residual_B2 - scalar_B2), std::abs(residual_anticomm - scalar_anticomm));
    }
};

inline LadderResiduals ladder_conditions_check(const Operator2& b) {
    LadderResiduals r;
    r.residual_B2 = (b * b).max_abs();
    r.residual_anticomm = max_abs_diff(anticommutator(b, b.adjoint()), Operator2::identity());
    const auto c = motion_constants(nu_from_matrix(b));
    r.scalar_B2 = std::abs(c.lambda1);
    r.scalar_anticomm = std::abs(c.lambda2 - 1.0);
    return r;
}

inline LadderResiduals ladder_conditions_check(const NuVector& nu) { return ladder_conditions_check(build_B(nu)); }

/// I = B^dagger B - 1/2.
inline Operator2 hermitian_invariant(const NuVector& nu) {
    const Operator2 b = build_B(nu);
    return b.adjoint() * b - 0.5 * Operator2::identity();
}

/// ||(B(t+dt) - B(t-dt)) / 2dt - i [B(t), H(t)]||_max.
inline double invariance_residual(const HamiltonianSpec& spec, double t, double dt, const Operator2& b_prev,
                                  const Operator2& b_mid, const Operator2& b_next) {
    const Operator2 db = (b_next - b_prev) / Complex{2.0 * dt};
    return max_abs_diff(db, kI * commutator(b_mid, hamiltonian_matrix(spec, t)));
}

/// Invariance residual at an interior grid point of a nu trajectory.
inline double invariance_residual(const HamiltonianSpec& spec, const NuTrajectory& traj, std::size_t k) {
    if (k == 0 || k + 1 >= traj.nu.size())
        throw RangeError("invariance_residual: index " + std::to_string(k) + " has no central difference");
    return invariance_residual(spec, traj.grid.t(k), traj.grid.dt, build_B(traj.nu[k - 1]), build_B(traj.nu[k]),
                               build_B(traj.nu[k + 1]));
}

/// Invariance residual of an operator-valued function of time.
inline double invariance_residual(const HamiltonianSpec& spec, const std::function<Operator2(double)>& b_of_t, double t,
                                  double dt) {
    return invariance_residual(spec, t, dt, b_of_t(t - dt), b_of_t(t), b_of_t(t + dt));
}

// -- free oscillator (f = 0) ------------------------------------------------

/// phi(t) = integral_0^t omega, composite Simpson.
inline double omega_phase(const TimeSignal& omega, double t, double max_panel = 1e-3) {
    const auto n = static_cast<std::size_t>(std::ceil(std::abs(t) / max_panel));
    return simpson<double>([&omega](double s) { return omega.value(s); }, t, std::max<std::size_t>(n, 2));
}

/// Closed-form nu for f = 0: nu_- = nu0_- e^{+i phi}, nu_+ = nu0_+ e^{-i phi},
/// nu_3 constant. The exponent signs follow the direct nu system.
inline NuVector free_oscillator_nu(const NuVector& nu0, double phi) {
    const Complex e = std::polar(1.0, phi);
    return {nu0.minus * e, nu0.plus * std::conj(e), nu0.three};
}

inline NuVector free_oscillator_nu(const NuVector& nu0, const TimeSignal& omega, double t) {
    return free_oscillator_nu(nu0, omega_phase(omega, t));
}

/// Contract-checked variant: spec must be unforced.
inline NuVector free_oscillator_nu(const NuVector& nu0, const HamiltonianSpec& spec, double t) {
    if (!spec.unforced()) throw ContractError("free_oscillator_nu: requires f identically zero");
    return free_oscillator_nu(nu0, spec.omega_signal(), t);
}

/// Closed-form trajectory on a grid, phases from cumulative Simpson.
inline std::vector<NuVector> free_oscillator_trajectory(const NuVector& nu0, const TimeSignal& omega, const TimeGrid& grid) {
    const auto phi = cumulative_simpson<double>([&omega](double s) { return omega.value(s); }, grid);
    std::vector<NuVector> out;
    out.reserve(phi.size());
    for (double p : phi) out.push_back(free_oscillator_nu(nu0, p));
    return out;
}

enum class SqrtBranch { principal, negative };

/// B_so(t) = nu0_- e^{+i phi} b + nu0_+ e^{-i phi} b^dagger
///          + 2 sqrt(-nu0_- nu0_+) (b^dagger b - 1/2).
/// Requires |nu0_-| + |nu0_+| = 1.
inline Operator2 build_B_so(Complex nu0_minus, Complex nu0_plus, double phi, SqrtBranch branch = SqrtBranch::principal,
                            double tol = 1e-12) {
    const double s = std::abs(nu0_minus) + std::abs(nu0_plus);
    if (!(std::abs(s - 1.0) <= tol))
        throw ContractError("build_B_so: |nu0_-| + |nu0_+| must equal 1, got " + std::to_string(s));
    Complex root = std::sqrt(-nu0_minus * nu0_plus);
    if (branch == SqrtBranch::negative) root = -root;
    return build_B(free_oscillator_nu({nu0_minus, nu0_plus, 2.0 * root}, phi));
}

inline Operator2 build_B_so(Complex nu0_minus, Complex nu0_plus, const TimeSignal& omega, double t,
                            SqrtBranch branch = SqrtBranch::principal) {
    return build_B_so(nu0_minus, nu0_plus, omega_phase(omega, t), branch);
}

}  // namespace ffo
