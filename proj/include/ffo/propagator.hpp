#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "ffo/errors.hpp"
#include "ffo/hamiltonian.hpp"
#include "ffo/numerics.hpp"
#include "ffo/operator2.hpp"
#include "ffo/tolerances.hpp"

namespace ffo {

enum class StepMethod { midpoint_exponential, rk4 };

struct PropagatorConfig {
    double dt = 1e-3;
    StepMethod method = StepMethod::midpoint_exponential;
    /// Project U onto the nearest unitary every this many output steps; 0 = never.
    std::size_t unitarity_renorm_every = 100;
    /// Internal steps per output interval. The output grid is unaffected.
    std::size_t substeps = 1;
};

/// U(t_k) on the grid t_0 = 0 < ... < t_K.
struct UnitaryTrajectory {
    TimeGrid grid;
    std::vector<Operator2> u;

    double max_unitarity_defect() const {
        double r = 0.0;
        for (const auto& x : u) r = std::max(r, unitarity_defect(x));
        return r;
    }
};

/// exp(A) in closed form. With A = alpha 1 + M, tr M = 0, M^2 = mu^2 1 and
/// exp(A) = e^alpha (cosh(mu) 1 + sinh(mu)/mu M).
inline Operator2 exp2x2(const Operator2& a) {
    const Complex alpha = 0.5 * a.trace();
    const Operator2 m = a - alpha * Operator2::identity();
    const Complex mu2 = -m.det();
    const Complex mu = std::sqrt(mu2);
    Complex ch, sh_over_mu;
    if (std::abs(mu) < 1e-6) {
        ch = 1.0 + mu2 / 2.0 + mu2 * mu2 / 24.0;
        sh_over_mu = 1.0 + mu2 / 6.0 + mu2 * mu2 / 120.0;
    } else {
        ch = std::cosh(mu);
        sh_over_mu = std::sinh(mu) / mu;
    }
    return std::exp(alpha) * (ch * Operator2::identity() + sh_over_mu * m);
}

/// Nearest unitary U (U^dagger U)^{-1/2}, using the 2x2 formula
/// sqrt(P) = (P + sqrt(det P) 1) / sqrt(tr P + 2 sqrt(det P)).
inline Operator2 nearest_unitary(const Operator2& u) {
    const Operator2 p = u.adjoint() * u;
    const double s = std::sqrt(std::max(p.det().real(), 0.0));
    const double tau = std::sqrt(p.trace().real() + 2.0 * s);
    const Operator2 root = (p + s * Operator2::identity()) / tau;
    // inverse of a 2x2: adj / det
    const Complex d = root.det();
    const Operator2 inv{root(1, 1) / d, -root(0, 1) / d, -root(1, 0) / d, root(0, 0) / d};
    return u * inv;
}

namespace detail {

inline Operator2 propagator_step(const HamiltonianSpec& spec, double t, double h, StepMethod method,
                                 const Operator2& u) {
    if (method == StepMethod::midpoint_exponential)
        return exp2x2((-kI * h) * hamiltonian_matrix(spec, t + 0.5 * h)) * u;
    const auto rhs = [&spec](double s, const Operator2& x) { return (-kI) * (hamiltonian_matrix(spec, s) * x); };
    return rk4_step(rhs, t, u, h);
}

}  // namespace detail

/// Time-ordered evolution operator on a fixed grid,
/// U_{k+1} = exp(-i H(t_k + dt/2) dt) U_k in the default method.
inline UnitaryTrajectory evolve_unitary(const HamiltonianSpec& spec, double t_final, const PropagatorConfig& cfg = {}) {
    const TimeGrid grid = TimeGrid::over(t_final, cfg.dt);
    const std::size_t sub = std::max<std::size_t>(cfg.substeps, 1);
    const double h = grid.dt / static_cast<double>(sub);
    UnitaryTrajectory out{grid, {}};
    out.u.reserve(grid.size());
    Operator2 u = Operator2::identity();
    out.u.push_back(u);
    for (std::size_t k = 0; k < grid.steps; ++k) {
        const double t0 = grid.t(k);
        for (std::size_t s = 0; s < sub; ++s) u = detail::propagator_step(spec, t0 + h * static_cast<double>(s), h, cfg.method, u);
        if (cfg.unitarity_renorm_every != 0 && (k + 1) % cfg.unitarity_renorm_every == 0) u = nearest_unitary(u);
        if (!u.finite()) throw IntegrationError("propagator", grid.t(k + 1));
        out.u.push_back(u);
    }
    return out;
}

/// U X0 U^dagger.
inline Operator2 heisenberg_oracle(const Operator2& u, const Operator2& x0, double unitarity_tol = ToleranceConfig{}.unitarity) {
    const double defect = unitarity_defect(u);
    if (!(defect <= unitarity_tol))
        throw ContractError("heisenberg_oracle: U is not unitary (defect " + std::to_string(defect) + ")");
    return u * x0 * u.adjoint();
}

/// psi(t_k) = U(t_k) psi0.
inline std::vector<StateVec2> evolve_state(const HamiltonianSpec& spec, const StateVec2& psi0, double t_final,
                                           const PropagatorConfig& cfg = {}) {
    const auto traj = evolve_unitary(spec, t_final, cfg);
    std::vector<StateVec2> out;
    out.reserve(traj.u.size());
    for (const auto& u : traj.u) out.push_back(u * psi0);
    return out;
}

}  // namespace ffo
