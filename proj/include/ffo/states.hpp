#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ffo/errors.hpp"
#include "ffo/grassmann.hpp"
#include "ffo/hamiltonian.hpp"
#include "ffo/invariants.hpp"
#include "ffo/numerics.hpp"
#include "ffo/propagator.hpp"
#include "ffo/tolerances.hpp"

namespace ffo {

enum class VacuumRoute { closed_form, nullspace };

/// |0;t> = alpha0 |0> + alpha1 |1>, annihilated by B(t) and solving the
/// Schroedinger equation.
struct EvolvedVacuum {
    StateVec2 state;
    VacuumRoute route = VacuumRoute::closed_form;

    Complex alpha0() const noexcept { return state.amp0; }
    Complex alpha1() const noexcept { return state.amp1; }
};

namespace detail {

/// Implicit-midpoint (Cayley) step of i psi' = H psi.
inline StateVec2 cayley_step(const Operator2& h, double dt, const StateVec2& psi) {
    const Operator2 one = Operator2::identity();
    const Operator2 lhs = one + (0.5 * dt * kI) * h;
    const Operator2 rhs = one - (0.5 * dt * kI) * h;
    const Complex d = lhs.det();
    const Operator2 inv{lhs(1, 1) / d, -lhs(0, 1) / d, -lhs(1, 0) / d, lhs(0, 0) / d};
    return inv * (rhs * psi);
}

inline Complex unit_phase(Complex z) {
    const double a = std::abs(z);
    return a > 0.0 ? z / a : Complex{1.0};
}

inline std::vector<double> cumulative_2g_plus_omega(const HamiltonianSpec& spec, const TimeGrid& grid) {
    return cumulative_simpson<double>([&spec](double t) { return 2.0 * spec.g(t) + spec.omega(t); }, grid);
}

}  // namespace detail

/// Unit null vector of a ladder operator B. The phase follows `previous`
/// propagated by one implicit Schroedinger step; without a previous state the
/// first sizeable component is made real and positive.
inline EvolvedVacuum vacuum_nullspace_fallback(const Operator2& b, const std::optional<EvolvedVacuum>& previous,
                                               const HamiltonianSpec& spec, double t, double dt) {
    const double scale = std::max(b.max_abs(), 1e-300);
    if (b.max_abs() == 0.0 || std::abs(b.det()) > 1e-6 * scale * scale)
        throw ContractError("vacuum_nullspace_fallback: B has no one-dimensional null space");
    const StateVec2 r0{b(0, 1), -b(0, 0)};
    const StateVec2 r1{b(1, 1), -b(1, 0)};
    StateVec2 v = (r0.norm2() >= r1.norm2() ? r0 : r1).normalized();
    if (previous) {
        const StateVec2 pred = detail::cayley_step(hamiltonian_matrix(spec, t - 0.5 * dt), dt, previous->state);
        v = detail::unit_phase(inner(v, pred)) * v;
    } else {
        const Complex lead = std::abs(v.amp0) > 1e-8 ? v.amp0 : v.amp1;
        v = std::conj(detail::unit_phase(lead)) * v;
    }
    return {v, VacuumRoute::nullspace};
}

/// Vacuum of B(t) along a nu trajectory:
///   alpha0 = sqrt|nu_-| exp[(i/2)(phi_{nu_-} - int_0^t (2g + w))],
///   alpha1 = alpha0 nu_3 / (2 nu_-),
/// with phi_{nu_-} the continuously unwound phase of nu_-. Both are scaled by
/// lambda2^{-1/4}. Where |nu_-| < vacuum_nu_min the null-space route takes
/// over; the closed form is re-phased to stay continuous afterwards.
inline std::vector<EvolvedVacuum> vacuum_trajectory(const NuTrajectory& traj, const HamiltonianSpec& spec,
                                                    const ToleranceConfig& tol = {}) {
    const TimeGrid& grid = traj.grid;
    const auto dyn = detail::cumulative_2g_plus_omega(spec, grid);
    std::vector<EvolvedVacuum> out;
    out.reserve(traj.nu.size());
    bool in_segment = false;
    double theta = 0.0;
    Complex offset{1.0};
    for (std::size_t k = 0; k < traj.nu.size(); ++k) {
        const NuVector& nu = traj.nu[k];
        const double t = grid.t(k);
        if (std::abs(nu.minus) < tol.vacuum_nu_min) {
            in_segment = false;
            std::optional<EvolvedVacuum> prev;
            if (!out.empty()) prev = out.back();
            out.push_back(vacuum_nullspace_fallback(build_B(nu), prev, spec, t, grid.dt));
            continue;
        }
        const double raw = std::arg(nu.minus);
        theta = in_segment ? theta + wrap_angle(raw - theta) : raw;
        const double norm = std::pow(traj.constants[k].lambda2, -0.25);
        const Complex a0 = norm * std::sqrt(std::abs(nu.minus)) * std::polar(1.0, 0.5 * (theta - dyn[k]));
        StateVec2 v{a0, a0 * nu.three / (2.0 * nu.minus)};
        if (!in_segment && !out.empty()) {
            const StateVec2 pred = detail::cayley_step(hamiltonian_matrix(spec, t - 0.5 * grid.dt), grid.dt, out.back().state);
            offset = detail::unit_phase(inner(v, pred));
        }
        in_segment = true;
        out.push_back({offset * v, VacuumRoute::closed_form});
    }
    return out;
}

inline EvolvedVacuum vacuum_from_nu(const NuTrajectory& traj, const HamiltonianSpec& spec, std::size_t k,
                                    const ToleranceConfig& tol = {}) {
    if (k >= traj.nu.size()) throw RangeError("vacuum_from_nu: index out of range");
    NuTrajectory head{traj.grid, {traj.nu.begin(), traj.nu.begin() + static_cast<std::ptrdiff_t>(k + 1)},
                      {traj.constants.begin(), traj.constants.begin() + static_cast<std::ptrdiff_t>(k + 1)}};
    return vacuum_trajectory(head, spec, tol).back();
}

/// State annihilated by B^dagger(t) (the B-excited state), in the form
///   alpha0 = sqrt|nu_+| exp[-(i/2)(phi_{nu_+} + int_0^t (2g + w))],
///   alpha1 = alpha0 nu_3^* / (2 nu_+^*).
/// Requires |nu_+| >= nu_min at every index.
inline std::vector<StateVec2> excited_trajectory(const NuTrajectory& traj, const HamiltonianSpec& spec,
                                                 const ToleranceConfig& tol = {}) {
    const auto dyn = detail::cumulative_2g_plus_omega(spec, traj.grid);
    std::vector<StateVec2> out;
    out.reserve(traj.nu.size());
    double theta = 0.0;
    for (std::size_t k = 0; k < traj.nu.size(); ++k) {
        const NuVector& nu = traj.nu[k];
        if (std::abs(nu.plus) < tol.nu_min)
            throw SingularReductionError("excited_trajectory: |nu_plus| below nu_min", traj.grid.t(k));
        const double raw = std::arg(nu.plus);
        theta = k == 0 ? raw : theta + wrap_angle(raw - theta);
        const double norm = std::pow(traj.constants[k].lambda2, -0.25);
        const Complex a0 = norm * std::sqrt(std::abs(nu.plus)) * std::polar(1.0, -0.5 * (theta + dyn[k]));
        out.push_back({a0, a0 * std::conj(nu.three) / (2.0 * std::conj(nu.plus))});
    }
    return out;
}

/// max_k ||i (psi_{k+1} - psi_{k-1}) / 2dt - H(t_k) psi_k|| over interior points.
inline double schrodinger_residual(const HamiltonianSpec& spec, const TimeGrid& grid,
                                   const std::function<StateVec2(std::size_t)>& psi) {
    double worst = 0.0;
    for (std::size_t k = 1; k + 1 < grid.size(); ++k) {
        const StateVec2 d = (psi(k + 1) - psi(k - 1)) / Complex{2.0 * grid.dt};
        const StateVec2 r = kI * d - hamiltonian_matrix(spec, grid.t(k)) * psi(k);
        worst = std::max(worst, r.norm());
    }
    return worst;
}

// -- coherent states --------------------------------------------------------

/// |zeta;t> = e^{-zeta^* zeta/2} (|0;t> - zeta B^dagger(t) |0;t>), zeta -> scale * zeta.
inline GrassmannKet coherent_state(Complex scale, const EvolvedVacuum& vac, const NuVector& nu) {
    const StateVec2 excited = build_B_dagger(nu) * vac.state;
    const GrassmannElement norm{1.0, 0.0, 0.0, -0.5 * std::norm(scale)};
    const GrassmannElement z = scale * GrassmannElement::zeta();
    return norm * GrassmannKet::from_state(vac.state) - (norm * z) * GrassmannKet::from_state(excited);
}

/// max-abs coefficient of B |psi> - (scale zeta) |psi>, with B acting as an odd operator.
inline double coherent_eigen_residual(const Operator2& b, const GrassmannKet& psi, Complex scale = 1.0) {
    const GrassmannKet lhs = apply(b, OperatorParity::odd, psi);
    const GrassmannKet rhs = (scale * GrassmannElement::zeta()) * psi;
    return (lhs - rhs).max_abs();
}

/// Evolved canonical coherent state: (1 - zeta^* zeta/2)(U|0> - zeta U|1>).
inline GrassmannKet evolved_canonical_coherent(const Operator2& u) {
    const GrassmannElement norm{1.0, 0.0, 0.0, -0.5};
    const StateVec2 u0{u(0, 0), u(1, 0)};
    const StateVec2 u1{u(0, 1), u(1, 1)};
    return norm * GrassmannKet::from_state(u0) - GrassmannElement::zeta() * GrassmannKet::from_state(u1);
}

/// Best r in b|psi> ~ (r zeta)|psi> and the norm of what is left over.
struct EigenFit {
    Complex ratio{};
    double residual = 0.0;
};

inline EigenFit fit_annihilation_eigenvalue(const GrassmannKet& psi) {
    const GrassmannKet x = apply_fermion_op(FermionOp::b, psi);
    const GrassmannKet y = GrassmannElement::zeta() * psi;
    Complex num{};
    double den = 0.0;
    for (int s = 0; s < 4; ++s) {
        num += std::conj(y.a0[s]) * x.a0[s] + std::conj(y.a1[s]) * x.a1[s];
        den += std::norm(y.a0[s]) + std::norm(y.a1[s]);
    }
    const Complex r = den > 0.0 ? num / den : Complex{};
    double res2 = 0.0;
    for (int s = 0; s < 4; ++s) res2 += std::norm(x.a0[s] - r * y.a0[s]) + std::norm(x.a1[s] - r * y.a1[s]);
    return {r, std::sqrt(res2)};
}

struct CoherenceReport {
    TimeGrid grid;
    /// (U b U^dagger)_{01}: the b coefficient of the transported annihilator.
    std::vector<Complex> beta;
    /// Measured eigenvalue ratio zeta(t)/zeta of b on the evolved state.
    std::vector<Complex> zeta_ratio;
    std::vector<double> eigen_residual;

    double max_eigen_residual() const {
        double r = 0.0;
        for (double x : eigen_residual) r = std::max(r, x);
        return r;
    }
};

/// Evolves |zeta> with U(t) and measures at every grid time whether the
/// state is still an eigenstate of the static b.
inline CoherenceReport coherence_check(const HamiltonianSpec& spec, double t_final, const PropagatorConfig& cfg = {}) {
    const auto traj = evolve_unitary(spec, t_final, cfg);
    const auto b = ladder_operators().b;
    CoherenceReport out{traj.grid, {}, {}, {}};
    for (const auto& u : traj.u) {
        out.beta.push_back((u * b * u.adjoint())(0, 1));
        const EigenFit fit = fit_annihilation_eigenvalue(evolved_canonical_coherent(u));
        out.zeta_ratio.push_back(fit.ratio);
        out.eigen_residual.push_back(fit.residual);
    }
    return out;
}

// -- Lewis-Riesenfeld phases -----------------------------------------------

struct PhaseRecord {
    double phi0 = 0.0;
    double phi1 = 0.0;
    double phi_geometric = 0.0;
    double phi_dynamical = 0.0;

    double phi() const noexcept { return phi1 - phi0; }
};

/// Extra smooth phase chi_n(t) applied to the gauge-fixed eigenvectors.
using GaugeTwist = std::function<double(int n, double t)>;

struct PhaseAnalysis {
    TimeGrid grid;
    std::vector<PhaseRecord> records;
    /// Gauge-fixed eigenvectors of B^dagger B: index 0 eigenvalue 0, index 1 eigenvalue 1.
    std::vector<std::array<StateVec2, 2>> eigenvectors;
    /// <n~|H|n~>
    std::vector<std::array<double, 2>> energies;

    /// e^{i phi_n} |n~;t_k>
    StateVec2 phased_state(int n, std::size_t k) const {
        const double phase = n == 0 ? records[k].phi0 : records[k].phi1;
        return std::polar(1.0, phase) * eigenvectors[k][n];
    }
};

/// Eigenvectors of B^dagger B in the gauge where <0|0~> and <1|1~> are real
/// and non-negative, so static eigenvectors stay the Fock states.
inline std::array<StateVec2, 2> gauge_fixed_eigenvectors(const NuVector& nu) {
    const Operator2 b = build_B(nu);
    const auto eig = eigen_hermitian(b.adjoint() * b);
    if (!(eig.values[1] - eig.values[0] > 0.5))
        throw ContractError("lr_phases: B^dagger B is (nearly) degenerate; ladder conditions broken");
    StateVec2 v0 = eig.vectors[0];
    v0 = std::conj(detail::unit_phase(v0.amp0)) * v0;
    v0.amp0 = std::abs(v0.amp0);
    return {v0, StateVec2{-std::conj(v0.amp1), v0.amp0}};
}

/// How the connection <n~| i d/dt |n~> is integrated over a step.
enum class ConnectionScheme {
    /// -arg <n~_k|n~_{k+1}>: insensitive to how fast the gauge phase turns.
    overlap,
    /// Central differences of the eigenvectors, trapezoid in time.
    central_difference,
};

/// phi_n(t) = int_0^t <n~|(i d/dt - H)|n~>, with the split of phi = phi1 - phi0
/// into the connection integral phi^G and the rest phi^D. Energies are
/// integrated with the trapezoid rule.
inline PhaseAnalysis lr_phases(const NuTrajectory& traj, const HamiltonianSpec& spec, const GaugeTwist& twist = {},
                               ConnectionScheme scheme = ConnectionScheme::overlap) {
    const TimeGrid& grid = traj.grid;
    const std::size_t n = traj.nu.size();
    if (n < 3) throw ContractError("lr_phases: trajectory too short");
    PhaseAnalysis out{grid, std::vector<PhaseRecord>(n), {}, {}};
    out.eigenvectors.reserve(n);
    out.energies.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        auto v = gauge_fixed_eigenvectors(traj.nu[k]);
        if (twist)
            for (int m = 0; m < 2; ++m) v[m] = std::polar(1.0, twist(m, grid.t(k))) * v[m];
        const Operator2 h = hamiltonian_matrix(spec, grid.t(k));
        out.energies.push_back({inner(v[0], h * v[0]).real(), inner(v[1], h * v[1]).real()});
        out.eigenvectors.push_back(v);
    }
    const double dt = grid.dt;
    const auto& e = out.eigenvectors;
    // connection integral over [t_{k-1}, t_k]
    std::vector<std::array<double, 2>> step(n);
    if (scheme == ConnectionScheme::overlap) {
        for (std::size_t k = 1; k < n; ++k)
            for (int m = 0; m < 2; ++m) step[k][m] = -std::arg(inner(e[k - 1][m], e[k][m]));
    } else {
        std::vector<std::array<double, 2>> conn(n);
        for (std::size_t k = 0; k < n; ++k) {
            for (int m = 0; m < 2; ++m) {
                StateVec2 d;
                if (k == 0)
                    d = (-3.0 * e[0][m] + 4.0 * e[1][m] - e[2][m]) / Complex{2.0 * dt};
                else if (k + 1 == n)
                    d = (3.0 * e[k][m] - 4.0 * e[k - 1][m] + e[k - 2][m]) / Complex{2.0 * dt};
                else
                    d = (e[k + 1][m] - e[k - 1][m]) / Complex{2.0 * dt};
                conn[k][m] = (kI * inner(e[k][m], d)).real();
            }
        }
        for (std::size_t k = 1; k < n; ++k)
            for (int m = 0; m < 2; ++m) step[k][m] = 0.5 * dt * (conn[k - 1][m] + conn[k][m]);
    }
    for (std::size_t k = 1; k < n; ++k) {
        const PhaseRecord& p = out.records[k - 1];
        PhaseRecord& r = out.records[k];
        const auto& en = out.energies;
        r.phi0 = p.phi0 + step[k][0] - 0.5 * dt * (en[k - 1][0] + en[k][0]);
        r.phi1 = p.phi1 + step[k][1] - 0.5 * dt * (en[k - 1][1] + en[k][1]);
        r.phi_geometric = p.phi_geometric + step[k][1] - step[k][0];
        r.phi_dynamical = r.phi() - r.phi_geometric;
    }
    return out;
}

/// (phi^G, phi^D) at grid index k.
inline std::pair<double, double> geometric_phase(const PhaseAnalysis& a, std::size_t k) {
    if (k >= a.records.size()) throw RangeError("geometric_phase: index out of range");
    return {a.records[k].phi_geometric, a.records[k].phi_dynamical};
}

/// Second route for phi^G: phi taken from the propagator,
///   phi_oracle(t) = arg <1~;t|U|1~;0> - arg <0~;t|U|0~;0>,
/// and phi^G = phi_oracle + int (<1~|H|1~> - <0~|H|0~>). Returns the largest
/// difference to the connection-integral route.
inline double phase_route_consistency(const PhaseAnalysis& a, const UnitaryTrajectory& oracle) {
    const std::size_t n = a.records.size();
    if (oracle.u.size() != n) throw ContractError("phase_route_consistency: grids differ");
    std::vector<Complex> o0(n), o1(n);
    for (std::size_t k = 0; k < n; ++k) {
        o0[k] = inner(a.eigenvectors[k][0], oracle.u[k] * a.eigenvectors[0][0]);
        o1[k] = inner(a.eigenvectors[k][1], oracle.u[k] * a.eigenvectors[0][1]);
    }
    const auto p0 = unwrap_phase(o0);
    const auto p1 = unwrap_phase(o1);
    double energy_gap = 0.0;
    double worst = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        if (k > 0)
            energy_gap += 0.5 * a.grid.dt *
                          (a.energies[k - 1][1] - a.energies[k - 1][0] + a.energies[k][1] - a.energies[k][0]);
        const double phi_oracle = (p1[k] - p1[0]) - (p0[k] - p0[0]);
        worst = std::max(worst, std::abs(phi_oracle + energy_gap - a.records[k].phi_geometric));
    }
    return worst;
}

/// (1 - zeta^* zeta/2)(e^{i phi0}|0~> - zeta e^{i phi1}|1~>) at grid index k.
inline GrassmannKet phased_coherent_state(const PhaseAnalysis& a, std::size_t k) {
    const GrassmannElement norm{1.0, 0.0, 0.0, -0.5};
    return norm * GrassmannKet::from_state(a.phased_state(0, k)) -
           (norm * GrassmannElement::zeta()) * GrassmannKet::from_state(a.phased_state(1, k));
}

/// |0~><1~| at grid index k.
inline Operator2 lr_ladder(const PhaseAnalysis& a, std::size_t k) {
    return outer(a.eigenvectors[k][0], a.eigenvectors[k][1]);
}

/// Largest Schroedinger residual of the phased eigenstates e^{i phi_n}|n~>.
inline double phased_schrodinger_residual(const PhaseAnalysis& a, const HamiltonianSpec& spec) {
    double worst = 0.0;
    for (int m = 0; m < 2; ++m)
        worst = std::max(worst, schrodinger_residual(spec, a.grid, [&a, m](std::size_t k) { return a.phased_state(m, k); }));
    return worst;
}

/// Compares B~(t) = |0~><1~| with the invariant B(t): the fitted phase of
/// B~ B^dagger must follow phi(t) = phi1 - phi0. Returns the largest wrapped
/// mismatch after removing the t = 0 offset.
inline double lr_invariant_phase_mismatch(const PhaseAnalysis& a, const NuTrajectory& traj) {
    double worst = 0.0;
    double fit0 = 0.0;
    for (std::size_t k = 0; k < a.records.size(); ++k) {
        const Operator2 bt = outer(a.eigenvectors[k][0], a.eigenvectors[k][1]);
        const double fit = std::arg((bt * build_B_dagger(traj.nu[k])).trace());
        if (k == 0) fit0 = fit;
        worst = std::max(worst, std::abs(wrap_angle((fit - fit0) - (a.records[k].phi() - a.records[0].phi()))));
    }
    return worst;
}

}  // namespace ffo
