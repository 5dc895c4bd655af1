#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include "ffo/config.hpp"
#include "ffo/grassmann.hpp"
#include "ffo/invariants.hpp"
#include "ffo/propagator.hpp"
#include "ffo/reduction.hpp"
#include "ffo/report.hpp"
#include "ffo/states.hpp"

namespace ffo {

/// Acceptance limits used by the scenario checks.
struct CheckLimits {
    double lambda_drift = 1e-7;
    double oracle = 1e-6;
    double invariance = 1e-5;
    double norm_drift = 1e-8;
    double annihilation = 1e-6;
    double schrodinger = 1e-5;
    double vacuum_norm = 1e-10;
    double frame = 1e-8;
    double closure = 1e-5;
    double lambda1_eps = 1e-12;
    double lambda2_routes = 1e-10;
    double first_integral_drift = 1e-5;
    double first_integral_match = 1e-6;
    double eigen_residual_unforced = 1e-7;
    double coherence_witness = 1e-3;
    double forcing_witness = 0.1;
    double phase_consistency = 1e-5;
    double stationary_phase = 1e-6;
    double gauge_independence = 1e-6;
    double completeness = 1e-14;
    /// run_all includes the epsilon reduction only when min |f| reaches this.
    double reduce_f_floor = 0.2;
};

namespace detail {

inline void require_calibrated(const NuVector& nu0, const char* mode) {
    const auto r = ladder_conditions_check(nu0);
    if (!(std::max(r.residual_B2, r.residual_anticomm) <= 1e-8))
        throw ConfigError("initial.nu0", std::string("mode ") + mode + " needs B^2 = 0 and {B, B^dagger} = 1");
}

inline bool is_constant(const TimeSignal& s) { return std::holds_alternative<signal::Constant>(s.variant()); }

inline double max_abs_f(const HamiltonianSpec& spec, const TimeGrid& grid) {
    double r = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) r = std::max(r, std::abs(spec.f(grid.t(k))));
    return r;
}

inline double min_abs_f(const HamiltonianSpec& spec, const TimeGrid& grid) {
    double r = INFINITY;
    for (std::size_t k = 0; k < grid.size(); ++k) r = std::min(r, std::abs(spec.f(grid.t(k))));
    return r;
}

inline void push_complex(std::vector<double>& row, Complex z) {
    row.push_back(z.real());
    row.push_back(z.imag());
}

inline std::vector<std::string> nu_columns() {
    return {"nu_minus_re", "nu_minus_im", "nu_plus_re", "nu_plus_im", "nu3_re", "nu3_im"};
}

inline void push_nu(std::vector<double>& row, const NuVector& nu) {
    push_complex(row, nu.minus);
    push_complex(row, nu.plus);
    push_complex(row, nu.three);
}

inline RunReport make_report(const ScenarioConfig& cfg, Mode mode) {
    RunReport r;
    r.mode = mode_name(mode);
    r.grid = TimeGrid::over(cfg.run.t_final, cfg.run.dt);
    return r;
}

}  // namespace detail

/// States and propagator: U(t), psi(t) = U psi0, the evolved vacuum and the
/// coherent state built on it.
inline RunResult run_evolve(const ScenarioConfig& cfg, const CheckLimits& lim = {}) {
    const HamiltonianSpec& spec = cfg.hamiltonian;
    const RunSettings& run = cfg.run;
    const double psi_norm = cfg.initial.state.norm();
    if (!(psi_norm > 0.0) || !std::isfinite(psi_norm)) throw ConfigError("initial.state", "must be a nonzero finite vector");
    detail::require_calibrated(cfg.initial.nu0, "evolve");
    const StateVec2 psi0 = cfg.initial.state.normalized();

    const auto u = evolve_unitary(spec, run.t_final, run.propagator());
    const auto nu = integrate_nu(spec, cfg.initial.nu0, run.t_final, run.dt);
    const auto vac = vacuum_trajectory(nu, spec, run.tolerances);

    RunResult out{detail::make_report(cfg, Mode::evolve), {}};
    Table table{{"t", "psi0_re", "psi0_im", "psi1_re", "psi1_im", "norm", "unitarity_defect", "vac0_re", "vac0_im",
                 "vac1_re", "vac1_im", "vac_annihilation", "cs_eigen_residual"},
                {}};
    double norm_drift = 0.0, annihilation = 0.0, vac_norm = 0.0, cs_residual = 0.0, frame = 0.0;
    std::size_t fallback = 0;
    for (std::size_t k = 0; k < u.u.size(); ++k) {
        const StateVec2 psi = u.u[k] * psi0;
        const Operator2 b = build_B(nu.nu[k]);
        const StateVec2& v = vac[k].state;
        const double ann = (b * v).norm();
        const double cs = coherent_eigen_residual(b, coherent_state(1.0, vac[k], nu.nu[k]));
        const StateVec2 w = b.adjoint() * v;
        const Operator2 gram{inner(v, v), inner(v, w), inner(w, v), inner(w, w)};
        norm_drift = std::max(norm_drift, std::abs(psi.norm() - 1.0));
        annihilation = std::max(annihilation, ann);
        vac_norm = std::max(vac_norm, std::abs(v.norm2() - 1.0));
        cs_residual = std::max(cs_residual, cs);
        frame = std::max(frame, max_abs_diff(gram, Operator2::identity()));
        fallback += vac[k].route == VacuumRoute::nullspace;
        std::vector<double> row{u.grid.t(k)};
        detail::push_complex(row, psi.amp0);
        detail::push_complex(row, psi.amp1);
        row.push_back(psi.norm());
        row.push_back(unitarity_defect(u.u[k]));
        detail::push_complex(row, v.amp0);
        detail::push_complex(row, v.amp1);
        row.push_back(ann);
        row.push_back(cs);
        table.rows.push_back(std::move(row));
    }
    RunReport& r = out.report;
    r.check_max("unitarity_defect", u.max_unitarity_defect(), run.tolerances.unitarity);
    r.check_max("norm_drift", norm_drift, lim.norm_drift);
    r.check_max("vacuum_annihilation", annihilation, lim.annihilation);
    r.check_max("vacuum_schrodinger",
                schrodinger_residual(spec, nu.grid, [&vac](std::size_t k) { return vac[k].state; }), lim.schrodinger);
    r.check_max("vacuum_norm", vac_norm, lim.vacuum_norm);
    r.check_max("frame_overlap", frame, lim.frame);
    r.check_max("cs_eigen_residual", cs_residual, run.tolerances.algebraic);
    r.metric("vacuum_fallback_points", static_cast<double>(fallback));
    out.tables.emplace_back("evolve", std::move(table));
    return out;
}

/// nu system, constants of motion and comparison with U B(0) U^dagger.
inline RunResult run_invariants(const ScenarioConfig& cfg, const CheckLimits& lim = {}) {
    const HamiltonianSpec& spec = cfg.hamiltonian;
    const RunSettings& run = cfg.run;
    const auto nu = integrate_nu(spec, cfg.initial.nu0, run.t_final, run.dt);
    const auto u = evolve_unitary(spec, run.t_final, run.propagator());
    const Operator2 b0 = build_B(cfg.initial.nu0);
    const bool free = spec.unforced();
    std::vector<NuVector> closed;
    if (free) closed = free_oscillator_trajectory(cfg.initial.nu0, spec.omega_signal(), nu.grid);

    RunResult out{detail::make_report(cfg, Mode::invariants), {}};
    Table table{{"t"}, {}};
    for (auto& c : detail::nu_columns()) table.columns.push_back(c);
    for (const char* c : {"lambda1_abs", "lambda2", "oracle_deviation", "invariance_residual"}) table.columns.push_back(c);
    if (free) table.columns.push_back("closed_form_deviation");
    double oracle = 0.0, invariance = 0.0, closed_dev = 0.0;
    for (std::size_t k = 0; k < nu.nu.size(); ++k) {
        const double dev = max_abs_diff(build_B(nu.nu[k]), heisenberg_oracle(u.u[k], b0, run.tolerances.unitarity));
        const bool interior = k > 0 && k + 1 < nu.nu.size();
        const double inv = interior ? invariance_residual(spec, nu, k) : NAN;
        oracle = std::max(oracle, dev);
        if (interior) invariance = std::max(invariance, inv);
        std::vector<double> row{nu.grid.t(k)};
        detail::push_nu(row, nu.nu[k]);
        row.push_back(std::abs(nu.constants[k].lambda1));
        row.push_back(nu.constants[k].lambda2);
        row.push_back(dev);
        row.push_back(inv);
        if (free) {
            const double cd = (closed[k] - nu.nu[k]).max_abs();
            closed_dev = std::max(closed_dev, cd);
            row.push_back(cd);
        }
        table.rows.push_back(std::move(row));
    }
    RunReport& r = out.report;
    r.check_max("lambda1_drift", nu.max_lambda1_drift(), lim.lambda_drift);
    r.check_max("lambda2_drift", nu.max_lambda2_drift(), lim.lambda_drift);
    r.check_max("oracle_deviation", oracle, lim.oracle);
    r.check_max("invariance_residual", invariance, lim.invariance);
    if (free) r.check_max("free_oscillator_closed_form", closed_dev, run.tolerances.dynamical);
    r.metric("unitarity_defect", u.max_unitarity_defect());
    out.tables.emplace_back("invariants", std::move(table));
    return out;
}

/// epsilon route to the nu coefficients, its closure against the nu system
/// and the first integral of the third-order equation.
inline RunResult run_reduce(const ScenarioConfig& cfg, const CheckLimits& lim = {}) {
    const HamiltonianSpec& spec = cfg.hamiltonian;
    const RunSettings& run = cfg.run;
    const ToleranceConfig& tol = run.tolerances;
    const auto eps = integrate_epsilon(spec, cfg.initial.epsilon0, run.t_final, run.dt, tol);
    const auto nu = integrate_nu(spec, cfg.initial.nu0, run.t_final, run.dt);

    RunResult out{detail::make_report(cfg, Mode::reduce), {}};
    Table table{{"t", "eps_re", "eps_im", "eps_dot_re", "eps_dot_im"}, {}};
    for (auto& c : detail::nu_columns()) table.columns.push_back(c);
    for (const char* c : {"lambda1_abs", "lambda2", "lambda2_eps", "closure", "third_order_residual", "lambda_eps_abs",
                          "lambda_nu_re", "lambda_nu_im"})
        table.columns.push_back(c);

    double closure = 0.0, lambda1 = 0.0, lambda2_routes = 0.0, third = 0.0, third_halved = 0.0, lambda_eps = 0.0;
    double lambda_drift = 0.0, lambda_match = 0.0;
    double l2_min = INFINITY, l2_max = -INFINITY;
    Complex lambda_first{};
    for (std::size_t k = 0; k < eps.states.size(); ++k) {
        const double t = eps.grid.t(k);
        const EpsilonState& e = eps.states[k];
        const NuVector n = nu_from_epsilon(spec, t, e, tol);
        const MotionConstants c = motion_constants(n);
        const double l2e = lambda2_from_epsilon(spec, t, e, tol);
        const double cl = (nu_dot_from_epsilon(spec, t, e, tol) - nu_rhs(spec, t, n)).max_abs();
        const NuPlusJet jet = nu_plus_jet(spec, t, n);
        const double res3 = third_order_residual(spec, t, jet, ThirdOrderForm::derived, tol);
        const Complex lam_e = first_integral_lambda(spec, t, jet.p, jet.dp, jet.ddp, tol);
        const NuPlusJet jn = nu_plus_jet(spec, t, nu.nu[k]);
        const Complex lam_n = first_integral_lambda(spec, t, jn.p, jn.dp, jn.ddp, tol);
        if (k == 0) lambda_first = lam_n;
        closure = std::max(closure, cl);
        lambda1 = std::max(lambda1, std::abs(c.lambda1));
        lambda2_routes = std::max(lambda2_routes, std::abs(c.lambda2 - l2e));
        l2_min = std::min(l2_min, c.lambda2);
        l2_max = std::max(l2_max, c.lambda2);
        third = std::max(third, res3);
        third_halved = std::max(third_halved, third_order_residual(spec, t, jet, ThirdOrderForm::halved_omega_rate, tol));
        lambda_eps = std::max(lambda_eps, std::abs(lam_e));
        lambda_drift = std::max(lambda_drift, std::abs(lam_n - lambda_first));
        lambda_match = std::max(lambda_match, std::abs(lam_n - 16.0 * nu.constants[k].lambda1));
        std::vector<double> row{t};
        detail::push_complex(row, e.eps);
        detail::push_complex(row, e.eps_dot);
        detail::push_nu(row, n);
        row.push_back(std::abs(c.lambda1));
        row.push_back(c.lambda2);
        row.push_back(l2e);
        row.push_back(cl);
        row.push_back(res3);
        row.push_back(std::abs(lam_e));
        detail::push_complex(row, lam_n);
        table.rows.push_back(std::move(row));
    }
    RunReport& r = out.report;
    r.check_max("closure", closure, lim.closure);
    r.check_max("lambda1_eps", lambda1, lim.lambda1_eps);
    r.check_max("lambda2_drift", l2_max - l2_min, lim.lambda_drift);
    r.check_max("lambda2_routes", lambda2_routes, lim.lambda2_routes);
    r.check_max("first_integral_calibrated", lambda_eps, lim.first_integral_match);
    r.check_max("first_integral_drift", lambda_drift, lim.first_integral_drift);
    r.check_max("first_integral_vs_lambda1", lambda_match, lim.first_integral_match);
    r.check_max("third_order_residual", third, lim.closure);
    r.metric("third_order_residual_halved_form", third_halved);
    r.check_max("epsilon_prime_round_trip", epsilon_prime_round_trip(spec, eps, tol), tol.dynamical);
    out.tables.emplace_back("reduce", std::move(table));
    return out;
}

/// Whether the evolved canonical coherent state stays an eigenstate of b.
inline RunResult run_coherence(const ScenarioConfig& cfg, const CheckLimits& lim = {}) {
    const HamiltonianSpec& spec = cfg.hamiltonian;
    const RunSettings& run = cfg.run;
    const CoherenceReport rep = coherence_check(spec, run.t_final, run.propagator());
    const bool free = spec.unforced();
    std::vector<double> phase;
    if (free) phase = cumulative_simpson<double>([&spec](double t) { return spec.omega(t); }, rep.grid);

    RunResult out{detail::make_report(cfg, Mode::coherence), {}};
    Table table{{"t", "beta_re", "beta_im", "zeta_ratio_re", "zeta_ratio_im", "eigen_residual"}, {}};
    if (free) table.columns.push_back("zeta_ratio_deviation");
    double ratio_dev = 0.0;
    for (std::size_t k = 0; k < rep.beta.size(); ++k) {
        std::vector<double> row{rep.grid.t(k)};
        detail::push_complex(row, rep.beta[k]);
        detail::push_complex(row, rep.zeta_ratio[k]);
        row.push_back(rep.eigen_residual[k]);
        if (free) {
            const double d = std::abs(rep.zeta_ratio[k] - std::polar(1.0, -phase[k]));
            ratio_dev = std::max(ratio_dev, d);
            row.push_back(d);
        }
        table.rows.push_back(std::move(row));
    }
    RunReport& r = out.report;
    const double max_f = detail::max_abs_f(spec, rep.grid);
    r.metric("max_abs_f", max_f);
    if (free) {
        r.check_max("eigen_residual", rep.max_eigen_residual(), lim.eigen_residual_unforced);
        r.check_max("zeta_ratio_deviation", ratio_dev, run.tolerances.dynamical);
    } else if (max_f >= lim.forcing_witness) {
        r.check_min("coherence_broken", rep.max_eigen_residual(), lim.coherence_witness);
    } else {
        r.metric("eigen_residual", rep.max_eigen_residual());
    }
    out.tables.emplace_back("coherence", std::move(table));
    return out;
}

/// Lewis-Riesenfeld phases with the geometric/dynamical split.
inline RunResult run_phases(const ScenarioConfig& cfg, const CheckLimits& lim = {}) {
    const HamiltonianSpec& spec = cfg.hamiltonian;
    const RunSettings& run = cfg.run;
    detail::require_calibrated(cfg.initial.nu0, "phases");
    const auto nu = integrate_nu(spec, cfg.initial.nu0, run.t_final, run.dt);
    const auto u = evolve_unitary(spec, run.t_final, run.propagator());
    const PhaseAnalysis a = lr_phases(nu, spec);
    const double t_end = nu.grid.t_final();
    const auto twist = [t_end](int n, double t) { return 0.7 * (n + 1) * std::sin(std::numbers::pi * t / t_end); };
    const PhaseAnalysis twisted = lr_phases(nu, spec, twist);

    RunResult out{detail::make_report(cfg, Mode::phases), {}};
    Table table{{"t", "phi0", "phi1", "phi", "phi_geometric", "phi_dynamical"}, {}};
    double split = 0.0, cs = 0.0;
    for (std::size_t k = 0; k < a.records.size(); ++k) {
        const PhaseRecord& p = a.records[k];
        split = std::max(split, std::abs(p.phi_geometric + p.phi_dynamical - p.phi()));
        cs = std::max(cs, coherent_eigen_residual(lr_ladder(a, k), phased_coherent_state(a, k), std::polar(1.0, p.phi())));
        table.rows.push_back({nu.grid.t(k), p.phi0, p.phi1, p.phi(), p.phi_geometric, p.phi_dynamical});
    }
    RunReport& r = out.report;
    r.check_max("phased_schrodinger", phased_schrodinger_residual(a, spec), lim.schrodinger);
    r.check_max("route_consistency", phase_route_consistency(a, u), lim.phase_consistency);
    r.check_max("lr_invariant_phase", lr_invariant_phase_mismatch(a, nu), lim.phase_consistency);
    r.check_max("split_identity", split, run.tolerances.algebraic);
    r.check_max("phased_cs_eigen_residual", cs, run.tolerances.algebraic);
    const PhaseRecord& end = a.records.back();
    const PhaseRecord& end_t = twisted.records.back();
    r.check_max("gauge_independence",
                std::max(std::abs(end.phi_geometric - end_t.phi_geometric), std::abs(end.phi_dynamical - end_t.phi_dynamical)),
                lim.gauge_independence);
    const NuVector& n0 = cfg.initial.nu0;
    const bool stationary = spec.unforced() && detail::is_constant(spec.omega_signal()) && detail::is_constant(spec.g_signal());
    if (stationary && n0.plus == Complex{} && n0.three == Complex{}) {
        const double w0 = spec.omega(0.0), g0 = spec.g(0.0);
        double dev = 0.0;
        for (std::size_t k = 0; k < a.records.size(); ++k) {
            const double t = nu.grid.t(k);
            const PhaseRecord& p = a.records[k];
            dev = std::max({dev, std::abs(p.phi0 + g0 * t), std::abs(p.phi1 + (g0 + w0) * t), std::abs(p.phi_geometric)});
        }
        r.check_max("stationary_closed_form", dev, lim.stationary_phase);
    }
    r.metric("phi_geometric_final", end.phi_geometric);
    r.metric("phi_dynamical_final", end.phi_dynamical);
    out.tables.emplace_back("phases", std::move(table));
    return out;
}

/// Grassmann algebra rules, Berezin integrals, completeness, eigen-relation.
inline RunResult run_grassmann_selftest(const ScenarioConfig& cfg, const CheckLimits& lim = {}) {
    RunResult out{detail::make_report(cfg, Mode::grassmann_selftest), {}};
    RunReport& r = out.report;
    using G = GrassmannElement;
    const G z = G::zeta(), zs = G::zeta_star();
    double algebra = 0.0;
    algebra = std::max(algebra, (z * z).max_abs());
    algebra = std::max(algebra, (zs * zs).max_abs());
    algebra = std::max(algebra, (z * zs + zs * z).max_abs());
    algebra = std::max(algebra, (zs * z - G::top()).max_abs());
    double berezin = 0.0;
    berezin = std::max(berezin, std::abs(berezin_integrate(G{1.0})));
    berezin = std::max(berezin, std::abs(berezin_integrate(z)));
    berezin = std::max(berezin, std::abs(berezin_integrate(zs)));
    berezin = std::max(berezin, std::abs(berezin_integrate(z * zs) - 1.0));
    const double eigen = (apply_fermion_op(FermionOp::b, coherent_ket()) - z * coherent_ket()).max_abs();
    r.check_max("algebra_rules", algebra, 0.0);
    r.check_max("berezin_rules", berezin, 0.0);
    r.check_max("completeness", completeness_check(Grading::graded), lim.completeness);
    r.check_max("coherent_eigen_relation", eigen, cfg.run.tolerances.algebraic);
    r.metric("completeness_commuting_diagnostic", completeness_check(Grading::commuting));
    Table table{{}, {{}}};
    for (const auto& [k, v] : r.metrics) {
        table.columns.push_back(k);
        table.rows[0].push_back(v);
    }
    out.tables.emplace_back("grassmann-selftest", std::move(table));
    return out;
}

inline RunResult run_mode(Mode mode, const ScenarioConfig& cfg, const CheckLimits& lim = {});

/// Every mode in sequence. The epsilon reduction is skipped unless |f| stays
/// above lim.reduce_f_floor on the grid; the reduce mode itself runs anyway.
inline RunResult run_all(const ScenarioConfig& cfg, const CheckLimits& lim = {}) {
    RunResult out{detail::make_report(cfg, Mode::all), {}};
    const TimeGrid grid = out.report.grid;
    const bool reducible = !cfg.hamiltonian.unforced() && detail::min_abs_f(cfg.hamiltonian, grid) >= lim.reduce_f_floor;
    for (Mode m : {Mode::grassmann_selftest, Mode::evolve, Mode::invariants, Mode::reduce, Mode::coherence, Mode::phases}) {
        if (m == Mode::reduce && !reducible) {
            out.report.metric("reduce.skipped", 1.0);
            continue;
        }
        RunResult part = run_mode(m, cfg, lim);
        out.report.absorb(part.report, mode_name(m));
        for (auto& t : part.tables) out.tables.push_back(std::move(t));
    }
    return out;
}

inline RunResult run_mode(Mode mode, const ScenarioConfig& cfg, const CheckLimits& lim) {
    switch (mode) {
        case Mode::evolve: return run_evolve(cfg, lim);
        case Mode::invariants: return run_invariants(cfg, lim);
        case Mode::reduce: return run_reduce(cfg, lim);
        case Mode::coherence: return run_coherence(cfg, lim);
        case Mode::phases: return run_phases(cfg, lim);
        case Mode::grassmann_selftest: return run_grassmann_selftest(cfg, lim);
        case Mode::all: return run_all(cfg, lim);
    }
    throw ContractError("run_mode: unknown mode");
}

inline RunResult run(const ScenarioConfig& cfg, const CheckLimits& lim = {}) { return run_mode(cfg.run.mode, cfg, lim); }

}  // namespace ffo
