#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ffo/states.hpp"
#include "ffo/sweep.hpp"

using namespace ffo;

namespace {

double max_vacuum_annihilation(const NuTrajectory& traj, const std::vector<EvolvedVacuum>& vac) {
    double r = 0.0;
    for (std::size_t k = 0; k < vac.size(); ++k) r = std::max(r, (build_B(traj.nu[k]) * vac[k].state).norm());
    return r;
}

}  // namespace

TEST(Vacuum, CanonicalStaticVacuum) {
    const auto spec = HamiltonianSpec::constant(1.2, 0.0, 0.3);
    const auto traj = integrate_nu(spec, kCanonicalNu, 2.0);
    const auto vac = vacuum_trajectory(traj, spec);
    for (std::size_t k = 0; k < vac.size(); k += 400) {
        EXPECT_LE(std::abs(std::abs(vac[k].alpha0()) - 1.0), 1e-12);
        EXPECT_LE(std::abs(vac[k].alpha1()), 1e-12);
        // |0> picks up e^{-i g t}
        EXPECT_LE(std::abs(vac[k].alpha0() - std::polar(1.0, -0.3 * traj.grid.t(k))), 1e-8);
    }
}

TEST(Vacuum, AnnihilatedNormalizedAndSolvesSchroedinger) {
    SpecSampler sampler(31);
    for (int i = 0; i < 5; ++i) {
        const auto spec = sampler.draw();
        const auto traj = integrate_nu(spec, kCanonicalNu, 10.0);
        const auto vac = vacuum_trajectory(traj, spec);
        EXPECT_LE(max_vacuum_annihilation(traj, vac), 1e-10);
        for (const auto& v : vac) EXPECT_NEAR(v.state.norm(), 1.0, 1e-10);
        EXPECT_LE(schrodinger_residual(spec, traj.grid, [&](std::size_t k) { return vac[k].state; }), 1e-5);
    }
}

TEST(Vacuum, CalibratedNonCanonicalStart) {
    SpecSampler sampler(32);
    const auto spec = sampler.draw();
    const NuVector nu0 = sampler.draw_calibrated_nu();
    const auto r = ladder_conditions_check(nu0);
    ASSERT_LE(std::max(r.residual_B2, r.residual_anticomm), 1e-14);
    const auto traj = integrate_nu(spec, nu0, 10.0);
    const auto vac = vacuum_trajectory(traj, spec);
    EXPECT_LE(max_vacuum_annihilation(traj, vac), 1e-10);
    EXPECT_LE(schrodinger_residual(spec, traj.grid, [&](std::size_t k) { return vac[k].state; }), 1e-5);
}

TEST(Vacuum, FallbackAgreesWithClosedForm) {
    SpecSampler sampler(33);
    const auto spec = sampler.draw();
    const auto traj = integrate_nu(spec, kCanonicalNu, 5.0);
    const auto vac = vacuum_trajectory(traj, spec);
    for (std::size_t k = 1; k < vac.size(); k += 250) {
        if (std::abs(traj.nu[k].minus) < 1e-3) continue;
        const auto fb = vacuum_nullspace_fallback(build_B(traj.nu[k]), vac[k - 1], spec, traj.grid.t(k), traj.grid.dt);
        EXPECT_EQ(fb.route, VacuumRoute::nullspace);
        EXPECT_GE(std::abs(inner(fb.state, vac[k].state)), 1.0 - 1e-8);
        EXPECT_LE((fb.state - vac[k].state).norm(), 1e-5);
    }
}

TEST(Vacuum, FallbackTakesOverWhenNuMinusVanishes) {
    // start from B = b^dagger: nu_- = 0 at t = 0
    const auto spec = HamiltonianSpec::constant(1.0, Complex{0.4, 0.1}, 0.2);
    const auto traj = integrate_nu(spec, NuVector{0.0, 1.0, 0.0}, 3.0);
    const auto vac = vacuum_trajectory(traj, spec);
    EXPECT_EQ(vac.front().route, VacuumRoute::nullspace);
    EXPECT_EQ(vac.back().route, VacuumRoute::closed_form);
    EXPECT_LE(max_vacuum_annihilation(traj, vac), 1e-10);
    EXPECT_LE(schrodinger_residual(spec, traj.grid, [&](std::size_t k) { return vac[k].state; }), 1e-5);
}

TEST(Vacuum, FallbackRejectsNonLadder) {
    const auto spec = HamiltonianSpec::constant(1.0);
    EXPECT_THROW(vacuum_nullspace_fallback(Operator2::zero(), std::nullopt, spec, 0.0, 1e-3), ContractError);
    EXPECT_THROW(vacuum_nullspace_fallback(Operator2::identity(), std::nullopt, spec, 0.0, 1e-3), ContractError);
}

TEST(Vacuum, FromNuMatchesTrajectory) {
    SpecSampler sampler(34);
    const auto spec = sampler.draw();
    const auto traj = integrate_nu(spec, kCanonicalNu, 2.0);
    const auto vac = vacuum_trajectory(traj, spec);
    EXPECT_LE((vacuum_from_nu(traj, spec, 1500).state - vac[1500].state).norm(), 1e-15);
    EXPECT_THROW(vacuum_from_nu(traj, spec, traj.nu.size()), RangeError);
}

TEST(Excited, AnnihilatedByBDagger) {
    const auto spec = HamiltonianSpec::constant(0.8, Complex{0.3, -0.2}, 0.1);
    const NuVector nu0{std::polar(0.5, 0.3), std::polar(0.5, 1.1), 2.0 * std::sqrt(-std::polar(0.25, 1.4))};
    const auto traj = integrate_nu(spec, nu0, 4.0);
    const auto ex = excited_trajectory(traj, spec);
    const auto vac = vacuum_trajectory(traj, spec);
    for (std::size_t k = 0; k < ex.size(); k += 400) {
        EXPECT_LE((build_B_dagger(traj.nu[k]) * ex[k]).norm(), 1e-10);
        EXPECT_LE(std::abs(inner(ex[k], vac[k].state)), 1e-10);
    }
    EXPECT_LE(schrodinger_residual(spec, traj.grid, [&](std::size_t k) { return ex[k]; }), 1e-5);
    EXPECT_THROW(excited_trajectory(integrate_nu(spec, kCanonicalNu, 1.0), spec), SingularReductionError);
}

TEST(Coherent, EigenstateOfB) {
    SpecSampler sampler(35);
    const auto spec = sampler.draw();
    const auto traj = integrate_nu(spec, kCanonicalNu, 5.0);
    const auto vac = vacuum_trajectory(traj, spec);
    for (Complex s : {Complex{1.0}, Complex{0.4, -0.9}})
        for (std::size_t k = 0; k < vac.size(); k += 1000)
            EXPECT_LE(coherent_eigen_residual(build_B(traj.nu[k]), coherent_state(s, vac[k], traj.nu[k]), s), 1e-10);
}

TEST(Coherent, MatchesEvolvedCanonicalState) {
    SpecSampler sampler(36);
    const auto spec = sampler.draw();
    PropagatorConfig c;
    c.substeps = 4;
    const auto u = evolve_unitary(spec, 5.0, c);
    const auto traj = integrate_nu(spec, kCanonicalNu, 5.0);
    const auto vac = vacuum_trajectory(traj, spec);
    const std::size_t k = 5000;
    const GrassmannKet a = evolved_canonical_coherent(u.u[k]);
    const GrassmannKet b = coherent_state(1.0, vac[k], traj.nu[k]);
    // equal up to the vacuum phase convention
    const Complex ph = detail::unit_phase(inner(vac[k].state, u.u[k] * kVacuum));
    const GrassmannKet bp = GrassmannElement{ph} * b;
    EXPECT_LE((a - bp).max_abs(), 1e-6);
}

TEST(Coherence, FreeOscillatorKeepsEigenvalue) {
    const auto spec = HamiltonianSpec(TimeSignal::sinusoid(0.5, 0.8, 0.0, 1.3), TimeSignal::constant(0.0),
                                      TimeSignal::constant(0.0), TimeSignal::constant(0.2));
    PropagatorConfig c;
    c.substeps = 8;
    const auto rep = coherence_check(spec, 10.0, c);
    EXPECT_LE(rep.max_eigen_residual(), 1e-12);
    for (std::size_t k = 0; k < rep.beta.size(); k += 500) {
        const double phi = omega_phase(spec.omega_signal(), rep.grid.t(k));
        EXPECT_LE(std::abs(rep.zeta_ratio[k] - std::polar(1.0, -phi)), 1e-8);
        EXPECT_LE(std::abs(rep.zeta_ratio[k] - std::conj(rep.beta[k])), 1e-12);
    }
}

TEST(Coherence, ForcingBreaksEigenstate) {
    const auto spec = HamiltonianSpec::constant(0.0, 1.0);
    const auto rep = coherence_check(spec, std::numbers::pi / 4);
    EXPECT_GE(rep.eigen_residual.back(), 0.1);
}

TEST(Coherence, FitIsExactOnEigenstates) {
    const GrassmannKet k = evolved_canonical_coherent(Operator2::identity());
    const EigenFit fit = fit_annihilation_eigenvalue(k);
    EXPECT_LE(std::abs(fit.ratio - 1.0), 1e-15);
    EXPECT_LE(fit.residual, 1e-15);
}

TEST(Phases, StationaryClosedForm) {
    const double w0 = 1.5, g0 = 0.25;
    const auto spec = HamiltonianSpec::constant(w0, 0.0, g0);
    const auto traj = integrate_nu(spec, kCanonicalNu, 5.0);
    const auto a = lr_phases(traj, spec);
    for (std::size_t k = 0; k < a.records.size(); k += 500) {
        const double t = traj.grid.t(k);
        EXPECT_NEAR(a.records[k].phi0, -g0 * t, 1e-9);
        EXPECT_NEAR(a.records[k].phi1, -(g0 + w0) * t, 1e-9);
        EXPECT_NEAR(a.records[k].phi_geometric, 0.0, 1e-9);
    }
}

TEST(Phases, ForcedPhasesSolveSchroedinger) {
    SpecSampler sampler(37);
    for (int i = 0; i < 3; ++i) {
        const auto spec = sampler.draw();
        const auto traj = integrate_nu(spec, kCanonicalNu, 10.0);
        const auto a = lr_phases(traj, spec);
        EXPECT_LE(phased_schrodinger_residual(a, spec), 1e-5);
        PropagatorConfig c;
        c.substeps = 4;
        EXPECT_LE(phase_route_consistency(a, evolve_unitary(spec, 10.0, c)), 1e-5);
        EXPECT_LE(lr_invariant_phase_mismatch(a, traj), 1e-5);
        for (std::size_t k = 0; k < a.records.size(); k += 1000) {
            const auto [g, d] = geometric_phase(a, k);
            EXPECT_NEAR(g + d, a.records[k].phi(), 1e-12);
        }
    }
}

TEST(Phases, GaugeTwistLeavesPhasedStatesUnchanged) {
    SpecSampler sampler(38);
    const auto spec = sampler.draw();
    const auto traj = integrate_nu(spec, kCanonicalNu, 6.0);
    const auto a = lr_phases(traj, spec);
    const auto b = lr_phases(traj, spec, [](int n, double t) { return 0.7 * (n + 1) * std::sin(t); });
    for (std::size_t k = 0; k < a.records.size(); k += 300)
        for (int n = 0; n < 2; ++n) EXPECT_LE((a.phased_state(n, k) - b.phased_state(n, k)).norm(), 1e-6);
}

TEST(Phases, GaugeFixedEigenvectors) {
    const auto v = gauge_fixed_eigenvectors(kCanonicalNu);
    EXPECT_LE((v[0] - kVacuum).norm(), 1e-15);
    EXPECT_LE((v[1] - kOccupied).norm(), 1e-15);
    EXPECT_THROW(gauge_fixed_eigenvectors(NuVector{}), ContractError);
}

TEST(Phases, LadderAndCoherentState) {
    SpecSampler sampler(39);
    const auto spec = sampler.draw();
    const auto traj = integrate_nu(spec, kCanonicalNu, 4.0);
    const auto a = lr_phases(traj, spec);
    for (std::size_t k = 0; k < a.records.size(); k += 800) {
        const Operator2 bt = lr_ladder(a, k);
        const auto r = ladder_conditions_check(bt);
        EXPECT_LE(std::max(r.residual_B2, r.residual_anticomm), 1e-12);
        EXPECT_LE(coherent_eigen_residual(bt, phased_coherent_state(a, k), std::polar(1.0, a.records[k].phi())), 1e-12);
    }
}

TEST(Phases, ShortTrajectoryRejected) {
    const auto spec = HamiltonianSpec::constant(1.0);
    EXPECT_THROW(lr_phases(integrate_nu(spec, kCanonicalNu, 1e-3), spec), ContractError);
}
