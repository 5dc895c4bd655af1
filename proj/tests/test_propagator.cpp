#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ffo/propagator.hpp"
#include "ffo/sweep.hpp"
#include "oracles/closed_form.hpp"

using namespace ffo;

TEST(Exp2x2, ZeroAndDiagonal) {
    EXPECT_LE(max_abs_diff(exp2x2(Operator2::zero()), Operator2::identity()), 1e-16);
    const double th = 0.83;
    const Operator2 e = exp2x2(Operator2::diag(kI * th, -kI * th));
    EXPECT_LE(max_abs_diff(e, Operator2::diag(std::polar(1.0, th), std::polar(1.0, -th))), 1e-15);
}

TEST(Exp2x2, MatchesEigenExponential) {
    std::mt19937_64 rng(2);
    std::normal_distribution<double> n;
    for (int k = 0; k < 100; ++k) {
        const Operator2 a{Complex{n(rng), n(rng)}, Complex{n(rng), n(rng)}, Complex{n(rng), n(rng)}, Complex{n(rng), n(rng)}};
        const Operator2 h = 0.5 * (a + a.adjoint());
        const double dt = 1e-3 * (1 + k);
        const Operator2 u = exp2x2((-kI * dt) * h);
        EXPECT_LE(unitarity_defect(u), 1e-14);
        EXPECT_LE(max_abs_diff(u, oracle::constant_propagator(h, dt)), 1e-13);
    }
}

TEST(Exp2x2, SeriesBranchNearDegenerate) {
    const Operator2 a{Complex{0.2, 0.1}, 1e-8, 2e-8, Complex{0.2, 0.1}};
    const Operator2 e = exp2x2(a);
    const Operator2 expected = std::exp(Complex{0.2, 0.1}) * (Operator2::identity() + Operator2(0.0, 1e-8, 2e-8, 0.0));
    EXPECT_LE(max_abs_diff(e, expected), 1e-15);
}

TEST(EvolveUnitary, ZeroHamiltonian) {
    const auto u = evolve_unitary(HamiltonianSpec::constant(0.0), 3.0);
    for (const auto& x : u.u) EXPECT_LE(max_abs_diff(x, Operator2::identity()), 1e-15);
}

TEST(EvolveUnitary, ConstantDiagonal) {
    const double w0 = 1.3;
    const auto u = evolve_unitary(HamiltonianSpec::constant(w0), 5.0);
    EXPECT_LE(max_abs_diff(u.u.back(), Operator2::diag(1.0, std::polar(1.0, -w0 * 5.0))), 1e-8);
}

TEST(EvolveUnitary, ConstantRealForcing) {
    const double f0 = 0.7;
    const auto u = evolve_unitary(HamiltonianSpec::constant(0.0, f0), 4.0);
    const auto l = ladder_operators();
    for (std::size_t k = 0; k < u.u.size(); k += 500) {
        const double t = u.grid.t(k);
        const Operator2 expected = std::cos(f0 * t) * Operator2::identity() - (kI * std::sin(f0 * t)) * (l.b_dag + l.b);
        EXPECT_LE(max_abs_diff(u.u[k], expected), 1e-8) << t;
    }
}

TEST(EvolveUnitary, MatchesEigenPropagatorForConstantSpec) {
    const auto spec = HamiltonianSpec::constant(0.9, Complex{0.4, -0.3}, 0.2);
    const auto u = evolve_unitary(spec, 6.0);
    EXPECT_LE(max_abs_diff(u.u.back(), oracle::constant_propagator(hamiltonian_matrix(spec, 0.0), 6.0)), 1e-9);
}

TEST(EvolveUnitary, UnitarityOnRandomSpecs) {
    SpecSampler sampler(99);
    for (int i = 0; i < 5; ++i) {
        const auto u = evolve_unitary(sampler.draw(), 10.0);
        EXPECT_LE(u.max_unitarity_defect(), 1e-9);
    }
}

TEST(EvolveUnitary, SecondOrderConvergence) {
    SpecSampler sampler(4);
    const auto spec = sampler.draw();
    const double t = 5.0;
    PropagatorConfig c;
    c.unitarity_renorm_every = 0;
    c.dt = 4e-3;
    const Operator2 u1 = evolve_unitary(spec, t, c).u.back();
    c.dt = 2e-3;
    const Operator2 u2 = evolve_unitary(spec, t, c).u.back();
    c.dt = 1e-3;
    const Operator2 u3 = evolve_unitary(spec, t, c).u.back();
    const double ratio = max_abs_diff(u1, u2) / max_abs_diff(u2, u3);
    EXPECT_NEAR(ratio, 4.0, 0.5);
}

TEST(EvolveUnitary, SubstepsKeepGridAndImproveAccuracy) {
    const auto spec = HamiltonianSpec(TimeSignal::sinusoid(0.5, 1.1, 0.0, 1.0), TimeSignal::constant(0.0),
                                      TimeSignal::constant(0.0), TimeSignal::constant(0.0));
    PropagatorConfig c;
    const auto coarse = evolve_unitary(spec, 3.0, c);
    c.substeps = 4;
    const auto fine = evolve_unitary(spec, 3.0, c);
    EXPECT_EQ(coarse.u.size(), fine.u.size());
    // exact: phase of the |1> entry is -int omega
    const double phase = 3.0 + 0.5 / 1.1 * (1.0 - std::cos(1.1 * 3.0));
    const Complex exact = std::polar(1.0, -phase);
    EXPECT_LT(std::abs(fine.u.back()(1, 1) - exact), std::abs(coarse.u.back()(1, 1) - exact) / 10.0);
}

TEST(EvolveUnitary, Rk4CrossCheck) {
    SpecSampler sampler(6);
    const auto spec = sampler.draw();
    PropagatorConfig c;
    c.method = StepMethod::rk4;
    const auto a = evolve_unitary(spec, 4.0, c);
    const auto b = evolve_unitary(spec, 4.0);
    EXPECT_LE(max_abs_diff(a.u.back(), b.u.back()), 1e-6);
}

TEST(EvolveUnitary, Composition) {
    SpecSampler sampler(12);
    const auto spec = sampler.draw();
    const auto u = evolve_unitary(spec, 6.0);
    const std::size_t k1 = 3000;
    // continue from t1 with a fresh trajectory of a time-shifted spec
    Operator2 v = u.u[k1];
    for (std::size_t k = k1; k < u.grid.steps; ++k)
        v = exp2x2((-kI * u.grid.dt) * hamiltonian_matrix(spec, u.grid.t(k) + 0.5 * u.grid.dt)) * v;
    EXPECT_LE(max_abs_diff(v, u.u.back()), 1e-12);
}

TEST(Heisenberg, Transport) {
    const auto l = ladder_operators();
    EXPECT_EQ(heisenberg_oracle(Operator2::identity(), l.b), l.b);
    const double w0t = 0.77;
    const Operator2 u = Operator2::diag(1.0, std::polar(1.0, -w0t));
    EXPECT_LE(max_abs_diff(heisenberg_oracle(u, l.b), std::polar(1.0, w0t) * l.b), 1e-15);
    EXPECT_LE(max_abs_diff(heisenberg_oracle(u, Operator2::identity()), Operator2::identity()), 1e-15);
    EXPECT_THROW(heisenberg_oracle(2.0 * Operator2::identity(), l.b), ContractError);
}

TEST(Heisenberg, EnergyConservedForConstantH) {
    const auto spec = HamiltonianSpec::constant(1.1, Complex{0.3, 0.4}, -0.2);
    const auto u = evolve_unitary(spec, 8.0);
    const Operator2 h = hamiltonian_matrix(spec, 0.0);
    for (std::size_t k = 0; k < u.u.size(); k += 1000) EXPECT_LE(max_abs_diff(heisenberg_oracle(u.u[k], h), h), 1e-9);
}

TEST(EvolveState, ForcedVacuum) {
    const double f0 = 0.6;
    const auto psi = evolve_state(HamiltonianSpec::constant(0.0, f0), kVacuum, 3.0);
    const double t = 3.0;
    EXPECT_LE(std::abs(psi.back().amp0 - std::cos(f0 * t)), 1e-8);
    EXPECT_LE(std::abs(psi.back().amp1 + kI * std::sin(f0 * t)), 1e-8);
}

TEST(EvolveState, NormPreserved) {
    SpecSampler sampler(15);
    for (int i = 0; i < 3; ++i) {
        const auto psi = evolve_state(sampler.draw(), StateVec2{0.6, Complex{0.0, 0.8}}, 10.0);
        for (const auto& p : psi) EXPECT_NEAR(p.norm(), 1.0, 1e-8);
    }
    const auto psi = evolve_state(HamiltonianSpec::constant(0.0), kVacuum, 2.0);
    for (const auto& p : psi) EXPECT_EQ(p, kVacuum);
}

TEST(EvolveUnitary, RejectsBadGrid) {
    EXPECT_THROW(evolve_unitary(HamiltonianSpec::constant(1.0), -1.0), std::invalid_argument);
    PropagatorConfig c;
    c.dt = 0.0;
    EXPECT_THROW(evolve_unitary(HamiltonianSpec::constant(1.0), 1.0, c), std::invalid_argument);
}

TEST(EvolveUnitary, NonFiniteSignalRaisesIntegrationError) {
    const auto spec = HamiltonianSpec(TimeSignal::exponential(1.0, 800.0), TimeSignal::constant(0.0), TimeSignal::constant(0.0),
                                      TimeSignal::constant(0.0));
    EXPECT_THROW(evolve_unitary(spec, 2.0), IntegrationError);
}
