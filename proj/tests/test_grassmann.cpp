#include <gtest/gtest.h>

#include <random>

#include "ffo/grassmann.hpp"
#include "oracles/grassmann_words.hpp"

using namespace ffo;
using G = GrassmannElement;

namespace {

G random_element(std::mt19937_64& rng) {
    std::normal_distribution<double> n;
    return {Complex{n(rng), n(rng)}, Complex{n(rng), n(rng)}, Complex{n(rng), n(rng)}, Complex{n(rng), n(rng)}};
}

double diff(const G& a, const G& b) { return (a - b).max_abs(); }

}  // namespace

TEST(GrassmannAlgebra, GeneratorRules) {
    EXPECT_EQ(G::zeta() * G::zeta(), G{});
    EXPECT_EQ(G::zeta_star() * G::zeta_star(), G{});
    EXPECT_EQ(G::zeta() * G::zeta_star(), -G::top());
    EXPECT_EQ(G::zeta_star() * G::zeta(), G::top());
}

TEST(GrassmannAlgebra, ProductOfShiftedGenerators) {
    const G x = G{1.0} + G::zeta();
    const G y = G{1.0} + G::zeta_star();
    EXPECT_EQ(x * y, G(1.0, 1.0, 1.0, -1.0));
}

TEST(GrassmannAlgebra, ProductMatchesWordReduction) {
    // all 16 basis products, then random elements
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            G a, b;
            a[i] = 1.0;
            b[j] = 1.0;
            EXPECT_EQ(a * b, oracle::multiply(a, b)) << i << "," << j;
        }
    std::mt19937_64 rng(17);
    for (int k = 0; k < 100; ++k) {
        const G a = random_element(rng), b = random_element(rng);
        EXPECT_LE(diff(a * b, oracle::multiply(a, b)), 1e-14);
    }
}

TEST(GrassmannAlgebra, Associativity) {
    std::mt19937_64 rng(23);
    for (int k = 0; k < 100; ++k) {
        const G x = random_element(rng), y = random_element(rng), z = random_element(rng);
        EXPECT_LE(diff((x * y) * z, x * (y * z)), 1e-13);
    }
}

TEST(GrassmannAlgebra, OddElementsSquareToZero) {
    std::mt19937_64 rng(29);
    for (int k = 0; k < 50; ++k) {
        const G x = random_element(rng).odd_part();
        EXPECT_LE((x * x).max_abs(), 1e-15);
    }
}

TEST(GrassmannAlgebra, ParityParts) {
    const G x{1.0, 2.0, 3.0, 4.0};
    EXPECT_EQ(x.even_part(), G(1.0, 0.0, 0.0, 4.0));
    EXPECT_EQ(x.odd_part(), G(0.0, 2.0, 3.0, 0.0));
    EXPECT_EQ(x.involution(), G(1.0, -2.0, -3.0, 4.0));
}

TEST(GrassmannAlgebra, ConjugationReversesOrder) {
    std::mt19937_64 rng(31);
    for (int k = 0; k < 50; ++k) {
        const G x = random_element(rng), y = random_element(rng);
        EXPECT_LE(diff((x * y).conjugate(), y.conjugate() * x.conjugate()), 1e-13);
    }
    EXPECT_EQ(G::zeta().conjugate(), G::zeta_star());
    EXPECT_EQ(G::top().conjugate(), G::top());
}

TEST(Berezin, Rules) {
    EXPECT_EQ(berezin_integrate(G::zeta() * G::zeta_star()), Complex(1.0));
    EXPECT_EQ(berezin_integrate(G{1.0}), Complex(0.0));
    EXPECT_EQ(berezin_integrate(G::zeta()), Complex(0.0));
    EXPECT_EQ(berezin_integrate(G::zeta_star()), Complex(0.0));
    EXPECT_EQ(berezin_integrate(G{3.0, 0.0, 0.0, 2.0}), Complex(-2.0));
}

TEST(Berezin, Linearity) {
    std::mt19937_64 rng(37);
    std::normal_distribution<double> n;
    for (int k = 0; k < 50; ++k) {
        const G x = random_element(rng), y = random_element(rng);
        const Complex a{n(rng), n(rng)}, b{n(rng), n(rng)};
        EXPECT_LE(std::abs(berezin_integrate(a * x + b * y) - (a * berezin_integrate(x) + b * berezin_integrate(y))), 1e-14);
    }
}

TEST(CoherentKet, Expansion) {
    const GrassmannKet k = coherent_ket(1.0);
    EXPECT_EQ(k.a0, G(1.0, 0.0, 0.0, -0.5));
    EXPECT_EQ(k.a1, -G::zeta());
    const GrassmannKet v = coherent_ket(0.0);
    EXPECT_EQ(v.a0, G{1.0});
    EXPECT_EQ(v.a1, G{});
}

TEST(FermionAction, GradedSigns) {
    const GrassmannKet k{G{1.0}, -G::zeta()};
    const GrassmannKet bk = apply_fermion_op(FermionOp::b, k);
    EXPECT_EQ(bk.a0, G::zeta());
    EXPECT_EQ(bk.a1, G{});
    const GrassmannKet vac{G{1.0}, G{}};
    EXPECT_EQ(apply_fermion_op(FermionOp::b, vac).max_abs(), 0.0);
    const GrassmannKet up = apply_fermion_op(FermionOp::b_dag, vac);
    EXPECT_EQ(up.a0, G{});
    EXPECT_EQ(up.a1, G{1.0});
}

TEST(FermionAction, AnticommutatorAndNilpotencyOnAnyKet) {
    std::mt19937_64 rng(41);
    for (int k = 0; k < 30; ++k) {
        const GrassmannKet x{random_element(rng), random_element(rng)};
        const auto b = [](const GrassmannKet& s) { return apply_fermion_op(FermionOp::b, s); };
        const auto bd = [](const GrassmannKet& s) { return apply_fermion_op(FermionOp::b_dag, s); };
        EXPECT_LE((b(bd(x)) + bd(b(x)) - x).max_abs(), 1e-15);
        EXPECT_EQ(b(b(x)).max_abs(), 0.0);
    }
}

TEST(FermionAction, EigenvalueProperty) {
    for (Complex s : {Complex{1.0}, Complex{0.3, -1.2}}) {
        const GrassmannKet k = coherent_ket(s);
        EXPECT_LE((apply_fermion_op(FermionOp::b, k) - (s * G::zeta()) * k).max_abs(), 1e-16);
    }
}

TEST(FermionAction, CommutingConventionBreaksEigenvalue) {
    const GrassmannKet k = coherent_ket(1.0);
    EXPECT_GE((apply_fermion_op(FermionOp::b, k, Grading::commuting) - G::zeta() * k).max_abs(), 1.0);
}

TEST(Completeness, GradedIsIdentity) {
    EXPECT_LE(completeness_check(), 1e-14);
    EXPECT_EQ(completeness_matrix(), Operator2::identity());
}

TEST(Completeness, FlippedConventionDeviates) { EXPECT_GE(completeness_check(Grading::commuting), 1.0); }
