#include <gtest/gtest.h>

#include "ffo/invariants.hpp"
#include "ffo/sweep.hpp"

using namespace ffo;

TEST(SpecSampler, Deterministic) {
    SpecSampler a(42), b(42);
    for (int i = 0; i < 10; ++i) {
        const auto x = a.draw(), y = b.draw();
        for (double t : {0.0, 3.3, 9.9}) {
            EXPECT_EQ(x.omega(t), y.omega(t));
            EXPECT_EQ(x.f(t), y.f(t));
            EXPECT_EQ(x.g(t), y.g(t));
        }
    }
}

TEST(SpecSampler, DifferentSeedsDiffer) {
    SpecSampler a(1), b(2);
    EXPECT_NE(a.draw().omega(1.0), b.draw().omega(1.0));
}

TEST(SpecSampler, BoundsRespected) {
    SpecSampler s(5);
    for (int i = 0; i < 200; ++i) {
        const auto spec = s.draw();
        for (double t = 0.0; t <= 10.0; t += 0.5) {
            EXPECT_LE(std::abs(spec.omega(t)), 2.0 + 1e-12);
            EXPECT_LE(std::abs(spec.f(t).real()), 2.0 + 1e-12);
            EXPECT_LE(std::abs(spec.f(t).imag()), 2.0 + 1e-12);
            EXPECT_LE(std::abs(spec.g(t)), 2.0 + 1e-12);
        }
    }
}

TEST(SpecSampler, Families) {
    SpecSampler s(6);
    for (int i = 0; i < 100; ++i) {
        EXPECT_TRUE(s.draw(SweepFamily::unforced).unforced());
        EXPECT_TRUE(s.draw_sinusoidal_unforced().unforced());
        const auto forced = s.draw(SweepFamily::forced_nonvanishing);
        for (double t = 0.0; t <= 10.0; t += 0.25) EXPECT_GE(std::abs(forced.f(t)), 0.19);
    }
}

TEST(SpecSampler, CalibratedNu) {
    SpecSampler s(7);
    for (int i = 0; i < 100; ++i) {
        const auto r = ladder_conditions_check(s.draw_calibrated_nu());
        EXPECT_LE(r.residual_B2, 1e-14);
        EXPECT_LE(r.residual_anticomm, 1e-14);
        EXPECT_LE(s.draw_nu().max_abs(), 1.0);
    }
}
