#include <gtest/gtest.h>

#include <cmath>

#include "ffo/errors.hpp"
#include "ffo/time_signal.hpp"
#include "oracles/closed_form.hpp"

using namespace ffo;

namespace {

void expect_consistent_derivatives(const TimeSignal& s, double t, double tol) {
    const double h = 1e-4;
    EXPECT_NEAR(s.d1(t), oracle::central_difference([&s](double x) { return s.value(x); }, t, h), tol);
    EXPECT_NEAR(s.d2(t), oracle::central_difference([&s](double x) { return s.d1(x); }, t, h), tol);
}

}  // namespace

TEST(TimeSignal, ConstantHasNoDerivatives) {
    const auto s = TimeSignal::constant(2.5);
    EXPECT_EQ(s.value(7.0), 2.5);
    EXPECT_EQ(s.d1(7.0), 0.0);
    EXPECT_EQ(s.d2(7.0), 0.0);
    EXPECT_FALSE(s.is_identically_zero());
    EXPECT_TRUE(TimeSignal::constant(0.0).is_identically_zero());
}

TEST(TimeSignal, SinusoidValues) {
    const auto s = TimeSignal::sinusoid(2.0, 3.0, 0.5, 1.0);
    EXPECT_NEAR(s.value(0.7), 1.0 + 2.0 * std::sin(3.0 * 0.7 + 0.5), 1e-15);
    EXPECT_NEAR(s.d1(0.7), 6.0 * std::cos(3.0 * 0.7 + 0.5), 1e-14);
    EXPECT_NEAR(s.d2(0.7), -18.0 * std::sin(3.0 * 0.7 + 0.5), 1e-14);
    EXPECT_TRUE(TimeSignal::sinusoid(0.0, 1.0).is_identically_zero());
}

TEST(TimeSignal, ParametricDerivativesMatchFiniteDifferences) {
    const TimeSignal signals[] = {TimeSignal::sinusoid(0.8, 1.7, 0.2, -0.3), TimeSignal::polynomial({0.5, -1.0, 0.25, 0.03}),
                                  TimeSignal::exponential(0.7, 0.3, 0.1)};
    for (const auto& s : signals)
        for (double t : {0.0, 0.9, 3.3, 8.0}) expect_consistent_derivatives(s, t, 1e-6);
}

TEST(TimeSignal, PolynomialHorner) {
    const auto p = TimeSignal::polynomial({1.0, 2.0, 3.0});
    EXPECT_DOUBLE_EQ(p.value(2.0), 17.0);
    EXPECT_DOUBLE_EQ(p.d1(2.0), 14.0);
    EXPECT_DOUBLE_EQ(p.d2(2.0), 6.0);
}

TEST(TimeSignal, TabulatedInterpolatesNodes) {
    std::vector<double> t, v;
    for (int k = 0; k <= 40; ++k) {
        t.push_back(0.25 * k);
        v.push_back(std::sin(0.25 * k));
    }
    const auto s = TimeSignal::tabulated(t, v);
    for (std::size_t k = 0; k < t.size(); ++k) EXPECT_NEAR(s.value(t[k]), v[k], 1e-14);
    EXPECT_NEAR(s.value(4.1), std::sin(4.1), 1e-3);
    EXPECT_NEAR(s.d1(4.1), std::cos(4.1), 1e-2);
    expect_consistent_derivatives(s, 4.1, 1e-6);
}

TEST(TimeSignal, TabulatedRejectsBadInput) {
    EXPECT_THROW(TimeSignal::tabulated({0.0, 1.0, 1.0}, {0.0, 1.0, 2.0}), ContractError);
    EXPECT_THROW(TimeSignal::tabulated({0.0, 2.0, 1.0}, {0.0, 1.0, 2.0}), ContractError);
    EXPECT_THROW(TimeSignal::tabulated({0.0, 1.0}, {0.0}), ContractError);
    const auto s = TimeSignal::tabulated({0.0, 1.0, 2.0}, {0.0, 1.0, 0.0});
    EXPECT_THROW(s.value(2.5), RangeError);
    EXPECT_THROW(s.value(-0.1), RangeError);
}
