#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "ffo/hamiltonian.hpp"
#include "ffo/invariants.hpp"
#include "ffo/time_signal.hpp"

namespace ffo {

/// Families drawn by the property sweeps.
enum class SweepFamily {
    /// omega, f, g all random
    general,
    /// f identically zero
    unforced,
    /// Re f bounded away from zero so that |f| >= 0.2 on the whole line
    forced_nonvanishing,
};

/// Signal bounds. A sinusoid is offset + amplitude sin(frequency t + phase)
/// with |offset| <= offset_max, 0 <= amplitude <= amplitude_max and
/// frequency in [frequency_min, frequency_max]. A polynomial has degree 3 in
/// t/10 with coefficients in [-poly_max, poly_max]. Each signal is a
/// polynomial with probability polynomial_share.
struct SweepBounds {
    double omega_offset_max = 1.0;
    double omega_amplitude_max = 1.0;
    double f_offset_max = 0.7;
    double f_amplitude_max = 0.7;
    double g_offset_max = 1.0;
    double g_amplitude_max = 1.0;
    double frequency_min = 0.2;
    double frequency_max = 2.0;
    double poly_max = 0.5;
    double polynomial_share = 0.25;
};

class SpecSampler {
public:
    explicit SpecSampler(std::uint64_t seed, SweepBounds bounds = {}) : rng_(seed), bounds_(bounds) {}

    HamiltonianSpec draw(SweepFamily family = SweepFamily::general) {
        const SweepBounds& b = bounds_;
        TimeSignal omega = signal(b.omega_offset_max, b.omega_amplitude_max);
        TimeSignal g = signal(b.g_offset_max, b.g_amplitude_max);
        switch (family) {
            case SweepFamily::unforced:
                return {std::move(omega), TimeSignal::constant(0.0), TimeSignal::constant(0.0), std::move(g)};
            case SweepFamily::forced_nonvanishing: {
                const double sign = uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0;
                TimeSignal f_re = sinusoid(0.3, sign * 0.75, 0.25);
                TimeSignal f_im = sinusoid(0.3, 0.0, 0.2);
                return {std::move(omega), std::move(f_re), std::move(f_im), std::move(g)};
            }
            case SweepFamily::general:
            default: {
                TimeSignal f_re = signal(b.f_offset_max, b.f_amplitude_max);
                TimeSignal f_im = signal(b.f_offset_max, b.f_amplitude_max);
                return {std::move(omega), std::move(f_re), std::move(f_im), std::move(g)};
            }
        }
    }

    /// Unforced spec with purely sinusoidal omega (closed-form phase checks).
    HamiltonianSpec draw_sinusoidal_unforced() {
        const SweepBounds& b = bounds_;
        TimeSignal omega = sinusoid(b.omega_amplitude_max, 0.0, b.omega_offset_max);
        TimeSignal g = signal(b.g_offset_max, b.g_amplitude_max);
        return {std::move(omega), TimeSignal::constant(0.0), TimeSignal::constant(0.0), std::move(g)};
    }

    /// Arbitrary initial coefficients with components in the unit disc.
    NuVector draw_nu() { return {disc(), disc(), disc()}; }

    /// Ladder-calibrated coefficients (lambda1 = 0, lambda2 = 1):
    /// nu = (c^2, -s^2 e^{2 i a}, 2 c s e^{i a}) e^{i b}.
    NuVector draw_calibrated_nu() {
        const double theta = uniform(0.05, 0.45) * kPi;
        const double a = uniform(0.0, 2.0 * kPi);
        const double phase = uniform(0.0, 2.0 * kPi);
        const double c = std::cos(theta), s = std::sin(theta);
        const Complex ea = std::polar(1.0, a), eb = std::polar(1.0, phase);
        return {c * c * eb, -s * s * ea * ea * eb, 2.0 * c * s * ea * eb};
    }

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

private:
    static constexpr double kPi = 3.14159265358979323846;

    double frequency() { return uniform(bounds_.frequency_min, bounds_.frequency_max); }

    Complex disc() {
        const double r = std::sqrt(uniform(0.0, 1.0));
        return std::polar(r, uniform(0.0, 2.0 * kPi));
    }

    TimeSignal signal(double offset_max, double amplitude_max) {
        if (uniform(0.0, 1.0) < bounds_.polynomial_share) {
            std::vector<double> c(4);
            double scale = 1.0;
            for (auto& x : c) {
                x = uniform(-bounds_.poly_max, bounds_.poly_max) * scale;
                scale /= 10.0;
            }
            return TimeSignal::polynomial(std::move(c));
        }
        return sinusoid(amplitude_max, 0.0, offset_max);
    }

    /// Offset drawn from center +- offset_span.
    TimeSignal sinusoid(double amplitude_max, double center, double offset_span) {
        const double amplitude = uniform(0.0, amplitude_max);
        const double freq = frequency();
        const double phase = uniform(0.0, 2.0 * kPi);
        const double offset = center + uniform(-offset_span, offset_span);
        return TimeSignal::sinusoid(amplitude, freq, phase, offset);
    }

    std::mt19937_64 rng_;
    SweepBounds bounds_;
};

}  // namespace ffo
