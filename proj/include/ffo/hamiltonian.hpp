#pragma once

#include "ffo/operator2.hpp"
#include "ffo/time_signal.hpp"

namespace ffo {

/// Values and first two time derivatives of omega(t) and f(t) at one instant.
struct SignalJet {
    double omega, omega_dot, omega_ddot;
    Complex f, f_dot, f_ddot;
    double g;
};

/// H(t) = omega(t) b^dagger b + f(t) b^dagger + f^*(t) b + g(t).
/// f is carried as two real signals so its derivatives stay analytic.
class HamiltonianSpec {
public:
    HamiltonianSpec() = default;
    HamiltonianSpec(TimeSignal omega, TimeSignal f_re, TimeSignal f_im, TimeSignal g)
        : omega_(std::move(omega)), f_re_(std::move(f_re)), f_im_(std::move(f_im)), g_(std::move(g)) {}

    /// Constant coefficients.
    static HamiltonianSpec constant(double omega, Complex f = 0.0, double g = 0.0) {
        return {TimeSignal::constant(omega), TimeSignal::constant(f.real()), TimeSignal::constant(f.imag()),
                TimeSignal::constant(g)};
    }

    const TimeSignal& omega_signal() const noexcept { return omega_; }
    const TimeSignal& f_re_signal() const noexcept { return f_re_; }
    const TimeSignal& f_im_signal() const noexcept { return f_im_; }
    const TimeSignal& g_signal() const noexcept { return g_; }

    double omega(double t) const { return omega_.value(t); }
    double g(double t) const { return g_.value(t); }
    Complex f(double t) const { return {f_re_.value(t), f_im_.value(t)}; }

    /// f(t) is the zero function (not merely small on a grid).
    bool unforced() const { return f_re_.is_identically_zero() && f_im_.is_identically_zero(); }

    SignalJet jet(double t) const {
        const auto w = omega_.eval(t);
        const auto fr = f_re_.eval(t);
        const auto fi = f_im_.eval(t);
        return {w[0], w[1], w[2], {fr[0], fi[0]}, {fr[1], fi[1]}, {fr[2], fi[2]}, g_.value(t)};
    }

private:
    TimeSignal omega_;
    TimeSignal f_re_;
    TimeSignal f_im_;
    TimeSignal g_;
};

inline Operator2 hamiltonian_matrix(double omega, Complex f, double g) {
    return {g, std::conj(f), f, omega + g};
}

/// Matrix of H(t) in the Fock basis; Hermitian by construction.
inline Operator2 hamiltonian_matrix(const HamiltonianSpec& spec, double t) {
    return hamiltonian_matrix(spec.omega(t), spec.f(t), spec.g(t));
}

/// Same operator assembled as omega J3 + f J+ + f^* J- + (g + omega/2).
inline Operator2 hamiltonian_matrix_spin_form(const HamiltonianSpec& spec, double t) {
    const auto s = spin_operators();
    const double w = spec.omega(t);
    const Complex f = spec.f(t);
    return w * s.j3 + f * s.j_plus + std::conj(f) * s.j_minus + (spec.g(t) + 0.5 * w) * Operator2::identity();
}

}  // namespace ffo
