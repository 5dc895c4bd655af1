#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <ostream>

namespace ffo {

using Complex = std::complex<double>;

inline constexpr Complex kI{0.0, 1.0};

inline bool is_finite(Complex z) noexcept {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// Two-component state in the ordered basis {|0>, |1>}.
struct StateVec2 {
    Complex amp0{};
    Complex amp1{};

    constexpr Complex operator[](int i) const noexcept { return i == 0 ? amp0 : amp1; }

    double norm2() const noexcept { return std::norm(amp0) + std::norm(amp1); }
    double norm() const noexcept { return std::sqrt(norm2()); }
    bool finite() const noexcept { return is_finite(amp0) && is_finite(amp1); }

    StateVec2 normalized() const noexcept {
        const double n = norm();
        return {amp0 / n, amp1 / n};
    }

    friend StateVec2 operator+(StateVec2 a, StateVec2 b) noexcept { return {a.amp0 + b.amp0, a.amp1 + b.amp1}; }
    friend StateVec2 operator-(StateVec2 a, StateVec2 b) noexcept { return {a.amp0 - b.amp0, a.amp1 - b.amp1}; }
    friend StateVec2 operator*(Complex s, StateVec2 a) noexcept { return {s * a.amp0, s * a.amp1}; }
    friend StateVec2 operator*(StateVec2 a, Complex s) noexcept { return s * a; }
    friend StateVec2 operator/(StateVec2 a, Complex s) noexcept { return {a.amp0 / s, a.amp1 / s}; }
    friend bool operator==(const StateVec2&, const StateVec2&) = default;
};

/// <a|b>, antilinear in the first argument.
inline Complex inner(const StateVec2& a, const StateVec2& b) noexcept {
    return std::conj(a.amp0) * b.amp0 + std::conj(a.amp1) * b.amp1;
}

inline constexpr StateVec2 kVacuum{1.0, 0.0};
inline constexpr StateVec2 kOccupied{0.0, 1.0};

/// 2x2 complex matrix, row-major, basis {|0>, |1>} with b^dagger b |n> = n |n>.
class Operator2 {
public:
    constexpr Operator2() = default;
    constexpr Operator2(Complex a00, Complex a01, Complex a10, Complex a11) : m_{a00, a01, a10, a11} {}

    static constexpr Operator2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static constexpr Operator2 zero() { return {}; }
    static constexpr Operator2 diag(Complex d0, Complex d1) { return {d0, 0.0, 0.0, d1}; }

    constexpr Complex operator()(int row, int col) const { return m_[2 * row + col]; }
    constexpr Complex& operator()(int row, int col) { return m_[2 * row + col]; }
    constexpr const std::array<Complex, 4>& entries() const noexcept { return m_; }

    Operator2 adjoint() const {
        return {std::conj(m_[0]), std::conj(m_[2]), std::conj(m_[1]), std::conj(m_[3])};
    }
    Complex trace() const noexcept { return m_[0] + m_[3]; }
    Complex det() const noexcept { return m_[0] * m_[3] - m_[1] * m_[2]; }

    double max_abs() const noexcept {
        double r = 0.0;
        for (const auto& z : m_) r = std::max(r, std::abs(z));
        return r;
    }
    bool finite() const noexcept {
        return std::all_of(m_.begin(), m_.end(), [](Complex z) { return is_finite(z); });
    }

    Operator2& operator+=(const Operator2& o) {
        for (int k = 0; k < 4; ++k) m_[k] += o.m_[k];
        return *this;
    }
    Operator2& operator-=(const Operator2& o) {
        for (int k = 0; k < 4; ++k) m_[k] -= o.m_[k];
        return *this;
    }
    Operator2& operator*=(Complex s) {
        for (auto& z : m_) z *= s;
        return *this;
    }

    friend Operator2 operator+(Operator2 a, const Operator2& b) { return a += b; }
    friend Operator2 operator-(Operator2 a, const Operator2& b) { return a -= b; }
    friend Operator2 operator-(Operator2 a) { return a *= -1.0; }
    friend Operator2 operator*(Operator2 a, Complex s) { return a *= s; }
    friend Operator2 operator*(Complex s, Operator2 a) { return a *= s; }
    friend Operator2 operator*(double s, Operator2 a) { return a *= s; }
    friend Operator2 operator/(Operator2 a, Complex s) { return a *= (1.0 / s); }

    friend Operator2 operator*(const Operator2& a, const Operator2& b) {
        return {a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0), a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1),
                a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0), a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1)};
    }
    friend StateVec2 operator*(const Operator2& a, const StateVec2& v) {
        return {a(0, 0) * v.amp0 + a(0, 1) * v.amp1, a(1, 0) * v.amp0 + a(1, 1) * v.amp1};
    }

    friend bool operator==(const Operator2&, const Operator2&) = default;

    friend std::ostream& operator<<(std::ostream& os, const Operator2& a) {
        return os << "[[" << a(0, 0) << ", " << a(0, 1) << "], [" << a(1, 0) << ", " << a(1, 1) << "]]";
    }

private:
    std::array<Complex, 4> m_{};
};

inline double max_abs_diff(const Operator2& a, const Operator2& b) { return (a - b).max_abs(); }

inline Operator2 commutator(const Operator2& a, const Operator2& b) { return a * b - b * a; }
inline Operator2 anticommutator(const Operator2& a, const Operator2& b) { return a * b + b * a; }

inline Operator2 outer(const StateVec2& ket, const StateVec2& bra) {
    return {ket.amp0 * std::conj(bra.amp0), ket.amp0 * std::conj(bra.amp1), ket.amp1 * std::conj(bra.amp0),
            ket.amp1 * std::conj(bra.amp1)};
}

/// ||A - A^dagger||_max
inline double hermiticity_defect(const Operator2& a) { return max_abs_diff(a, a.adjoint()); }

/// ||U^dagger U - 1||_max
inline double unitarity_defect(const Operator2& u) { return max_abs_diff(u.adjoint() * u, Operator2::identity()); }

struct LadderOperators {
    Operator2 b;
    Operator2 b_dag;
    Operator2 n;
};

/// b|1> = |0>, b^dagger|0> = |1>, N = b^dagger b.
inline LadderOperators ladder_operators() {
    const Operator2 b{0.0, 1.0, 0.0, 0.0};
    const Operator2 b_dag = b.adjoint();
    return {b, b_dag, b_dag * b};
}

struct SpinOperators {
    Operator2 j1, j2, j3, j_plus, j_minus;
};

inline SpinOperators spin_operators() {
    const auto [b, b_dag, n] = ladder_operators();
    return {0.5 * (b_dag + b), (b_dag - b) / (2.0 * kI), n - 0.5 * Operator2::identity(), b_dag, b};
}

/// Spectrum of a Hermitian 2x2 matrix in ascending order.
struct HermitianEigen {
    std::array<double, 2> values;
    std::array<StateVec2, 2> vectors;
};

inline HermitianEigen eigen_hermitian(const Operator2& h) {
    const double a = h(0, 0).real();
    const double d = h(1, 1).real();
    const Complex c = h(1, 0);
    const double mean = 0.5 * (a + d);
    const double half = 0.5 * (a - d);
    const double r = std::hypot(half, std::abs(c));
    HermitianEigen out{{mean - r, mean + r}, {}};
    if (r == 0.0) {
        out.vectors = {kVacuum, kOccupied};
        return out;
    }
    // (h - lambda) v = 0 using whichever row is better conditioned.
    for (int k = 0; k < 2; ++k) {
        const double lam = out.values[k];
        StateVec2 v0{h(0, 1), lam - a};
        StateVec2 v1{lam - d, h(1, 0)};
        out.vectors[k] = (v0.norm2() >= v1.norm2() ? v0 : v1).normalized();
    }
    return out;
}

}  // namespace ffo
