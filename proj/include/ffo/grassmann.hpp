#pragma once

#include <array>
#include <cmath>
#include <ostream>

#include "ffo/operator2.hpp"

namespace ffo {

/// Element of the algebra generated by two anticommuting variables zeta and
/// zeta^*. Stored over the monomial basis {1, zeta, zeta^*, zeta^* zeta};
/// zeta zeta^* is represented as -(zeta^* zeta).
class GrassmannElement {
public:
    enum Slot { kOne = 0, kZeta = 1, kZetaStar = 2, kTop = 3 };

    constexpr GrassmannElement() = default;
    constexpr GrassmannElement(Complex one, Complex zeta, Complex zeta_star, Complex top)
        : c_{one, zeta, zeta_star, top} {}
    constexpr GrassmannElement(Complex scalar) : c_{scalar, 0.0, 0.0, 0.0} {}

    static constexpr GrassmannElement zeta() { return {0.0, 1.0, 0.0, 0.0}; }
    static constexpr GrassmannElement zeta_star() { return {0.0, 0.0, 1.0, 0.0}; }
    /// zeta^* zeta
    static constexpr GrassmannElement top() { return {0.0, 0.0, 0.0, 1.0}; }

    constexpr Complex operator[](int slot) const { return c_[slot]; }
    constexpr Complex& operator[](int slot) { return c_[slot]; }

    GrassmannElement even_part() const { return {c_[0], 0.0, 0.0, c_[3]}; }
    GrassmannElement odd_part() const { return {0.0, c_[1], c_[2], 0.0}; }

    /// Grade involution: negates the odd part.
    GrassmannElement involution() const { return {c_[0], -c_[1], -c_[2], c_[3]}; }

    /// Conjugation: complex-conjugates scalars, swaps zeta <-> zeta^*, and
    /// reverses monomial order, so (zeta^* zeta)^* = zeta^* zeta.
    GrassmannElement conjugate() const {
        return {std::conj(c_[0]), std::conj(c_[2]), std::conj(c_[1]), std::conj(c_[3])};
    }

    double max_abs() const {
        double r = 0.0;
        for (const auto& z : c_) r = std::max(r, std::abs(z));
        return r;
    }

    GrassmannElement& operator+=(const GrassmannElement& o) {
        for (int k = 0; k < 4; ++k) c_[k] += o.c_[k];
        return *this;
    }
    GrassmannElement& operator-=(const GrassmannElement& o) {
        for (int k = 0; k < 4; ++k) c_[k] -= o.c_[k];
        return *this;
    }
    GrassmannElement& operator*=(Complex s) {
        for (auto& z : c_) z *= s;
        return *this;
    }

    friend GrassmannElement operator+(GrassmannElement a, const GrassmannElement& b) { return a += b; }
    friend GrassmannElement operator-(GrassmannElement a, const GrassmannElement& b) { return a -= b; }
    friend GrassmannElement operator-(GrassmannElement a) { return a *= -1.0; }
    friend GrassmannElement operator*(Complex s, GrassmannElement a) { return a *= s; }
    friend GrassmannElement operator*(GrassmannElement a, Complex s) { return a *= s; }

    /// Graded product. zeta zeta = zeta^* zeta^* = 0 and zeta zeta^* = -zeta^* zeta.
    friend GrassmannElement operator*(const GrassmannElement& x, const GrassmannElement& y) {
        const auto& a = x.c_;
        const auto& b = y.c_;
        return {a[0] * b[0],
                a[0] * b[1] + a[1] * b[0],
                a[0] * b[2] + a[2] * b[0],
                a[0] * b[3] + a[3] * b[0] + a[2] * b[1] - a[1] * b[2]};
    }

    friend bool operator==(const GrassmannElement&, const GrassmannElement&) = default;

    friend std::ostream& operator<<(std::ostream& os, const GrassmannElement& x) {
        return os << x.c_[0] << " + " << x.c_[1] << " z + " << x.c_[2] << " z* + " << x.c_[3] << " z*z";
    }

private:
    std::array<Complex, 4> c_{};
};

inline GrassmannElement g_mul(const GrassmannElement& x, const GrassmannElement& y) { return x * y; }

/// Berezin integral with measure d zeta^* d zeta: only zeta zeta^* survives,
/// with weight +1, so the stored zeta^* zeta coefficient enters with -1.
inline Complex berezin_integrate(const GrassmannElement& x) { return -x[GrassmannElement::kTop]; }

/// a0 |0> + a1 |1> with Grassmann coefficients written to the left.
struct GrassmannKet {
    GrassmannElement a0;
    GrassmannElement a1;

    double max_abs() const { return std::max(a0.max_abs(), a1.max_abs()); }

    friend GrassmannKet operator+(const GrassmannKet& x, const GrassmannKet& y) { return {x.a0 + y.a0, x.a1 + y.a1}; }
    friend GrassmannKet operator-(const GrassmannKet& x, const GrassmannKet& y) { return {x.a0 - y.a0, x.a1 - y.a1}; }
    /// Left multiplication by a Grassmann element.
    friend GrassmannKet operator*(const GrassmannElement& c, const GrassmannKet& k) { return {c * k.a0, c * k.a1}; }

    static GrassmannKet from_state(const StateVec2& v) { return {GrassmannElement{v.amp0}, GrassmannElement{v.amp1}}; }
};

/// How operators pass Grassmann coefficients.
enum class Grading {
    /// Odd operators anticommute with odd Grassmann elements; conjugation
    /// reverses monomial order.
    graded,
    /// Diagnostic only: everything commutes and conjugation keeps the order.
    commuting,
};

/// Grassmann parity assigned to an operator when it acts on a GrassmannKet.
enum class OperatorParity { even, odd };

/// Acts with a 2x2 operator on a Grassmann ket. An odd operator (b, b^dagger,
/// B(t), B^dagger(t)) flips the sign of every odd coefficient it moves past.
inline GrassmannKet apply(const Operator2& op, OperatorParity parity, const GrassmannKet& k,
                          Grading grading = Grading::graded) {
    const bool flip = parity == OperatorParity::odd && grading == Grading::graded;
    const GrassmannElement c0 = flip ? k.a0.involution() : k.a0;
    const GrassmannElement c1 = flip ? k.a1.involution() : k.a1;
    return {op(0, 0) * c0 + op(0, 1) * c1, op(1, 0) * c0 + op(1, 1) * c1};
}

enum class FermionOp { b, b_dag };

inline GrassmannKet apply_fermion_op(FermionOp op, const GrassmannKet& k, Grading grading = Grading::graded) {
    const auto l = ladder_operators();
    return apply(op == FermionOp::b ? l.b : l.b_dag, OperatorParity::odd, k, grading);
}

/// e^{-zeta^* zeta / 2}(|0> - zeta |1>) with zeta -> scale * zeta.
/// The exponential truncates exactly: e^{-x/2} = 1 - x/2 for x = zeta^* zeta.
inline GrassmannKet coherent_ket(Complex scale = 1.0) {
    const GrassmannElement norm{1.0, 0.0, 0.0, -0.5 * std::norm(scale)};
    const GrassmannElement z = scale * GrassmannElement::zeta();
    return {norm, -(norm * z)};
}

/// Integrates |zeta><zeta| entrywise with the Berezin rules. Entry (i, j)
/// carries a_i conj(a_j), with the sign picked up by moving conj(a_j) through
/// |i><j| (odd when i != j).
inline Operator2 completeness_matrix(Grading grading = Grading::graded) {
    const GrassmannKet ket = coherent_ket(1.0);
    const auto conj = [grading](const GrassmannElement& x) {
        if (grading == Grading::graded) return x.conjugate();
        // Order kept: (zeta^* zeta)^* -> zeta zeta^* = -(zeta^* zeta).
        GrassmannElement c = x.conjugate();
        c[GrassmannElement::kTop] = -c[GrassmannElement::kTop];
        return c;
    };
    const std::array<GrassmannElement, 2> a{ket.a0, ket.a1};
    Operator2 out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            GrassmannElement bra = conj(a[j]);
            if (grading == Grading::graded && i != j) bra = bra.involution();
            out(i, j) = berezin_integrate(a[i] * bra);
        }
    }
    return out;
}

/// max |integral of |zeta><zeta| - 1| over the four entries.
inline double completeness_check(Grading grading = Grading::graded) {
    return max_abs_diff(completeness_matrix(grading), Operator2::identity());
}

}  // namespace ffo
