#pragma once

#include <algorithm>
#include <array>
#include <iterator>
#include <cmath>
#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "ffo/errors.hpp"

namespace ffo {

namespace signal {

struct Constant {
    double value = 0.0;
};

/// offset + amplitude * sin(frequency * t + phase)
struct Sinusoid {
    double amplitude = 0.0;
    double frequency = 0.0;
    double phase = 0.0;
    double offset = 0.0;
};

/// sum_k coeffs[k] * t^k
struct Polynomial {
    std::vector<double> coeffs;
};

/// offset + amplitude * exp(rate * t)
struct Exponential {
    double amplitude = 1.0;
    double rate = 0.0;
    double offset = 0.0;
};

/// Natural cubic spline through (t_k, v_k); t_k strictly increasing.
class Tabulated {
public:
    Tabulated(std::vector<double> t, std::vector<double> v) : t_(std::move(t)), v_(std::move(v)) {
        if (t_.size() != v_.size()) throw ContractError("tabulated signal: t and v differ in length");
        if (t_.size() < 2) throw ContractError("tabulated signal: need at least two samples");
        for (std::size_t k = 1; k < t_.size(); ++k)
            if (!(t_[k] > t_[k - 1])) throw ContractError("tabulated signal: times must be strictly increasing");
        build_moments();
    }

    const std::vector<double>& times() const noexcept { return t_; }
    const std::vector<double>& values() const noexcept { return v_; }

    /// Returns {value, d1, d2} at t.
    std::array<double, 3> eval(double t) const {
        if (t < t_.front() || t > t_.back())
            throw RangeError("tabulated signal evaluated at t=" + std::to_string(t) + " outside [" +
                             std::to_string(t_.front()) + ", " + std::to_string(t_.back()) + "]");
        auto it = std::upper_bound(t_.begin(), t_.end(), t);
        std::size_t k = static_cast<std::size_t>(std::distance(t_.begin(), it));
        k = std::clamp<std::size_t>(k, 1, t_.size() - 1) - 1;
        const double h = t_[k + 1] - t_[k];
        const double a = (t_[k + 1] - t) / h;
        const double b = (t - t_[k]) / h;
        const double mk = m_[k], mk1 = m_[k + 1];
        const double value = a * v_[k] + b * v_[k + 1] + ((a * a * a - a) * mk + (b * b * b - b) * mk1) * h * h / 6.0;
        const double d1 = (v_[k + 1] - v_[k]) / h - (3.0 * a * a - 1.0) / 6.0 * h * mk + (3.0 * b * b - 1.0) / 6.0 * h * mk1;
        const double d2 = a * mk + b * mk1;
        return {value, d1, d2};
    }

private:
    void build_moments() {
        const std::size_t n = t_.size();
        m_.assign(n, 0.0);
        if (n < 3) return;
        // Thomas algorithm on the interior second-derivative system.
        std::vector<double> c(n, 0.0), d(n, 0.0);
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = t_[i] - t_[i - 1];
            const double h1 = t_[i + 1] - t_[i];
            const double diag = 2.0 * (h0 + h1);
            const double rhs = 6.0 * ((v_[i + 1] - v_[i]) / h1 - (v_[i] - v_[i - 1]) / h0);
            const double denom = diag - h0 * c[i - 1];
            c[i] = h1 / denom;
            d[i] = (rhs - h0 * d[i - 1]) / denom;
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m_[i] = d[i] - c[i] * m_[i + 1];
            if (i == 1) break;
        }
    }

    std::vector<double> t_;
    std::vector<double> v_;
    std::vector<double> m_;
};

}  // namespace signal

/// Real function of time with analytic first and second derivatives.
/// Tabulated signals use spline derivatives.
class TimeSignal {
public:
    using Variant = std::variant<signal::Constant, signal::Sinusoid, signal::Polynomial, signal::Exponential,
                                 signal::Tabulated>;

    TimeSignal() : v_(signal::Constant{0.0}) {}
    TimeSignal(Variant v) : v_(std::move(v)) {}

    static TimeSignal constant(double c) { return TimeSignal{signal::Constant{c}}; }
    static TimeSignal sinusoid(double amplitude, double frequency, double phase = 0.0, double offset = 0.0) {
        return TimeSignal{signal::Sinusoid{amplitude, frequency, phase, offset}};
    }
    static TimeSignal polynomial(std::vector<double> coeffs) { return TimeSignal{signal::Polynomial{std::move(coeffs)}}; }
    static TimeSignal exponential(double amplitude, double rate, double offset = 0.0) {
        return TimeSignal{signal::Exponential{amplitude, rate, offset}};
    }
    static TimeSignal tabulated(std::vector<double> t, std::vector<double> v) {
        return TimeSignal{signal::Tabulated{std::move(t), std::move(v)}};
    }

    double value(double t) const { return eval(t)[0]; }
    double d1(double t) const { return eval(t)[1]; }
    double d2(double t) const { return eval(t)[2]; }

    /// {value, d1, d2}
    std::array<double, 3> eval(double t) const {
        return std::visit([t](const auto& s) { return eval_one(s, t); }, v_);
    }

    /// True when the signal is the constant zero function.
    bool is_identically_zero() const {
        if (const auto* c = std::get_if<signal::Constant>(&v_)) return c->value == 0.0;
        if (const auto* s = std::get_if<signal::Sinusoid>(&v_)) return s->amplitude == 0.0 && s->offset == 0.0;
        if (const auto* p = std::get_if<signal::Polynomial>(&v_))
            return std::all_of(p->coeffs.begin(), p->coeffs.end(), [](double c) { return c == 0.0; });
        if (const auto* e = std::get_if<signal::Exponential>(&v_)) return e->amplitude == 0.0 && e->offset == 0.0;
        const auto& tab = std::get<signal::Tabulated>(v_);
        return std::all_of(tab.values().begin(), tab.values().end(), [](double x) { return x == 0.0; });
    }

    const Variant& variant() const noexcept { return v_; }

private:
    static std::array<double, 3> eval_one(const signal::Constant& c, double) { return {c.value, 0.0, 0.0}; }
    static std::array<double, 3> eval_one(const signal::Sinusoid& s, double t) {
        const double arg = s.frequency * t + s.phase;
        const double sn = std::sin(arg), cs = std::cos(arg);
        return {s.offset + s.amplitude * sn, s.amplitude * s.frequency * cs,
                -s.amplitude * s.frequency * s.frequency * sn};
    }
    static std::array<double, 3> eval_one(const signal::Polynomial& p, double t) {
        // Horner for value and both derivatives.
        double v = 0.0, d1 = 0.0, d2 = 0.0;
        for (auto it = p.coeffs.rbegin(); it != p.coeffs.rend(); ++it) {
            d2 = d2 * t + 2.0 * d1;
            d1 = d1 * t + v;
            v = v * t + *it;
        }
        return {v, d1, d2};
    }
    static std::array<double, 3> eval_one(const signal::Exponential& e, double t) {
        const double x = e.amplitude * std::exp(e.rate * t);
        return {e.offset + x, e.rate * x, e.rate * e.rate * x};
    }
    static std::array<double, 3> eval_one(const signal::Tabulated& tab, double t) { return tab.eval(t); }

    Variant v_;
};

}  // namespace ffo
