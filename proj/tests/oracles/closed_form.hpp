#pragma once

// Reference evolutions that do not go through the stepping code.

#include <cmath>

#include "ffo/operator2.hpp"

namespace oracle {

/// exp(-i H t) for constant Hermitian H via its eigendecomposition.
inline ffo::Operator2 constant_propagator(const ffo::Operator2& h, double t) {
    const auto eig = ffo::eigen_hermitian(h);
    ffo::Operator2 u = ffo::Operator2::zero();
    for (int n = 0; n < 2; ++n) u += std::polar(1.0, -eig.values[n] * t) * ffo::outer(eig.vectors[n], eig.vectors[n]);
    return u;
}

/// Central difference of a scalar function.
template <class F>
double central_difference(const F& f, double t, double h) {
    return (f(t + h) - f(t - h)) / (2.0 * h);
}

}  // namespace oracle
