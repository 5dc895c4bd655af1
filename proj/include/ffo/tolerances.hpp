#pragma once

namespace ffo {

/// Every threshold used by the library lives here so that a scenario can
/// override them in one place.
struct ToleranceConfig {
    double algebraic = 1e-12;
    double dynamical = 1e-8;
    /// |f(t)| below this makes the nu_plus / epsilon reduction singular.
    double f_min = 1e-9;
    /// |nu_plus| below this makes the compact nu_minus formula singular.
    double nu_min = 1e-9;
    /// |nu_minus| below this switches the vacuum to the null-space route.
    double vacuum_nu_min = 1e-4;
    /// Largest ||U^dagger U - 1||_max accepted by the Heisenberg transport.
    double unitarity = 1e-9;
};

}  // namespace ffo
