// Invariant ladder operator for a driven level, checked against U b U^dagger,
// then the evolved vacuum and its phases.

#include <cstdio>

#include "ffo/ffo.hpp"

int main() {
    using namespace ffo;
    const HamiltonianSpec spec(TimeSignal::sinusoid(0.3, 1.0, 0.0, 1.0), TimeSignal::sinusoid(0.5, 0.1, 1.5707963267948966),
                               TimeSignal::sinusoid(0.5, 0.1), TimeSignal::constant(0.2));
    const double t_final = 5.0;
    const auto nu = integrate_nu(spec, kCanonicalNu, t_final, 1e-3);
    const auto u = evolve_unitary(spec, t_final);
    const auto vac = vacuum_trajectory(nu, spec);
    const auto phases = lr_phases(nu, spec);

    std::printf("%6s %12s %12s %12s %12s %12s\n", "t", "|nu_-|", "|nu_+|", "oracle", "|B vac|", "phi");
    for (std::size_t k = 0; k < nu.nu.size(); k += 1000) {
        const Operator2 b = build_B(nu.nu[k]);
        const double oracle = max_abs_diff(b, heisenberg_oracle(u.u[k], ladder_operators().b));
        std::printf("%6.2f %12.6f %12.6f %12.3e %12.3e %12.6f\n", nu.grid.t(k), std::abs(nu.nu[k].minus),
                    std::abs(nu.nu[k].plus), oracle, (b * vac[k].state).norm(), phases.records[k].phi());
    }
    std::printf("lambda1 drift %.3e, lambda2 drift %.3e\n", nu.max_lambda1_drift(), nu.max_lambda2_drift());
    return 0;
}
