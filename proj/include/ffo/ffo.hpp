#pragma once

#include "ffo/errors.hpp"
#include "ffo/grassmann.hpp"
#include "ffo/hamiltonian.hpp"
#include "ffo/invariants.hpp"
#include "ffo/numerics.hpp"
#include "ffo/operator2.hpp"
#include "ffo/propagator.hpp"
#include "ffo/reduction.hpp"
#include "ffo/states.hpp"
#include "ffo/sweep.hpp"
#include "ffo/time_signal.hpp"
#include "ffo/tolerances.hpp"
