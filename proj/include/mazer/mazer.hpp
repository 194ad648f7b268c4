#pragma once

// Umbrella header: nonresonant one-photon mazer scattering.

#include "mazer/core.hpp"
#include "mazer/errors.hpp"
#include "mazer/mesa.hpp"
#include "mazer/presets.hpp"
#include "mazer/regimes.hpp"
#include "mazer/solver.hpp"
#include "mazer/sweep.hpp"
