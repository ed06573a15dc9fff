#pragma once
// Umbrella include for the reputation market simulator library.

#include "repsim/core.hpp"
#include "repsim/rng.hpp"
#include "repsim/drs.hpp"
#include "repsim/baselines.hpp"
#include "repsim/attacks.hpp"
#include "repsim/sim.hpp"
#include "repsim/config.hpp"
#include "repsim/report.hpp"
