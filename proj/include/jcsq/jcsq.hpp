#pragma once

// Umbrella header for the numerical library (the CLI lives in jcsq/cli.hpp).

#include "jcsq/analytic_states.hpp"
#include "jcsq/errors.hpp"
#include "jcsq/evolve.hpp"
#include "jcsq/hamiltonian.hpp"
#include "jcsq/hilbert.hpp"
#include "jcsq/io.hpp"
#include "jcsq/linalg.hpp"
#include "jcsq/observables.hpp"
#include "jcsq/phase_space.hpp"
#include "jcsq/propagator.hpp"
#include "jcsq/spectra.hpp"
#include "jcsq/version.hpp"
