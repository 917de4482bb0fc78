#pragma once

// Umbrella header: steady-state Bloch solutions with incoherent pumping,
// the perturbation ladder for the probe dispersion and lattice potential,
// PT diagnostics, split-step propagation, and Floquet-Bloch spectra.

#include "eitpt/atom.hpp"
#include "eitpt/bloch.hpp"
#include "eitpt/config.hpp"
#include "eitpt/constants.hpp"
#include "eitpt/design.hpp"
#include "eitpt/errors.hpp"
#include "eitpt/full_mb.hpp"
#include "eitpt/io.hpp"
#include "eitpt/perturbation.hpp"
#include "eitpt/potential.hpp"
#include "eitpt/profiles.hpp"
#include "eitpt/propagator.hpp"
#include "eitpt/spectrum.hpp"
