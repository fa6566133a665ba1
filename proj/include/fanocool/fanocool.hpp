#pragma once

// Umbrella header for the fano-cool library: ground-state cooling of a
// mechanical mode in a Fano-mirror optomechanical cavity, with
// double-sided or single-sided coherent feedback.

#include "fanocool/config.hpp"
#include "fanocool/dynamics.hpp"
#include "fanocool/errors.hpp"
#include "fanocool/feedback.hpp"
#include "fanocool/observables.hpp"
#include "fanocool/params.hpp"
#include "fanocool/plot.hpp"
#include "fanocool/solvers.hpp"
#include "fanocool/sweep.hpp"
#include "fanocool/version.hpp"
