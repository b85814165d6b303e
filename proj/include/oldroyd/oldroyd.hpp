#pragma once

#include "oldroyd/grid.hpp"
#include "oldroyd/field.hpp"
#include "oldroyd/transform.hpp"
#include "oldroyd/spectral.hpp"
#include "oldroyd/constitutive.hpp"
#include "oldroyd/hypotheses.hpp"
#include "oldroyd/rng.hpp"
#include "oldroyd/galerkin.hpp"
#include "oldroyd/integrator.hpp"
#include "oldroyd/diagnostics.hpp"
#include "oldroyd/simulation.hpp"
#include "oldroyd/config.hpp"
#include "oldroyd/initial.hpp"
#include "oldroyd/snapshot.hpp"
#include "oldroyd/csv.hpp"
#include "oldroyd/commands.hpp"
