#pragma once

// Casimir energy of two plasma-model mirrors by explicit mode decomposition:
// optics of a single mirror, root-finding and quadrature utilities, the
// coupled plasmonic/photonic mode solver, and the energy integrals with
// their asymptotic fits.

#include "casmode/continuation.hpp"
#include "casmode/csv.hpp"
#include "casmode/energy.hpp"
#include "casmode/errors.hpp"
#include "casmode/fit.hpp"
#include "casmode/modes.hpp"
#include "casmode/optics.hpp"
#include "casmode/parallel.hpp"
#include "casmode/quadrature.hpp"
#include "casmode/roots.hpp"
#include "casmode/types.hpp"
