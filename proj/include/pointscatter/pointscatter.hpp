#pragma once

// Umbrella header for the two-point Dirac interaction library.

#include "pointscatter/errors.hpp"
#include "pointscatter/tolerances.hpp"
#include "pointscatter/matrix2.hpp"
#include "pointscatter/lambda_algebra.hpp"
#include "pointscatter/transfer_core.hpp"
#include "pointscatter/parallel.hpp"
#include "pointscatter/roots.hpp"
#include "pointscatter/spectra.hpp"
#include "pointscatter/scattering.hpp"
#include "pointscatter/special_cases.hpp"
#include "pointscatter/resonance.hpp"
#include "pointscatter/nonrel_limit.hpp"
