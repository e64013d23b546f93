#pragma once

// Umbrella header for the esif library: hierarchical structured incomplete
// factorization preconditioners for dense SPD systems, with a PCG solver,
// reference problem generators, and spectral diagnostics.

#include "esif/baselines.hpp"
#include "esif/bench.hpp"
#include "esif/compression.hpp"
#include "esif/dense.hpp"
#include "esif/diagnostics.hpp"
#include "esif/errors.hpp"
#include "esif/esif_factor.hpp"
#include "esif/flops.hpp"
#include "esif/matrix.hpp"
#include "esif/matrix_market.hpp"
#include "esif/partition.hpp"
#include "esif/pcg.hpp"
#include "esif/problems.hpp"
#include "esif/rng.hpp"
#include "esif/verify.hpp"
