#pragma once

// Umbrella header: the whole library in one include.

#include "chebbvp/bench.hpp"
#include "chebbvp/bvp.hpp"
#include "chebbvp/chebyshev.hpp"
#include "chebbvp/config.hpp"
#include "chebbvp/errors.hpp"
#include "chebbvp/expr.hpp"
#include "chebbvp/linalg.hpp"
#include "chebbvp/newton.hpp"
