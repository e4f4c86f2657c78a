#pragma once

// Umbrella header: exact construction and certification machinery for
// piecewise lambda-affine contractions of the interval.

#include "pwc/connection.hpp"
#include "pwc/errors.hpp"
#include "pwc/map.hpp"
#include "pwc/metrics.hpp"
#include "pwc/orbit.hpp"
#include "pwc/parallel.hpp"
#include "pwc/rotation.hpp"
#include "pwc/scalar.hpp"
