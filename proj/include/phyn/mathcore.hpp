#pragma once

#include "phyn/errors.hpp"
#include "phyn/mathcore/linalg.hpp"
#include "phyn/mathcore/normal.hpp"
#include "phyn/mathcore/parallel.hpp"
#include "phyn/mathcore/quadrature.hpp"
#include "phyn/mathcore/rng.hpp"
#include "phyn/mathcore/roots.hpp"
#include "phyn/mathcore/stats.hpp"
#include "phyn/mathcore/montecarlo.hpp"
