#pragma once

#include "phyn/pde/diffusion.hpp"
#include "phyn/pde/quadratic_model.hpp"
#include "phyn/pde/solver.hpp"
