#pragma once

#include "phyn/analytic/black_scholes.hpp"
#include "phyn/analytic/contracts.hpp"
