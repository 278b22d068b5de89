#pragma once

#include "phyn/hedge/delta_hedge.hpp"
#include "phyn/hedge/rollup.hpp"
