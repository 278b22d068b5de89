#pragma once

#include "phyn/processes/market.hpp"
#include "phyn/processes/path_csv.hpp"
#include "phyn/processes/paths.hpp"
