#pragma once

#include "phyn/lattice/ledger_csv.hpp"
#include "phyn/lattice/numeraire.hpp"
#include "phyn/lattice/pricing.hpp"
#include "phyn/lattice/tree.hpp"
#include "phyn/lattice/world_series.hpp"
