#pragma once

#include "phyn/rates/bond_option.hpp"
#include "phyn/rates/curve.hpp"
#include "phyn/rates/curve_csv.hpp"
#include "phyn/rates/hjm.hpp"
#include "phyn/rates/products.hpp"
#include "phyn/rates/short_rate.hpp"
