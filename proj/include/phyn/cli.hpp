#pragma once

#include "phyn/cli/app.hpp"
