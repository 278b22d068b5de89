#pragma once

#include "phyn/quizoracle/oracles.hpp"
#include "phyn/quizoracle/quiz_table.hpp"
