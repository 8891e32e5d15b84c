#pragma once

#include "sparsegreedy/space.hpp"
#include "sparsegreedy/signal.hpp"
#include "sparsegreedy/combinatorics.hpp"
#include "sparsegreedy/chebyshev.hpp"
#include "sparsegreedy/greedy.hpp"
#include "sparsegreedy/analysis.hpp"
#include "sparsegreedy/experiments.hpp"
#include "sparsegreedy/io.hpp"
