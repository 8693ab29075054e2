#pragma once

#include "tsparse/rational.hpp"
#include "tsparse/logspace.hpp"
#include "tsparse/rates.hpp"
#include "tsparse/predict.hpp"
#include "tsparse/rng.hpp"
#include "tsparse/graph.hpp"
#include "tsparse/solver.hpp"
#include "tsparse/moments.hpp"
#include "tsparse/experiments.hpp"
