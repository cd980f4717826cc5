#pragma once

#include "hermrank/covariance.hpp"
#include "hermrank/dependence.hpp"
#include "hermrank/experiments.hpp"
#include "hermrank/hermite_algebra.hpp"
#include "hermrank/numerics.hpp"
#include "hermrank/parallel.hpp"
#include "hermrank/philox.hpp"
#include "hermrank/poly_parse.hpp"
#include "hermrank/polynomial.hpp"
#include "hermrank/simulator.hpp"
#include "hermrank/statistics.hpp"
