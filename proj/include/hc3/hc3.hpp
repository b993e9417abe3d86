#pragma once

// Everything in one include.

#include "hc3/asymptotic_series.hpp"
#include "hc3/boundary_gauge.hpp"
#include "hc3/collar_problem.hpp"
#include "hc3/constants.hpp"
#include "hc3/critical_field.hpp"
#include "hc3/disc_spectrum.hpp"
#include "hc3/error.hpp"
#include "hc3/model_operator.hpp"
#include "hc3/optimize.hpp"
#include "hc3/parallel.hpp"
#include "hc3/perturbation.hpp"
#include "hc3/puiseux_series.hpp"
#include "hc3/tridiagonal.hpp"
