#pragma once

#include "alasso/asymptotics.hpp"
#include "alasso/cdf_estimation.hpp"
#include "alasso/estimators.hpp"
#include "alasso/exact_dist.hpp"
#include "alasso/extended_real.hpp"
#include "alasso/location_model.hpp"
#include "alasso/montecarlo.hpp"
#include "alasso/normal.hpp"
#include "alasso/power_law.hpp"
#include "alasso/quadrature.hpp"
#include "alasso/rng.hpp"
#include "alasso/version.hpp"
