#pragma once

// Convenience umbrella: partial-order similarity measures, classical ranking
// distances, and the perturbation-experiment harness.

#include "posim/ami.hpp"
#include "posim/bitset.hpp"
#include "posim/distances.hpp"
#include "posim/emi.hpp"
#include "posim/errors.hpp"
#include "posim/experiments.hpp"
#include "posim/linear_extensions.hpp"
#include "posim/mutual_information.hpp"
#include "posim/order.hpp"
#include "posim/parallel.hpp"
#include "posim/report.hpp"
#include "posim/rng.hpp"
