#pragma once

#include "meanbound/comparison.hpp"
#include "meanbound/families.hpp"
#include "meanbound/harness.hpp"
#include "meanbound/matrix.hpp"
#include "meanbound/matrix_io.hpp"
#include "meanbound/means.hpp"
#include "meanbound/operator_bounds.hpp"
#include "meanbound/refinement.hpp"
#include "meanbound/report.hpp"
#include "meanbound/rng.hpp"
#include "meanbound/scalar_bounds.hpp"
#include "meanbound/version.hpp"
