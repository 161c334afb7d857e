#pragma once

#include "pentapod/cases.hpp"
#include "pentapod/geometry.hpp"
#include "pentapod/pipeline.hpp"
#include "pentapod/polynomial.hpp"
#include "pentapod/polysys.hpp"
#include "pentapod/solvers.hpp"
