#pragma once

#include "holder_pg/core.hpp"
#include "holder_pg/experiment.hpp"
#include "holder_pg/linalg.hpp"
#include "holder_pg/problems.hpp"
#include "holder_pg/solvers.hpp"
#include "holder_pg/stepsize.hpp"
#include "holder_pg/validation.hpp"
