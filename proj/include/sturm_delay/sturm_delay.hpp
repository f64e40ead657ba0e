#pragma once

#include "sturm_delay/asymptotics.hpp"
#include "sturm_delay/characteristic.hpp"
#include "sturm_delay/format.hpp"
#include "sturm_delay/integrator.hpp"
#include "sturm_delay/parallel.hpp"
#include "sturm_delay/piecewise.hpp"
#include "sturm_delay/problem.hpp"
#include "sturm_delay/problem_io.hpp"
#include "sturm_delay/quadrature.hpp"
#include "sturm_delay/spectrum.hpp"
#include "sturm_delay/volterra.hpp"
