#pragma once

#include "xyconc/analytic.hpp"
#include "xyconc/commands.hpp"
#include "xyconc/dynamics.hpp"
#include "xyconc/eigen.hpp"
#include "xyconc/entanglement.hpp"
#include "xyconc/errors.hpp"
#include "xyconc/io.hpp"
#include "xyconc/matrix.hpp"
#include "xyconc/model.hpp"
#include "xyconc/solve.hpp"
