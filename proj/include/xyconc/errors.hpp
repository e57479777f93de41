#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace xyconc {

// Failure of a numeric procedure: eigensolver non-convergence, singular linear
// solve, integrator producing an invalid state. Kept distinct from argument and
// domain misuse so the CLI can map each class to its own exit code.
class numeric_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Independent computations of the same quantity disagree beyond tolerance.
class cross_validation_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string num_str(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

}  // namespace detail

}  // namespace xyconc
