#pragma once

#include <string>

#include <boost/multiprecision/cpp_bin_float.hpp>

namespace graphctl {

/// Working type for Diophantine computations (50 significant decimal digits).
using Real = boost::multiprecision::cpp_bin_float_50;

/// A real number together with an absolute uncertainty and the text it came from.
struct Number {
  Real value = 0;
  Real uncertainty = 0;
  std::string expr;

  double to_double() const { return value.convert_to<double>(); }

  static Number from_double(double x);
};

/// Evaluates expressions such as `sqrt(2)`, `e`, `pi`, `7/5`, `1 + sqrt(5)/2`,
/// `liouville(4)` (partial sum of 10^-k!). Throws std::invalid_argument on bad input.
Number parse_number(const std::string& expr);

}  // namespace graphctl
