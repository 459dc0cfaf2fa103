#pragma once

#include <cmath>
#include <limits>

namespace rmimo {

// Power ratio from decibels.  -inf maps to 0, which is how "no LOS component"
// is spelled on a dB axis.
inline double db_to_linear(double value_db) {
  if (std::isinf(value_db) && value_db < 0) return 0.0;
  return std::pow(10.0, value_db / 10.0);
}

inline double linear_to_db(double value) {
  if (value == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(value);
}

}  // namespace rmimo
