#pragma once

#include <cmath>

#include "geowl/errors.hpp"

namespace geowl {

/// Decimal rounding applied to distances and derived scalars before they
/// are hashed. Rounding is half-away-from-zero, which is deterministic
/// across platforms.
struct Quantizer {
  int decimals = 9;

  explicit Quantizer(int r = 9) : decimals(r) {
    if (r < 0 || r > 12) throw ConfigError("quantizer decimals must be in [0, 12]");
  }
};

inline double quantize(double x, const Quantizer& q) {
  static constexpr double kPow10[] = {1e0, 1e1, 1e2, 1e3, 1e4,  1e5,  1e6,
                                      1e7, 1e8, 1e9, 1e10, 1e11, 1e12};
  const double f = kPow10[q.decimals];
  const double r = std::round(x * f) / f;
  return r == 0.0 ? 0.0 : r;
}

}  // namespace geowl
