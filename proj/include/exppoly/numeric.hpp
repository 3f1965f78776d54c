#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace exppoly {

/// Complex scalar used throughout. Stored values must stay finite; routines
/// that can produce non-finite intermediates check and raise numeric_error.
using Cx = std::complex<double>;

/// Failure of an iterative or guarded numeric routine: root non-convergence,
/// overflow, non-integer winding, size-cap overrun. Malformed inputs raise
/// std::invalid_argument instead.
class numeric_error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Absolute floor and relative factor shared by the coefficient zero tests.
inline constexpr double kAbsFloor = 1e-12;
inline constexpr double kRelEps = 1e-10;

inline bool is_finite(Cx z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

/// |z| <= 1e-12: the guard used when a quantity must be treated as exactly zero.
inline bool near_zero(Cx z) { return std::abs(z) <= kAbsFloor; }

}  // namespace exppoly
