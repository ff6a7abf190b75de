#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "qdesign/quantum_core.hpp"

namespace qdesign::testing {

inline bool matrix_near(const ComplexMatrix& a, const ComplexMatrix& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs_entry(a - b) <= tol;
}

inline ComplexMatrix identity(int d) { return ComplexMatrix::Identity(d, d); }

// Qubit state from a Bloch vector; an implementation-independent route to
// tetrahedron statistics.
inline ComplexMatrix bloch_state(double x, double y, double z) {
  ComplexMatrix rho(2, 2);
  const Complex i{0.0, 1.0};
  rho << 0.5 * (1.0 + z), 0.5 * (x - i * y), 0.5 * (x + i * y), 0.5 * (1.0 - z);
  return rho;
}

} // namespace qdesign::testing
