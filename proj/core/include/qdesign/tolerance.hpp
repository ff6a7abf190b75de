#pragma once

namespace qdesign {

/// Numerical tolerances used by all validation routines. A single mutable
/// global keeps test runs deterministic; individual checks never invent
/// their own thresholds.
struct ToleranceConfig {
  double hermiticity = 1e-10;       // max |M - M^dag| entry
  double psd = 1e-10;               // eigenvalue floor for states/effects
  double trace_one = 1e-10;         // |Tr[rho] - 1|
  double normalization = 1e-9;      // weight sums, POVM completeness, joint total
  double probability_floor = 1e-12; // Born entries in [-floor, 0) clamp to 0
  double design = 1e-9;             // default design / overlap validation
};

ToleranceConfig& tolerances();

} // namespace qdesign
