#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "qdesign/quantum_core.hpp"

namespace qdesign {

/// Candidate spherical design: probability weights over pure states.
/// Basis/index labels (b, x) are kept explicitly for MUB sets since the
/// unbiasedness targets depend on them. Labels are 0-based.
struct WeightedStateSet {
  struct Point {
    double weight;
    PureState state;
  };

  int dim;
  std::vector<Point> points;
  std::optional<std::vector<std::pair<int, int>>> labels;

  int size() const { return static_cast<int>(points.size()); }
};

/// Weighted mixed-state set with its purity parameter: a = Tr[rho^2]/d^2
/// for SIC-type sets, k = Tr[rho^2] for MUB-type sets.
struct MixedStateSet {
  struct Point {
    double weight;
    DensityOperator state;
  };

  int dim;
  std::vector<Point> points;
  std::optional<double> purity_parameter;
  std::optional<std::vector<std::pair<int, int>>> labels;

  int size() const { return static_cast<int>(points.size()); }
};

struct DesignReport {
  int order_checked;
  double operator_deviation;    // max |sum_x p_x proj^(x)s - P_sym/M|
  double frame_potential;       // sum p_x p_x' |<phi_x|phi_x'>|^{2s}
  double frame_potential_target; // 1/M
  bool verdict;
};

struct SetValidationReport {
  double max_deviation;
  bool pass;
};

/// Moment test against the Haar average, s in {1, 2}.
DesignReport check_design(const WeightedStateSet& set, int order, double tol);
DesignReport check_design(const WeightedStateSet& set, int order);

/// d^2 equiangular states with |<phi_x|phi_y>|^2 = (d delta + 1)/(d + 1).
/// d = 2 is the tetrahedron from its Weyl-Heisenberg fiducial; d = 3 uses
/// the explicit nine-column matrix with xi = exp(i pi / 3).
WeightedStateSet builtin_sic(int dim);

/// d + 1 mutually unbiased bases, d in {2, 3, 4}. d = 2 uses the Pauli
/// eigenbases; d = 3 and d = 4 use explicit column matrices. No maximal
/// set is known in dimension 6.
WeightedStateSet builtin_mub(int dim);

/// Orthonormal qu-quart basis whose statistics against the d = 4 maximal
/// MUB set give mutual information 3/5 exactly.
WeightedStateSet d4_orthonormal_witness();

/// The tetrahedron fiducial for d = 2: |<0|f>|^2 = (1 + 1/sqrt(3))/2.
PureState sic_fiducial_d2();

/// The d^2 states X^j Z^k |f> with uniform weights. Makes no SIC claim;
/// callers validate with validate_sic.
WeightedStateSet weyl_heisenberg_orbit(const PureState& fiducial);

/// Pairwise-overlap checks against the equiangularity / unbiasedness targets.
SetValidationReport validate_sic(const WeightedStateSet& set, double tol);
SetValidationReport validate_sic(const WeightedStateSet& set);
SetValidationReport validate_mub(const WeightedStateSet& set, double tol);
SetValidationReport validate_mub(const WeightedStateSet& set);

/// rho_x = t |phi_x><phi_x| + (1 - t) 1/d for every point; reports the
/// induced purity parameter (SIC: a = Tr[rho^2]/d^2, MUB: k = Tr[rho^2]).
MixedStateSet depolarize(const WeightedStateSet& set, double t);

/// Pairwise Hilbert-Schmidt products against the arbitrary-rank targets
/// plus the completeness sums (d * 1 for SIC-type, (d+1) * 1 for MUB-type).
/// The purity parameter is taken from the set or inferred from the mean
/// diagonal product.
SetValidationReport validate_generalized_sic(const MixedStateSet& set, double tol);
SetValidationReport validate_generalized_mub(const MixedStateSet& set, double tol);

Ensemble as_ensemble(const WeightedStateSet& set);
Ensemble as_ensemble(const MixedStateSet& set);

/// Pi_y = d p_y |phi_y><phi_y|; requires the 1-design property so the
/// effects sum to the identity.
Povm as_povm(const WeightedStateSet& set);
Povm as_povm(const MixedStateSet& set);

/// Inverse of as_povm for rank-one POVMs: q_y = Tr[Pi_y]/d with normalized
/// projector states. Raises if an effect is not rank-one within tol.
WeightedStateSet povm_as_weighted_set(const Povm& povm, double rank_one_tol = 1e-9);

/// Ensembles of pure states to a weighted set (weights kept as-is).
WeightedStateSet ensemble_as_weighted_set(const Ensemble& ensemble, double rank_one_tol = 1e-9);

} // namespace qdesign
