#pragma once

#include <optional>

#include "qdesign/quantum_core.hpp"

namespace qdesign {

// Informational quantities are in bits (binary logarithms) throughout;
// natural-log intermediates are converted at the boundary only.

/// Shannon entropy of a probability vector, 0 log 0 = 0.
double entropy_bits(const RealVector& probabilities);

/// I(X;Y) in bits, computed in the relative-entropy form
/// sum p_{x,y} log(p_{x,y} / (p_x q_y)) and clamped to >= 0.
double mutual_information(const JointDistribution& joint);

/// Conditional input distribution p_{x|Pi} = d p_x Tr[rho_x Pi] / Tr[Pi]
/// of a 2-design ensemble given an effect.
RealVector conditional_input_distribution(const Ensemble& ensemble, const Effect& effect);

/// Outcome distribution q_{y|rho} = Tr[Pi_y rho] of a POVM on a state.
RealVector outcome_distribution(const Povm& povm, const DensityOperator& rho);

/// Entropy lower bound log(N(d+1)/d * Tr[Pi]^2 / (Tr[Pi]^2 + Tr[Pi^2]))
/// for the input distribution of a uniform 2-design ensemble of N states.
/// Scale-invariant in Pi.
double ensemble_entropy_bound(const Effect& effect, int n_states, int dim);

/// Mirror bound for the outcome distribution of a uniform 2-design POVM.
double povm_entropy_bound(const DensityOperator& rho, int n_outcomes, int dim);

/// log(2d / (d+1)): dimension-only ceiling on the accessible information of
/// any 2-design ensemble. Increases with d, approaches one bit.
double accinfo_upper_bound(int dim);

/// Same ceiling for the informational power of uniform 2-design POVMs.
double infopower_upper_bound(int dim);

struct ScroogeBounds {
  double lower;  // log d - (1/ln 2) sum_{n=2}^d 1/n
  double upper;  // log d
};

/// Dimension-only window for the informational power of rank-one POVMs.
ScroogeBounds scrooge_bounds(int dim);

/// Pretty-good measurement of a 2-design ensemble: Pi_x = d p_x rho_x.
Povm pretty_good_povm(const Ensemble& ensemble);

/// Pretty-good preparation of a 2-design POVM: weight Tr[Pi_y]/d on
/// Pi_y / Tr[Pi_y].
Ensemble pretty_good_ensemble(const Povm& povm);

/// Closed-form mutual information of the SIC pretty-good strategy:
/// log d - (d-1)/d log(d+1).
double pg_sic_value(int dim);

/// Closed-form mutual information of the MUB pretty-good strategy:
/// log(d) / (d+1).
double pg_mub_value(int dim);

/// log(d (d^2 a + 1) / (d+1)) for arbitrary-rank SIC sets, 1/d^3 <= a <= 1/d^2.
double gen_sic_bound(int dim, double a);

/// log(d (k+1) / (d+1)) for arbitrary-rank MUB sets, 1/d <= k <= 1.
double gen_mub_bound(int dim, double k);

/// Per-state conditional-entropy lower bounds behind the arbitrary-rank
/// results: -log((a d^3 - a d^2 + d - 1) / (d (d^2 - 1))) for SIC-type,
/// log((d+1)^2 / (k+1)) for MUB-type.
double gen_sic_conditional_entropy_bound(int dim, double a);
double gen_mub_conditional_entropy_bound(int dim, double k);

struct BoundSet {
  int dimension;
  double accinfo_upper;
  double infopower_upper;
  double scrooge_lower;
  double trivial_upper;  // log d
  std::optional<double> gen_sic;
  std::optional<double> gen_mub;
};

BoundSet bounds_for_dimension(int dim, std::optional<double> a = std::nullopt,
                              std::optional<double> k = std::nullopt);

} // namespace qdesign
