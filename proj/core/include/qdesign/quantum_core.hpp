#pragma once

#include <complex>
#include <stdexcept>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "qdesign/tolerance.hpp"

namespace qdesign {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Thrown when an operator or distribution fails its validity checks.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

bool is_hermitian(const ComplexMatrix& m, double tol);

/// Largest |entry| of m; zero for empty matrices.
double max_abs_entry(const ComplexMatrix& m);

/// Hilbert-Schmidt inner product Tr[A^dag B] without forming the product.
Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b);

/// Tr[A B] for Hermitian A, B (real by Hermiticity).
double real_trace_product(const ComplexMatrix& a, const ComplexMatrix& b);

/// A normalized pure state |phi> of dimension d.
class PureState {
 public:
  explicit PureState(ComplexVector amplitudes);

  int dim() const { return static_cast<int>(amplitudes_.size()); }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  ComplexMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

  /// Multiplies by a global phase so the first nonzero amplitude is
  /// real positive. Overlap tables become reproducible bit-for-bit.
  PureState canonicalized() const;

 private:
  ComplexVector amplitudes_;
};

Complex overlap(const PureState& a, const PureState& b);
double overlap_squared(const PureState& a, const PureState& b);

/// Unit-trace positive semidefinite operator.
class DensityOperator {
 public:
  explicit DensityOperator(ComplexMatrix matrix);
  static DensityOperator unchecked(ComplexMatrix matrix);
  static DensityOperator maximally_mixed(int dim);
  static DensityOperator from_pure(const PureState& psi);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }
  double purity() const { return hs_inner(matrix_, matrix_).real(); }

 private:
  struct Unchecked {};
  DensityOperator(ComplexMatrix matrix, Unchecked) : matrix_(std::move(matrix)) {}
  ComplexMatrix matrix_;
};

/// Measurement element: Hermitian with spectrum in [0, 1].
class Effect {
 public:
  explicit Effect(ComplexMatrix matrix);
  static Effect unchecked(ComplexMatrix matrix);
  static Effect from_pure(const PureState& psi, double scale = 1.0);

  int dim() const { return static_cast<int>(matrix_.rows()); }
  const ComplexMatrix& matrix() const { return matrix_; }
  double trace() const { return matrix_.trace().real(); }
  double purity_trace() const { return hs_inner(matrix_, matrix_).real(); }

 private:
  struct Unchecked {};
  Effect(ComplexMatrix matrix, Unchecked) : matrix_(std::move(matrix)) {}
  ComplexMatrix matrix_;
};

/// Preparation device: probability-weighted normalized states.
/// Weights are stored explicitly instead of folding them into
/// subnormalized operators.
class Ensemble {
 public:
  struct Element {
    double weight;
    DensityOperator state;
  };

  Ensemble(int dim, std::vector<Element> elements);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(elements_.size()); }
  const std::vector<Element>& elements() const { return elements_; }
  const Element& operator[](int i) const { return elements_[static_cast<size_t>(i)]; }

 private:
  int dim_;
  std::vector<Element> elements_;
};

/// Measurement device: effects summing to the identity.
class Povm {
 public:
  Povm(int dim, std::vector<Effect> elements);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(elements_.size()); }
  const std::vector<Effect>& elements() const { return elements_; }
  const Effect& operator[](int i) const { return elements_[static_cast<size_t>(i)]; }

 private:
  int dim_;
  std::vector<Effect> elements_;
};

/// Born-rule matrix p_{x,y} with cached marginals.
class JointDistribution {
 public:
  /// Validates: entries >= -probability_floor (clamped to 0), total sum 1,
  /// row/column sums matching the given marginals.
  JointDistribution(RealMatrix joint, RealVector input_marginal, RealVector output_marginal);

  /// Marginals computed from the matrix itself.
  explicit JointDistribution(RealMatrix joint);

  int inputs() const { return static_cast<int>(joint_.rows()); }
  int outputs() const { return static_cast<int>(joint_.cols()); }
  const RealMatrix& matrix() const { return joint_; }
  const RealVector& input_marginal() const { return input_marginal_; }
  const RealVector& output_marginal() const { return output_marginal_; }

 private:
  void validate();
  RealMatrix joint_;
  RealVector input_marginal_;
  RealVector output_marginal_;
};

/// p_{x,y} = p_x Tr[rho_x Pi_y].
JointDistribution born_statistics(const Ensemble& ensemble, const Povm& povm);

/// Sum_x p_x rho_x.
DensityOperator average_state(const Ensemble& ensemble);

/// PSD square root via Hermitian eigendecomposition. Eigenvalues in
/// [-psd_tol, 0) are clamped to zero; values below -1e-8 signal a broken
/// operator and raise.
ComplexMatrix hermitian_sqrt(const ComplexMatrix& psd);
ComplexMatrix hermitian_sqrt(const DensityOperator& rho);

/// The ensemble {rho^{1/2} Pi_y rho^{1/2}} with weights Tr[.]; elements of
/// weight below 1e-12 are dropped and the rest renormalized.
Ensemble distorted_ensemble(const Povm& povm, const DensityOperator& rho);

/// S |i>|j> = |j>|i> on C^d (x) C^d.
ComplexMatrix swap_operator(int dim);

/// Projector onto the symmetric subspace of (C^d)^{(x) s}, s in {1, 2}.
/// Its trace is binomial(s + d - 1, s).
ComplexMatrix symmetric_projector(int dim, int order);

/// binomial(s + d - 1, s) for the supported orders.
double symmetric_subspace_dim(int dim, int order);

/// Thin-QR orthonormal factor with the R diagonal rotated real positive,
/// making the factor unique. Input must have full column rank.
ComplexMatrix qr_orthonormalize(const ComplexMatrix& m);

} // namespace qdesign
