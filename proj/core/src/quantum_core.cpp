#include "qdesign/quantum_core.hpp"

#include <cmath>
#include <sstream>

namespace qdesign {

ToleranceConfig& tolerances() {
  static ToleranceConfig config;
  return config;
}

bool is_hermitian(const ComplexMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return max_abs_entry(m - m.adjoint()) <= tol;
}

double max_abs_entry(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().maxCoeff();
}

Complex hs_inner(const ComplexMatrix& a, const ComplexMatrix& b) {
  return a.conjugate().cwiseProduct(b).sum();
}

double real_trace_product(const ComplexMatrix& a, const ComplexMatrix& b) {
  return hs_inner(a, b).real();
}

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

Eigen::VectorXd hermitian_eigenvalues(const ComplexMatrix& m) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

} // namespace

PureState::PureState(ComplexVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  require(amplitudes_.size() > 0, "pure state must have positive dimension");
  const double norm = amplitudes_.norm();
  require(std::abs(norm - 1.0) <= tolerances().trace_one,
          "pure state is not normalized: |norm - 1| = " + std::to_string(std::abs(norm - 1.0)));
}

PureState PureState::canonicalized() const {
  ComplexVector v = amplitudes_;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    if (mag > 1e-14) {
      v *= std::conj(v[i]) / mag;
      break;
    }
  }
  return PureState(std::move(v));
}

Complex overlap(const PureState& a, const PureState& b) {
  require(a.dim() == b.dim(), "overlap: dimension mismatch");
  return a.amplitudes().dot(b.amplitudes());
}

double overlap_squared(const PureState& a, const PureState& b) {
  return std::norm(overlap(a, b));
}

DensityOperator::DensityOperator(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  const auto& tol = tolerances();
  require(matrix_.rows() == matrix_.cols() && matrix_.rows() > 0,
          "density operator must be square");
  require(is_hermitian(matrix_, tol.hermiticity), "density operator is not Hermitian");
  require(std::abs(matrix_.trace().real() - 1.0) <= tol.trace_one,
          "density operator trace differs from 1");
  const auto evals = hermitian_eigenvalues(matrix_);
  require(evals.minCoeff() >= -tol.psd, "density operator has a negative eigenvalue");
}

DensityOperator DensityOperator::unchecked(ComplexMatrix matrix) {
  return DensityOperator(std::move(matrix), Unchecked{});
}

DensityOperator DensityOperator::maximally_mixed(int dim) {
  return DensityOperator(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityOperator DensityOperator::from_pure(const PureState& psi) {
  return DensityOperator::unchecked(psi.projector());
}

Effect::Effect(ComplexMatrix matrix) : matrix_(std::move(matrix)) {
  const auto& tol = tolerances();
  require(matrix_.rows() == matrix_.cols() && matrix_.rows() > 0, "effect must be square");
  require(is_hermitian(matrix_, tol.hermiticity), "effect is not Hermitian");
  const auto evals = hermitian_eigenvalues(matrix_);
  require(evals.minCoeff() >= -tol.psd, "effect has a negative eigenvalue");
  require(evals.maxCoeff() <= 1.0 + tol.psd, "effect has an eigenvalue above 1");
}

Effect Effect::unchecked(ComplexMatrix matrix) {
  return Effect(std::move(matrix), Unchecked{});
}

Effect Effect::from_pure(const PureState& psi, double scale) {
  return Effect(psi.projector() * scale);
}

Ensemble::Ensemble(int dim, std::vector<Element> elements)
    : dim_(dim), elements_(std::move(elements)) {
  require(dim_ > 0, "ensemble dimension must be positive");
  require(!elements_.empty(), "ensemble must not be empty");
  double total = 0.0;
  for (const auto& e : elements_) {
    require(e.state.dim() == dim_, "ensemble element dimension mismatch");
    require(e.weight > 0.0 && e.weight <= 1.0 + tolerances().normalization,
            "ensemble weight outside (0, 1]");
    total += e.weight;
  }
  require(std::abs(total - 1.0) <= tolerances().normalization,
          "ensemble weights do not sum to 1");
}

Povm::Povm(int dim, std::vector<Effect> elements)
    : dim_(dim), elements_(std::move(elements)) {
  require(dim_ > 0, "POVM dimension must be positive");
  require(!elements_.empty(), "POVM must not be empty");
  ComplexMatrix sum = ComplexMatrix::Zero(dim_, dim_);
  for (const auto& e : elements_) {
    require(e.dim() == dim_, "POVM element dimension mismatch");
    sum += e.matrix();
  }
  require(max_abs_entry(sum - ComplexMatrix::Identity(dim_, dim_)) <= tolerances().normalization,
          "POVM effects do not sum to the identity");
}

JointDistribution::JointDistribution(RealMatrix joint, RealVector input_marginal,
                                     RealVector output_marginal)
    : joint_(std::move(joint)),
      input_marginal_(std::move(input_marginal)),
      output_marginal_(std::move(output_marginal)) {
  validate();
}

JointDistribution::JointDistribution(RealMatrix joint) : joint_(std::move(joint)) {
  input_marginal_ = joint_.rowwise().sum();
  output_marginal_ = joint_.colwise().sum();
  validate();
}

void JointDistribution::validate() {
  const auto& tol = tolerances();
  require(joint_.rows() > 0 && joint_.cols() > 0, "joint distribution must be nonempty");
  require(input_marginal_.size() == joint_.rows() && output_marginal_.size() == joint_.cols(),
          "joint distribution marginal size mismatch");
  for (Eigen::Index x = 0; x < joint_.rows(); ++x) {
    for (Eigen::Index y = 0; y < joint_.cols(); ++y) {
      double& p = joint_(x, y);
      if (p < 0.0) {
        require(p >= -tol.probability_floor,
                "joint probability below clamping window; broken operator?");
        p = 0.0;
      }
    }
  }
  require(std::abs(joint_.sum() - 1.0) <= tol.normalization,
          "joint distribution does not sum to 1");
  require((joint_.rowwise().sum() - input_marginal_).cwiseAbs().maxCoeff() <= tol.normalization,
          "joint row sums disagree with input marginal");
  require((joint_.colwise().sum().transpose() - output_marginal_).cwiseAbs().maxCoeff() <=
              tol.normalization,
          "joint column sums disagree with output marginal");
}

JointDistribution born_statistics(const Ensemble& ensemble, const Povm& povm) {
  require(ensemble.dim() == povm.dim(), "born_statistics: dimension mismatch");
  const int n = ensemble.size();
  const int m = povm.size();
  RealMatrix joint(n, m);
  RealVector px(n);
  for (int x = 0; x < n; ++x) {
    const auto& el = ensemble[x];
    px[x] = el.weight;
    for (int y = 0; y < m; ++y) {
      joint(x, y) = el.weight * real_trace_product(el.state.matrix(), povm[y].matrix());
    }
  }
  RealVector qy = joint.colwise().sum();
  return JointDistribution(std::move(joint), std::move(px), std::move(qy));
}

DensityOperator average_state(const Ensemble& ensemble) {
  ComplexMatrix avg = ComplexMatrix::Zero(ensemble.dim(), ensemble.dim());
  for (const auto& e : ensemble.elements()) {
    avg += e.weight * e.state.matrix();
  }
  return DensityOperator(std::move(avg));
}

ComplexMatrix hermitian_sqrt(const ComplexMatrix& psd) {
  require(psd.rows() == psd.cols() && psd.rows() > 0, "hermitian_sqrt: square matrix expected");
  require(is_hermitian(psd, tolerances().hermiticity), "hermitian_sqrt: not Hermitian");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(psd);
  RealVector evals = solver.eigenvalues();
  // eigenvalues at round-off level go to exact zero: their square roots
  // would otherwise inject sqrt(eps)-sized noise
  const double floor = 1e-14 * std::max(1.0, evals.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 0; i < evals.size(); ++i) {
    if (evals[i] < -1e-8)
      require(false, "hermitian_sqrt: input is not positive semidefinite");
    if (evals[i] < floor) evals[i] = 0.0;
  }
  return solver.eigenvectors() * evals.cwiseSqrt().asDiagonal() *
         solver.eigenvectors().adjoint();
}

ComplexMatrix hermitian_sqrt(const DensityOperator& rho) {
  return hermitian_sqrt(rho.matrix());
}

Ensemble distorted_ensemble(const Povm& povm, const DensityOperator& rho) {
  require(povm.dim() == rho.dim(), "distorted_ensemble: dimension mismatch");
  const ComplexMatrix root = hermitian_sqrt(rho);
  std::vector<Ensemble::Element> elements;
  elements.reserve(static_cast<size_t>(povm.size()));
  double kept = 0.0;
  for (const auto& effect : povm.elements()) {
    ComplexMatrix op = root * effect.matrix() * root;
    op = 0.5 * (op + op.adjoint().eval());  // scrub round-off skew
    const double weight = op.trace().real();
    if (weight < 1e-12) continue;
    kept += weight;
    elements.push_back({weight, DensityOperator::unchecked(op / weight)});
  }
  require(!elements.empty(), "distorted_ensemble: all elements have zero weight");
  for (auto& e : elements) e.weight /= kept;
  return Ensemble(rho.dim(), std::move(elements));
}

ComplexMatrix swap_operator(int dim) {
  require(dim > 0, "swap_operator: dimension must be positive");
  const int d2 = dim * dim;
  ComplexMatrix swap = ComplexMatrix::Zero(d2, d2);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      swap(j * dim + i, i * dim + j) = 1.0;
    }
  }
  return swap;
}

ComplexMatrix symmetric_projector(int dim, int order) {
  require(dim > 0, "symmetric_projector: dimension must be positive");
  if (order == 1) return ComplexMatrix::Identity(dim, dim);
  if (order == 2) {
    const int d2 = dim * dim;
    return 0.5 * (ComplexMatrix::Identity(d2, d2) + swap_operator(dim));
  }
  throw ValidationError("symmetric_projector: only orders 1 and 2 are supported");
}

double symmetric_subspace_dim(int dim, int order) {
  if (order == 1) return dim;
  if (order == 2) return 0.5 * dim * (dim + 1);
  throw ValidationError("symmetric_subspace_dim: only orders 1 and 2 are supported");
}

ComplexMatrix qr_orthonormalize(const ComplexMatrix& m) {
  const Eigen::Index cols = m.cols();
  Eigen::HouseholderQR<ComplexMatrix> qr(m);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(m.rows(), cols);
  ComplexMatrix r = qr.matrixQR().topRows(cols).triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < cols; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

} // namespace qdesign
