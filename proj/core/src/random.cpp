#include "qdesign/random.hpp"

#include <cmath>

namespace qdesign {

std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

ComplexMatrix ginibre(int rows, int cols, Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix g(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) g(i, j) = Complex(gauss(rng), gauss(rng));
  return g;
}

PureState random_pure_state(int dim, Rng& rng) {
  ComplexVector v = ginibre(dim, 1, rng).col(0);
  v /= v.norm();
  return PureState(std::move(v));
}

ComplexMatrix random_unitary(int dim, Rng& rng) {
  // The Q factor of a Ginibre matrix with phase-fixed R is Haar-distributed.
  return qr_orthonormalize(ginibre(dim, dim, rng));
}

DensityOperator random_density(int dim, Rng& rng) {
  ComplexMatrix b = ginibre(dim, dim, rng);
  ComplexMatrix rho = b * b.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint().eval());
  return DensityOperator::unchecked(std::move(rho));
}

ComplexMatrix random_isometry(int outcomes, int dim, Rng& rng) {
  return qr_orthonormalize(ginibre(outcomes, dim, rng));
}

Povm random_rank_one_povm(int dim, int outcomes, Rng& rng) {
  const ComplexMatrix a = random_isometry(outcomes, dim, rng);
  std::vector<Effect> effects;
  effects.reserve(static_cast<size_t>(outcomes));
  for (int y = 0; y < outcomes; ++y) {
    effects.push_back(Effect::unchecked(a.row(y).adjoint() * a.row(y)));
  }
  return Povm(dim, std::move(effects));
}

Povm random_povm(int dim, int outcomes, Rng& rng) {
  std::vector<ComplexMatrix> pieces;
  pieces.reserve(static_cast<size_t>(outcomes));
  ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
  for (int y = 0; y < outcomes; ++y) {
    ComplexMatrix b = ginibre(dim, dim, rng);
    ComplexMatrix g = b * b.adjoint();
    total += g;
    pieces.push_back(std::move(g));
  }
  // T^{-1/2} G_y T^{-1/2} sums to the identity by construction.
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(total);
  const ComplexMatrix inv_root = solver.eigenvectors() *
                                 solver.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                 solver.eigenvectors().adjoint();
  std::vector<Effect> effects;
  effects.reserve(pieces.size());
  for (auto& g : pieces) {
    ComplexMatrix e = inv_root * g * inv_root;
    e = 0.5 * (e + e.adjoint().eval());
    effects.push_back(Effect::unchecked(std::move(e)));
  }
  return Povm(dim, std::move(effects));
}

Ensemble random_ensemble(int dim, int n_states, Rng& rng) {
  std::exponential_distribution<double> expo(1.0);
  RealVector w(n_states);
  for (int x = 0; x < n_states; ++x) w[x] = expo(rng);
  w /= w.sum();
  std::vector<Ensemble::Element> elements;
  elements.reserve(static_cast<size_t>(n_states));
  for (int x = 0; x < n_states; ++x) elements.push_back({w[x], random_density(dim, rng)});
  return Ensemble(dim, std::move(elements));
}

} // namespace qdesign
