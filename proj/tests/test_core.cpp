#include <doctest.h>

#include "qdesign/designs.hpp"
#include "qdesign/info.hpp"
#include "qdesign/quantum_core.hpp"
#include "qdesign/random.hpp"
#include "test_helpers.hpp"

using namespace qdesign;
using qdesign::testing::bloch_state;
using qdesign::testing::identity;
using qdesign::testing::matrix_near;

namespace {

Ensemble basis_ensemble_d2() {
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
  p1(1, 1) = 1.0;
  return Ensemble(2, {{0.5, DensityOperator(p0)}, {0.5, DensityOperator(p1)}});
}

Povm basis_povm_d2() {
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
  p1(1, 1) = 1.0;
  return Povm(2, {Effect(p0), Effect(p1)});
}

} // namespace

TEST_CASE("born statistics of an orthogonal projector pair") {
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  Ensemble e(2, {{1.0, DensityOperator(p0)}});
  const JointDistribution j = born_statistics(e, basis_povm_d2());
  CHECK(j.matrix()(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(j.matrix()(0, 1) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("born statistics of the tetrahedron with its rescaled measurement") {
  // Oracle: the same numbers from an independent Bloch-vector tetrahedron.
  const double s = 1.0 / std::sqrt(3.0);
  const std::vector<ComplexMatrix> tetra = {
      bloch_state(s, s, s), bloch_state(s, -s, -s), bloch_state(-s, -s, s),
      bloch_state(-s, s, -s)};
  for (int x = 0; x < 4; ++x) {
    for (int y = 0; y < 4; ++y) {
      const double oracle = 0.25 * real_trace_product(tetra[x], 0.5 * tetra[y]);
      CHECK(oracle == doctest::Approx(x == y ? 1.0 / 8 : 1.0 / 24).epsilon(1e-12));
    }
  }

  const Ensemble e = as_ensemble(builtin_sic(2));
  const JointDistribution j = born_statistics(e, pretty_good_povm(e));
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      CHECK(j.matrix()(x, y) ==
            doctest::Approx(x == y ? 1.0 / 8 : 1.0 / 24).epsilon(1e-12));
}

TEST_CASE("born statistics against the trivial POVM returns the weights") {
  const Ensemble e = as_ensemble(builtin_sic(3));
  const Povm trivial(3, {Effect(identity(3))});
  const JointDistribution j = born_statistics(e, trivial);
  REQUIRE(j.outputs() == 1);
  for (int x = 0; x < e.size(); ++x)
    CHECK(j.matrix()(x, 0) == doctest::Approx(e[x].weight).epsilon(1e-12));
}

TEST_CASE("born statistics rejects mismatched dimensions") {
  CHECK_THROWS_AS(born_statistics(as_ensemble(builtin_sic(3)), basis_povm_d2()),
                  ValidationError);
}

TEST_CASE("average state of builtin 2-designs is maximally mixed") {
  for (const auto& set : {builtin_sic(2), builtin_sic(3), builtin_mub(2), builtin_mub(3),
                          builtin_mub(4)}) {
    const DensityOperator avg = average_state(as_ensemble(set));
    CHECK(matrix_near(avg.matrix(), identity(set.dim) / double(set.dim), 1e-10));
  }
}

TEST_CASE("average state of a single-element ensemble is that state") {
  Rng rng(7);
  const DensityOperator rho = random_density(3, rng);
  Ensemble e(3, {{1.0, rho}});
  CHECK(matrix_near(average_state(e).matrix(), rho.matrix(), 1e-14));
}

TEST_CASE("hermitian square root on diagonal and projector inputs") {
  ComplexMatrix d(2, 2);
  d << 0.64, 0.0, 0.0, 0.36;
  ComplexMatrix expected(2, 2);
  expected << 0.8, 0.0, 0.0, 0.6;
  CHECK(matrix_near(hermitian_sqrt(d), expected, 1e-12));

  CHECK(matrix_near(hermitian_sqrt(identity(4) / 4.0), identity(4) / 2.0, 1e-12));

  Rng rng(11);
  const ComplexMatrix proj = random_pure_state(3, rng).projector();
  CHECK(matrix_near(hermitian_sqrt(proj), proj, 1e-10));
}

TEST_CASE("hermitian square root squares back to the input") {
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 4);
    const ComplexMatrix rho = random_density(d, rng).matrix();
    const ComplexMatrix root = hermitian_sqrt(rho);
    CHECK(matrix_near(root * root, rho, 1e-9));
  }
}

TEST_CASE("hermitian square root rejects clearly indefinite input") {
  ComplexMatrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1e-6;
  CHECK_THROWS_AS(hermitian_sqrt(m), ValidationError);
}

TEST_CASE("distorted ensemble with the maximally mixed state is the canonical set") {
  const Povm povm = as_povm(builtin_sic(2));
  const Ensemble e = distorted_ensemble(povm, DensityOperator::maximally_mixed(2));
  REQUIRE(e.size() == 4);
  for (int y = 0; y < 4; ++y) {
    CHECK(e[y].weight == doctest::Approx(povm[y].trace() / 2.0).epsilon(1e-12));
    CHECK(matrix_near(e[y].state.matrix(), povm[y].matrix() / povm[y].trace(), 1e-10));
  }
}

TEST_CASE("distorted ensemble with a pure state collapses the measurement") {
  const double r = 1.0 / std::sqrt(2.0);
  ComplexVector plus(2), minus(2);
  plus << r, r;
  minus << r, -r;
  const Povm povm(2, {Effect(PureState(plus).projector()), Effect(PureState(minus).projector())});
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  const Ensemble e = distorted_ensemble(povm, DensityOperator(p0));
  REQUIRE(e.size() == 2);
  for (int y = 0; y < 2; ++y) {
    CHECK(e[y].weight == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(matrix_near(e[y].state.matrix(), p0, 1e-10));
  }
}

TEST_CASE("distorted ensemble of a diagonal state by the computational basis") {
  const Ensemble e = distorted_ensemble(basis_povm_d2(), DensityOperator::maximally_mixed(2));
  REQUIRE(e.size() == 2);
  CHECK(e[0].weight == doctest::Approx(0.5));
  CHECK(e[0].state.matrix()(0, 0).real() == doctest::Approx(1.0));
  CHECK(e[1].state.matrix()(1, 1).real() == doctest::Approx(1.0));
}

TEST_CASE("distorted ensemble weights always sum to one") {
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 3);
    const Povm povm = random_povm(d, d + 2, rng);
    const DensityOperator rho = random_density(d, rng);
    const Ensemble e = distorted_ensemble(povm, rho);
    double total = 0.0;
    for (const auto& el : e.elements()) total += el.weight;
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("swap operator and symmetric projector traces match the subspace size") {
  CHECK(symmetric_projector(2, 2).trace().real() == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(symmetric_projector(3, 2).trace().real() == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(matrix_near(symmetric_projector(2, 1), identity(2), 1e-15));
  CHECK(symmetric_subspace_dim(4, 2) == doctest::Approx(10.0));
  CHECK_THROWS_AS(symmetric_projector(2, 3), ValidationError);
}

TEST_CASE("symmetric projector is idempotent and commutes with U (x) U") {
  Rng rng(19);
  for (int d : {2, 3}) {
    const ComplexMatrix p = symmetric_projector(d, 2);
    CHECK(matrix_near(p * p, p, 1e-10));
    const ComplexMatrix u = random_unitary(d, rng);
    ComplexMatrix uu = ComplexMatrix::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) uu.block(i * d, j * d, d, d) = u(i, j) * u;
    CHECK(matrix_near(p * uu, uu * p, 1e-9));
  }
}

TEST_CASE("born matrix entries are probabilities for random devices") {
  Rng rng(23);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 2 + static_cast<int>(rng() % 3);
    const Ensemble e = random_ensemble(d, 2 + static_cast<int>(rng() % 4), rng);
    const Povm p = random_povm(d, 2 + static_cast<int>(rng() % 4), rng);
    const JointDistribution j = born_statistics(e, p);
    CHECK(j.matrix().minCoeff() >= 0.0);
    CHECK(j.matrix().maxCoeff() <= 1.0 + 1e-12);
    CHECK(j.matrix().sum() == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("joint distribution clamps round-off noise but rejects real negatives") {
  RealMatrix ok(1, 2);
  ok << 1.0, -5e-13;
  const JointDistribution j{RealMatrix(ok)};
  CHECK(j.matrix()(0, 1) == 0.0);

  RealMatrix bad(1, 2);
  bad << 1.0, -1e-6;
  CHECK_THROWS_AS(JointDistribution{RealMatrix(bad)}, ValidationError);
}

TEST_CASE("joint distribution validates totals and marginals") {
  RealMatrix half(1, 2);
  half << 0.25, 0.25;
  CHECK_THROWS_AS(JointDistribution{RealMatrix(half)}, ValidationError);

  RealMatrix fine(2, 2);
  fine << 0.25, 0.25, 0.25, 0.25;
  RealVector px(2), qy(2);
  px << 0.5, 0.5;
  qy << 0.6, 0.4;  // disagrees with the column sums
  CHECK_THROWS_AS(JointDistribution(RealMatrix(fine), px, qy), ValidationError);
}

TEST_CASE("type invariants reject malformed objects") {
  ComplexVector off(2);
  off << 1.0, 0.1;
  CHECK_THROWS_AS(PureState{off}, ValidationError);

  ComplexMatrix not_herm(2, 2);
  not_herm << 1.0, Complex(0.0, 0.5), Complex(0.0, 0.5), 0.0;
  CHECK_THROWS_AS(DensityOperator{not_herm}, ValidationError);

  CHECK_THROWS_AS(DensityOperator{identity(2)}, ValidationError);  // trace 2
  CHECK_THROWS_AS(Effect{2.0 * identity(2)}, ValidationError);     // eigenvalue 2

  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  CHECK_THROWS_AS(Ensemble(2, {{0.4, DensityOperator(p0)}}), ValidationError);
  CHECK_THROWS_AS(Povm(2, {Effect(p0)}), ValidationError);
}

TEST_CASE("ensemble of mixed weights built from the basis is valid") {
  const Ensemble e = basis_ensemble_d2();
  CHECK(e.size() == 2);
  CHECK(matrix_near(average_state(e).matrix(), identity(2) / 2.0, 1e-12));
}

TEST_CASE("canonical phase puts the first nonzero amplitude on the real axis") {
  ComplexVector v(3);
  v << Complex(0.0, 0.0), Complex(0.0, 0.8), Complex(0.6, 0.0);
  const PureState canon = PureState(v).canonicalized();
  CHECK(canon.amplitudes()[1].real() == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(std::abs(canon.amplitudes()[1].imag()) < 1e-14);
}
