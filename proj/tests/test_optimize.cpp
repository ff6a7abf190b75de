#include <cmath>

#include <doctest.h>

#include "qdesign/designs.hpp"
#include "qdesign/info.hpp"
#include "qdesign/optimize.hpp"
#include "qdesign/random.hpp"
#include "test_helpers.hpp"

using namespace qdesign;
using qdesign::testing::identity;
using qdesign::testing::matrix_near;

namespace {

OptimizerConfig quick_config(int restarts = 6, std::uint64_t seed = 99) {
  OptimizerConfig cfg;
  cfg.restarts = restarts;
  cfg.seed = seed;
  return cfg;
}

Ensemble orthogonal_pair_d2() {
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
  p1(1, 1) = 1.0;
  return Ensemble(2, {{0.5, DensityOperator(p0)}, {0.5, DensityOperator(p1)}});
}

void check_monotone(const std::vector<double>& trace) {
  for (size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] >= trace[i - 1] - 1e-12);
}

} // namespace

TEST_CASE("analytic isometry gradients match finite differences") {
  Rng rng(101);
  const Ensemble e = as_ensemble(builtin_sic(2));
  const AccessibleInfoObjective objective(e, 4);
  for (int trial = 0; trial < 10; ++trial) {
    const RealVector point = objective.pack(random_isometry(4, 2, rng));
    CHECK(gradient_check(objective, point) < 1e-5);
  }
  const AccessibleInfoObjective qutrit(as_ensemble(builtin_mub(3)), 5);
  for (int trial = 0; trial < 3; ++trial) {
    const RealVector point = qutrit.pack(random_isometry(5, 3, rng));
    CHECK(gradient_check(qutrit, point) < 1e-5);
  }
}

TEST_CASE("analytic state gradients match finite differences") {
  Rng rng(103);
  const Povm povm = as_povm(builtin_sic(2));
  RealVector weights(4);
  weights << 0.3, 0.3, 0.2, 0.2;
  const PureStateEnsembleObjective objective(povm, weights);
  for (int trial = 0; trial < 10; ++trial) {
    ComplexMatrix states(4, 2);
    for (int x = 0; x < 4; ++x)
      states.row(x) = random_pure_state(2, rng).amplitudes().transpose();
    CHECK(gradient_check(objective, objective.pack(states)) < 1e-5);
  }
}

TEST_CASE("analytic weight gradients match finite differences") {
  Rng rng(107);
  for (int trial = 0; trial < 10; ++trial) {
    const Povm povm = random_povm(3, 5, rng);
    RealMatrix channel(4, 5);
    for (int x = 0; x < 4; ++x) {
      const DensityOperator rho = DensityOperator::from_pure(random_pure_state(3, rng));
      for (int y = 0; y < 5; ++y)
        channel(x, y) = real_trace_product(rho.matrix(), povm[y].matrix());
    }
    const WeightObjective objective(channel);
    RealVector p(4);
    p << 0.3, 0.25, 0.25, 0.2;
    CHECK(gradient_check(objective, p) < 1e-5);
  }
}

TEST_CASE("weight gradient is flat along symmetry directions at uniform weights") {
  // the tetrahedron measured by itself: all inputs play the same role
  const Povm povm = as_povm(builtin_sic(2));
  const WeightedStateSet set = builtin_sic(2);
  RealMatrix channel(4, 4);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      channel(x, y) =
          real_trace_product(set.points[x].state.projector(), povm[y].matrix());
  const WeightObjective objective(channel);
  const RealVector uniform = RealVector::Constant(4, 0.25);
  const RealVector grad = objective.gradient(uniform);
  for (int x = 1; x < 4; ++x) CHECK(std::abs(grad[x] - grad[0]) < 1e-12);
}

TEST_CASE("perfectly distinguishable states yield one full bit") {
  OptimizerConfig cfg = quick_config(4);
  cfg.min_outcomes = 2;
  cfg.max_outcomes = 4;
  const OptimizationResult result = maximize_accessible_info(orthogonal_pair_d2(), cfg);
  CHECK(result.value_bits == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(result.bound_bits == doctest::Approx(1.0).epsilon(1e-12));  // not a 2-design
  CHECK(result.converged);
  check_monotone(result.trace);
}

TEST_CASE("accessible information of the tetrahedron ensemble") {
  const OptimizationResult result =
      maximize_accessible_info(as_ensemble(builtin_sic(2)), quick_config(8));
  CHECK(std::abs(result.value_bits - 0.4150374992788438) < 1e-3);
  CHECK(result.bound_bits == doctest::Approx(0.4150374992788438).epsilon(1e-12));
  CHECK(result.bound_gap <= 1e-6);
  CHECK(result.value_bits <= 1.0 + 1e-9);
  CHECK(result.restarts_agreeing >= 1);
  check_monotone(result.trace);
}

TEST_CASE("the tetrahedron maximizer is the antipodal tetrahedron POVM") {
  const WeightedStateSet sic = builtin_sic(2);
  const OptimizationResult result =
      maximize_accessible_info(as_ensemble(sic), quick_config(12));
  REQUIRE(result.best_povm.has_value());
  REQUIRE(result.best_povm->size() == 4);
  const WeightedStateSet directions = povm_as_weighted_set(*result.best_povm, 1e-6);
  CHECK(validate_sic(directions, 1e-3).pass);
  // each measurement direction is antipodal to exactly one ensemble state
  for (const auto& dir : directions.points) {
    int near_zero = 0;
    for (const auto& st : sic.points)
      if (overlap_squared(dir.state, st.state) < 1e-3) ++near_zero;
    CHECK(near_zero == 1);
  }
}

TEST_CASE("the qutrit MUB maximizer validates as a SIC POVM") {
  OptimizerConfig cfg = quick_config(24);
  cfg.min_outcomes = 9;
  cfg.max_outcomes = 9;
  const OptimizationResult result =
      maximize_accessible_info(as_ensemble(builtin_mub(3)), cfg);
  CHECK(std::abs(result.value_bits - 0.5849625007211562) < 1e-3);
  REQUIRE(result.best_povm.has_value());
  std::vector<Effect> informative;
  for (const auto& e : result.best_povm->elements())
    if (e.trace() > 1e-6) informative.push_back(e);
  REQUIRE(static_cast<int>(informative.size()) == 9);
  const WeightedStateSet directions =
      povm_as_weighted_set(Povm(3, std::move(informative)), 1e-6);
  CHECK(validate_sic(directions, 1e-3).pass);
}

TEST_CASE("a converged run sits at a first-order critical point") {
  OptimizerConfig cfg = quick_config(4);
  cfg.value_tol = 0.0;  // force the gradient-norm stopping rule
  cfg.min_outcomes = 4;
  cfg.max_outcomes = 4;
  const Ensemble e = as_ensemble(builtin_sic(2));
  const OptimizationResult result = maximize_accessible_info(e, cfg);
  REQUIRE(result.converged);
  REQUIRE(result.best_povm.has_value());

  // rebuild the isometry from the rank-one effects and project the gradient
  const AccessibleInfoObjective objective(e, result.best_povm->size());
  ComplexMatrix a(result.best_povm->size(), 2);
  for (int y = 0; y < result.best_povm->size(); ++y) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(result.best_povm->elements()[y].matrix());
    a.row(y) = std::sqrt(solver.eigenvalues()[1]) * solver.eigenvectors().col(1).transpose();
  }
  const ComplexMatrix g = objective.gradient_at(a);
  const ComplexMatrix w = a.adjoint() * g;
  const ComplexMatrix tangent = g - a * (0.5 * (w + w.adjoint()).eval());
  CHECK(tangent.norm() < 1e-6);
}

TEST_CASE("informational power of a projective qubit measurement is one bit") {
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
  p1(1, 1) = 1.0;
  const Povm projective(2, {Effect(p0), Effect(p1)});
  const OptimizationResult result =
      maximize_informational_power(projective, quick_config(4));
  CHECK(result.value_bits == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(result.certificate_gap < 1e-6);
  check_monotone(result.trace);
}

TEST_CASE("informational power of the tetrahedron POVM") {
  const OptimizationResult result =
      maximize_informational_power(as_povm(builtin_sic(2)), quick_config(6));
  CHECK(std::abs(result.value_bits - 0.4150374992788438) < 1e-3);
  CHECK(result.bound_bits == doctest::Approx(0.4150374992788438).epsilon(1e-12));
  CHECK(result.bound_gap <= 1e-6);
  CHECK(result.certificate_gap < 1e-6);
  REQUIRE(result.best_ensemble.has_value());
  check_monotone(result.trace);
}

TEST_CASE("duality route agrees with the direct informational-power search") {
  OptimizerConfig cfg = quick_config(8);
  cfg.outer_starts = 2;
  const Povm sic = as_povm(builtin_sic(2));
  const OptimizationResult direct = maximize_informational_power(sic, cfg);
  const OptimizationResult dual = infopower_via_duality(sic, cfg);
  CHECK(std::abs(direct.value_bits - dual.value_bits) < 2e-3);
  REQUIRE(dual.best_state.has_value());
  CHECK(matrix_near(dual.best_state->matrix(), identity(2) / 2.0, 2e-2));
  check_monotone(dual.trace);
}

TEST_CASE("duality route on a projective measurement finds the mixed input") {
  ComplexMatrix p0 = ComplexMatrix::Zero(2, 2);
  p0(0, 0) = 1.0;
  ComplexMatrix p1 = ComplexMatrix::Zero(2, 2);
  p1(1, 1) = 1.0;
  const Povm projective(2, {Effect(p0), Effect(p1)});
  OptimizerConfig cfg = quick_config(4);
  cfg.outer_starts = 2;
  const OptimizationResult result = infopower_via_duality(projective, cfg);
  CHECK(result.value_bits == doctest::Approx(1.0).epsilon(1e-6));
  REQUIRE(result.best_state.has_value());
  CHECK(matrix_near(result.best_state->matrix(), identity(2) / 2.0, 1e-2));
}

TEST_CASE("optimizer values are invariant under unitary conjugation") {
  Rng rng(109);
  const ComplexMatrix u = random_unitary(2, rng);
  const Ensemble e = as_ensemble(builtin_sic(2));
  std::vector<Ensemble::Element> rotated;
  for (const auto& el : e.elements())
    rotated.push_back(
        {el.weight, DensityOperator(u * el.state.matrix() * u.adjoint())});
  const Ensemble e_rot(2, std::move(rotated));
  const OptimizationResult base = maximize_accessible_info(e, quick_config(8, 7));
  const OptimizationResult conj = maximize_accessible_info(e_rot, quick_config(8, 7));
  CHECK(std::abs(base.value_bits - conj.value_bits) < 1e-6);
}

TEST_CASE("evaluating the pretty-good POVM reproduces the closed forms") {
  for (int d : {2, 3}) {
    const Ensemble e = as_ensemble(builtin_sic(d));
    const double value = mutual_information(born_statistics(e, pretty_good_povm(e)));
    CHECK(std::abs(value - pg_sic_value(d)) < 1e-9);
  }
  for (int d : {2, 3, 4}) {
    const Ensemble e = as_ensemble(builtin_mub(d));
    const double value = mutual_information(born_statistics(e, pretty_good_povm(e)));
    CHECK(std::abs(value - pg_mub_value(d)) < 1e-9);
  }
}

TEST_CASE("an exhausted iteration budget is flagged but still returns a result") {
  OptimizerConfig cfg = quick_config(1);
  cfg.max_iters = 1;
  cfg.min_outcomes = 4;
  cfg.max_outcomes = 4;
  const OptimizationResult result =
      maximize_accessible_info(as_ensemble(builtin_sic(2)), cfg);
  CHECK_FALSE(result.converged);
  CHECK(result.value_bits >= 0.0);
  CHECK(result.best_povm.has_value());
}

TEST_CASE("isometry points validate the manifold constraint") {
  Rng rng(113);
  const IsometryPoint point = IsometryPoint::random(5, 3, rng);
  CHECK(point.outcomes() == 5);
  CHECK(point.dim() == 3);
  const Povm povm = point.to_povm();
  CHECK(povm.size() == 5);
  CHECK_THROWS_AS(IsometryPoint(ComplexMatrix::Ones(4, 2)), ValidationError);
  CHECK_THROWS_AS(IsometryPoint(ComplexMatrix::Identity(2, 3)), ValidationError);
}

TEST_CASE("outcome ranges respect the Davies cap unless overridden") {
  OptimizerConfig cfg = quick_config(1);
  cfg.min_outcomes = 2;
  cfg.max_outcomes = 6;  // beyond d^2 = 4
  CHECK_THROWS_AS(maximize_accessible_info(orthogonal_pair_d2(), cfg), ValidationError);
  cfg.allow_outcomes_beyond_davies = true;
  cfg.max_outcomes = 5;
  cfg.max_iters = 50;
  CHECK_NOTHROW(maximize_accessible_info(orthogonal_pair_d2(), cfg));
}
