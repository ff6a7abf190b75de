#include <cmath>

#include <doctest.h>

#include "qdesign/designs.hpp"
#include "qdesign/random.hpp"
#include "test_helpers.hpp"

using namespace qdesign;
using qdesign::testing::identity;
using qdesign::testing::matrix_near;

namespace {

// Brute-force frame potential straight from the amplitudes; the oracle for
// every frame-potential assertion below.
double frame_potential_oracle(const WeightedStateSet& set, int order) {
  double total = 0.0;
  for (const auto& p : set.points) {
    for (const auto& q : set.points) {
      Complex ov = 0.0;
      for (int i = 0; i < set.dim; ++i)
        ov += std::conj(p.state.amplitudes()[i]) * q.state.amplitudes()[i];
      const double o2 = std::norm(ov);
      total += p.weight * q.weight * (order == 1 ? o2 : o2 * o2);
    }
  }
  return total;
}

double binomial(int n, int k) {
  double v = 1.0;
  for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
  return v;
}

WeightedStateSet computational_basis_d2() {
  ComplexVector e0(2), e1(2);
  e0 << 1, 0;
  e1 << 0, 1;
  WeightedStateSet set;
  set.dim = 2;
  set.points = {{0.5, PureState(e0)}, {0.5, PureState(e1)}};
  return set;
}

} // namespace

TEST_CASE("frame potentials of builtin sets match the 2-design target") {
  for (const auto& set : {builtin_sic(2), builtin_sic(3), builtin_mub(2), builtin_mub(3),
                          builtin_mub(4)}) {
    const double target = 1.0 / binomial(set.dim + 1, 2);
    CHECK(frame_potential_oracle(set, 2) == doctest::Approx(target).epsilon(1e-10));
    const DesignReport r2 = check_design(set, 2);
    CHECK(r2.frame_potential == doctest::Approx(target).epsilon(1e-10));
    CHECK(r2.frame_potential_target == doctest::Approx(target).epsilon(1e-12));
    CHECK(r2.verdict);
    CHECK(r2.operator_deviation < 1e-10);
    const DesignReport r1 = check_design(set, 1);
    CHECK(r1.verdict);
    CHECK(r1.frame_potential == doctest::Approx(1.0 / set.dim).epsilon(1e-10));
  }
}

TEST_CASE("check_design rejects the computational basis as a 2-design") {
  const WeightedStateSet basis = computational_basis_d2();
  CHECK(frame_potential_oracle(basis, 2) == doctest::Approx(0.5).epsilon(1e-12));
  const DesignReport r = check_design(basis, 2);
  CHECK(r.frame_potential == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_FALSE(r.verdict);
  CHECK(check_design(basis, 1).verdict);  // it is still a 1-design
  CHECK_THROWS_AS(check_design(basis, 3), ValidationError);
}

TEST_CASE("builtin SIC overlaps are equiangular") {
  for (int d : {2, 3}) {
    const WeightedStateSet sic = builtin_sic(d);
    REQUIRE(sic.size() == d * d);
    for (int x = 0; x < sic.size(); ++x) {
      for (int y = 0; y < sic.size(); ++y) {
        Complex ov = 0.0;
        for (int i = 0; i < d; ++i)
          ov += std::conj(sic.points[x].state.amplitudes()[i]) *
                sic.points[y].state.amplitudes()[i];
        const double target = x == y ? 1.0 : 1.0 / (d + 1);
        CHECK(std::norm(ov) == doctest::Approx(target).epsilon(1e-12));
      }
    }
    CHECK(validate_sic(sic).max_deviation < 1e-12);
  }
  CHECK_THROWS_AS(builtin_sic(4), ValidationError);
}

TEST_CASE("builtin MUB sets are exactly unbiased") {
  for (int d : {2, 3, 4}) {
    const WeightedStateSet mub = builtin_mub(d);
    REQUIRE(mub.size() == d * (d + 1));
    REQUIRE(mub.labels.has_value());
    const SetValidationReport report = validate_mub(mub);
    CHECK(report.pass);
    CHECK(report.max_deviation < 1e-12);
  }
  CHECK_THROWS_AS(builtin_mub(6), ValidationError);
  CHECK_THROWS_AS(builtin_mub(5), ValidationError);
}

TEST_CASE("d = 2 MUB cross-basis overlaps are exactly one half") {
  const WeightedStateSet mub = builtin_mub(2);
  const auto& labels = *mub.labels;
  for (int x = 0; x < mub.size(); ++x)
    for (int y = 0; y < mub.size(); ++y)
      if (labels[x].first != labels[y].first)
        CHECK(overlap_squared(mub.points[x].state, mub.points[y].state) ==
              doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("weyl-heisenberg orbit of a basis state is not a SIC") {
  ComplexVector e0(2);
  e0 << 1, 0;
  const WeightedStateSet orbit = weyl_heisenberg_orbit(PureState(e0));
  REQUIRE(orbit.size() == 4);
  CHECK_FALSE(validate_sic(orbit).pass);
  CHECK(check_design(orbit, 1).verdict);
}

TEST_CASE("weyl-heisenberg orbit of the tetrahedron fiducial is a SIC") {
  const WeightedStateSet orbit = weyl_heisenberg_orbit(sic_fiducial_d2());
  CHECK(validate_sic(orbit).pass);
  CHECK(validate_sic(orbit).max_deviation < 1e-12);
}

TEST_CASE("weyl-heisenberg orbits resolve the identity for any fiducial") {
  Rng rng(31);
  for (int d = 2; d <= 5; ++d) {
    for (int trial = 0; trial < 5; ++trial) {
      const WeightedStateSet orbit = weyl_heisenberg_orbit(random_pure_state(d, rng));
      CHECK(check_design(orbit, 1).verdict);
    }
  }
}

TEST_CASE("validators reject wrong cardinalities and broken sets") {
  WeightedStateSet two = computational_basis_d2();
  CHECK_THROWS_AS(validate_sic(two), ValidationError);
  CHECK_THROWS_AS(validate_mub(two), ValidationError);

  // pad the basis with random states to d^2 elements: right count, not a SIC
  Rng rng(37);
  WeightedStateSet padded = two;
  padded.points[0].weight = 0.25;
  padded.points[1].weight = 0.25;
  padded.points.push_back({0.25, random_pure_state(2, rng)});
  padded.points.push_back({0.25, random_pure_state(2, rng)});
  CHECK_FALSE(validate_sic(padded).pass);

  WeightedStateSet unlabeled = builtin_mub(2);
  unlabeled.labels.reset();
  CHECK_THROWS_AS(validate_mub(unlabeled), ValidationError);
}

TEST_CASE("depolarization reports the induced purity parameters") {
  const WeightedStateSet sic = builtin_sic(2);
  CHECK(*depolarize(sic, 1.0).purity_parameter == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(*depolarize(sic, 0.0).purity_parameter == doctest::Approx(0.125).epsilon(1e-12));
  // t = 1/2: Tr[rho^2] = 1/4 + (3/4)/2 = 5/8, a = 5/32
  CHECK(*depolarize(sic, 0.5).purity_parameter ==
        doctest::Approx(5.0 / 32.0).epsilon(1e-12));

  const WeightedStateSet mub = builtin_mub(3);
  CHECK(*depolarize(mub, 1.0).purity_parameter == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(*depolarize(mub, 0.0).purity_parameter ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  CHECK_THROWS_AS(depolarize(sic, 1.2), ValidationError);
  CHECK_THROWS_AS(depolarize(sic, -0.1), ValidationError);
}

TEST_CASE("depolarization is affine: the average state stays maximally mixed") {
  for (double t : {0.0, 0.3, 0.7, 1.0}) {
    const MixedStateSet set = depolarize(builtin_sic(3), t);
    ComplexMatrix avg = ComplexMatrix::Zero(3, 3);
    for (const auto& p : set.points) avg += p.weight * p.state.matrix();
    CHECK(matrix_near(avg, identity(3) / 3.0, 1e-12));
  }
}

TEST_CASE("depolarized builtins satisfy the arbitrary-rank overlap targets") {
  for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    for (int d : {2, 3}) {
      const MixedStateSet sic = depolarize(builtin_sic(d), t);
      CHECK(validate_generalized_sic(sic, 1e-9).pass);
    }
    for (int d : {2, 3, 4}) {
      const MixedStateSet mub = depolarize(builtin_mub(d), t);
      CHECK(validate_generalized_mub(mub, 1e-9).pass);
    }
  }
}

TEST_CASE("generalized validation notices a corrupted element") {
  MixedStateSet set = depolarize(builtin_sic(2), 1.0);
  set.points[0].state = DensityOperator::maximally_mixed(2);
  CHECK_FALSE(validate_generalized_sic(set, 1e-9).pass);

  MixedStateSet small = depolarize(builtin_sic(2), 0.5);
  small.points.pop_back();
  CHECK_THROWS_AS(validate_generalized_sic(small, 1e-9), ValidationError);
}

TEST_CASE("as_povm rescales builtin sets into uniform rank-one POVMs") {
  const Povm sic2 = as_povm(builtin_sic(2));
  REQUIRE(sic2.size() == 4);
  for (const auto& e : sic2.elements())
    CHECK(e.trace() == doctest::Approx(0.5).epsilon(1e-12));

  const Povm mub3 = as_povm(builtin_mub(3));
  REQUIRE(mub3.size() == 12);
  for (const auto& e : mub3.elements())
    CHECK(e.trace() == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("a single basis becomes a projective measurement") {
  const Povm proj = as_povm(computational_basis_d2());
  REQUIRE(proj.size() == 2);
  CHECK(matrix_near(proj[0].matrix() + proj[1].matrix(), identity(2), 1e-12));
  CHECK(matrix_near(proj[0].matrix() * proj[0].matrix(), proj[0].matrix(), 1e-12));
}

TEST_CASE("as_povm rejects sets that are not 1-designs") {
  Rng rng(41);
  WeightedStateSet set;
  set.dim = 3;
  set.points = {{0.5, random_pure_state(3, rng)}, {0.5, random_pure_state(3, rng)}};
  CHECK_THROWS_AS(as_povm(set), ValidationError);
}

TEST_CASE("as_ensemble keeps the weights exactly") {
  const WeightedStateSet set = builtin_mub(4);
  const Ensemble e = as_ensemble(set);
  REQUIRE(e.size() == set.size());
  for (int x = 0; x < e.size(); ++x) CHECK(e[x].weight == set.points[x].weight);
}

TEST_CASE("round trips between weighted sets, ensembles and POVMs") {
  const WeightedStateSet set = builtin_sic(3);
  const WeightedStateSet back = povm_as_weighted_set(as_povm(set));
  REQUIRE(back.size() == set.size());
  for (int x = 0; x < set.size(); ++x) {
    CHECK(back.points[x].weight == doctest::Approx(set.points[x].weight).epsilon(1e-12));
    CHECK(overlap_squared(back.points[x].state, set.points[x].state) ==
          doctest::Approx(1.0).epsilon(1e-10));
  }
  const WeightedStateSet from_ensemble = ensemble_as_weighted_set(as_ensemble(set));
  for (int x = 0; x < set.size(); ++x)
    CHECK(from_ensemble.points[x].weight == set.points[x].weight);
}

TEST_CASE("the d = 4 witness basis is orthonormal and resolves the identity") {
  const WeightedStateSet basis = d4_orthonormal_witness();
  REQUIRE(basis.size() == 4);
  for (int x = 0; x < 4; ++x)
    for (int y = 0; y < 4; ++y)
      CHECK(overlap_squared(basis.points[x].state, basis.points[y].state) ==
            doctest::Approx(x == y ? 1.0 : 0.0).epsilon(1e-12));
  const Povm povm = as_povm(basis);
  CHECK(povm.size() == 4);
}

TEST_CASE("builtin states carry the canonical phase") {
  for (const auto& set : {builtin_sic(2), builtin_sic(3), builtin_mub(4),
                          weyl_heisenberg_orbit(sic_fiducial_d2())}) {
    for (const auto& p : set.points) {
      for (int i = 0; i < set.dim; ++i) {
        const Complex amp = p.state.amplitudes()[i];
        if (std::abs(amp) > 1e-14) {
          CHECK(amp.real() > 0.0);
          CHECK(std::abs(amp.imag()) < 1e-14);
          break;
        }
      }
    }
  }
}
