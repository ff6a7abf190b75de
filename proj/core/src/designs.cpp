#include "qdesign/designs.hpp"

#include <cmath>
#include <numbers>

namespace qdesign {

namespace {

constexpr Complex kImag{0.0, 1.0};

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

WeightedStateSet set_from_columns(const ComplexMatrix& columns, double column_norm,
                                  std::optional<std::vector<std::pair<int, int>>> labels) {
  const int dim = static_cast<int>(columns.rows());
  const int n = static_cast<int>(columns.cols());
  WeightedStateSet set;
  set.dim = dim;
  set.labels = std::move(labels);
  set.points.reserve(static_cast<size_t>(n));
  const double weight = 1.0 / n;
  for (int x = 0; x < n; ++x) {
    ComplexVector v = columns.col(x) / column_norm;
    set.points.push_back({weight, PureState(std::move(v)).canonicalized()});
  }
  return set;
}

std::vector<std::pair<int, int>> mub_labels(int dim) {
  std::vector<std::pair<int, int>> labels;
  labels.reserve(static_cast<size_t>(dim * (dim + 1)));
  for (int b = 0; b < dim + 1; ++b)
    for (int x = 0; x < dim; ++x) labels.emplace_back(b, x);
  return labels;
}

double weight_sum(const WeightedStateSet& set) {
  double total = 0.0;
  for (const auto& p : set.points) total += p.weight;
  return total;
}

} // namespace

DesignReport check_design(const WeightedStateSet& set, int order, double tol) {
  require(order == 1 || order == 2, "check_design: order must be 1 or 2");
  require(std::abs(weight_sum(set) - 1.0) <= tolerances().normalization,
          "check_design: weights do not sum to 1");

  const int d = set.dim;
  const double m_sym = symmetric_subspace_dim(d, order);

  const Eigen::Index md = (order == 1) ? d : d * d;
  ComplexMatrix moment = ComplexMatrix::Zero(md, md);
  for (const auto& p : set.points) {
    const ComplexMatrix proj = p.state.projector();
    moment += p.weight * (order == 1 ? proj : kron(proj, proj));
  }
  const ComplexMatrix target = symmetric_projector(d, order) / m_sym;

  double potential = 0.0;
  for (const auto& p : set.points) {
    for (const auto& q : set.points) {
      const double ov = overlap_squared(p.state, q.state);
      potential += p.weight * q.weight * (order == 1 ? ov : ov * ov);
    }
  }

  DesignReport report;
  report.order_checked = order;
  report.operator_deviation = max_abs_entry(moment - target);
  report.frame_potential = potential;
  report.frame_potential_target = 1.0 / m_sym;
  report.verdict = report.operator_deviation <= tol;
  return report;
}

DesignReport check_design(const WeightedStateSet& set, int order) {
  return check_design(set, order, tolerances().design);
}

PureState sic_fiducial_d2() {
  const double s = 1.0 / std::sqrt(3.0);
  ComplexVector f(2);
  f[0] = std::sqrt((1.0 + s) / 2.0);
  f[1] = std::exp(kImag * (std::numbers::pi / 4.0)) * std::sqrt((1.0 - s) / 2.0);
  return PureState(std::move(f));
}

WeightedStateSet weyl_heisenberg_orbit(const PureState& fiducial) {
  const int d = fiducial.dim();
  WeightedStateSet set;
  set.dim = d;
  set.points.reserve(static_cast<size_t>(d * d));
  const double weight = 1.0 / (d * d);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < d; ++k) {
      ComplexVector v(d);
      // X^j Z^k |f>: component i of the result is omega^{k (i - j)} f_{i - j}.
      for (int i = 0; i < d; ++i) {
        const int src = ((i - j) % d + d) % d;
        const int power = (k * src) % d;
        v[i] = std::exp(kImag * (2.0 * std::numbers::pi * power / d)) *
               fiducial.amplitudes()[src];
      }
      set.points.push_back({weight, PureState(std::move(v)).canonicalized()});
    }
  }
  return set;
}

WeightedStateSet builtin_sic(int dim) {
  if (dim == 2) return weyl_heisenberg_orbit(sic_fiducial_d2());
  if (dim == 3) {
    const Complex xi = std::exp(kImag * (std::numbers::pi / 3.0));
    const Complex xs = std::conj(xi);
    ComplexMatrix cols(3, 9);
    cols << 0, 0, 0, 1, 1, 1, -1, xi, xs,
            -1, xi, xs, 0, 0, 0, 1, 1, 1,
            1, 1, 1, -1, xi, xs, 0, 0, 0;
    return set_from_columns(cols, std::sqrt(2.0), std::nullopt);
  }
  throw ValidationError("builtin_sic: only dimensions 2 and 3 are built in");
}

WeightedStateSet builtin_mub(int dim) {
  if (dim == 2) {
    const double r = 1.0 / std::sqrt(2.0);
    ComplexMatrix cols(2, 6);
    cols << 1, 0, r, r, r, r,
            0, 1, r, -r, kImag * r, -kImag * r;
    return set_from_columns(cols, 1.0, mub_labels(2));
  }
  if (dim == 3) {
    const Complex w = std::exp(kImag * (2.0 * std::numbers::pi / 3.0));
    const Complex w2 = w * w;
    const double r3 = std::sqrt(3.0);
    ComplexMatrix cols(3, 12);
    cols << r3, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1,
            0, r3, 0, 1, w, w2, w, w2, 1, w2, w, 1,
            0, 0, r3, 1, w2, w, w, 1, w2, w2, 1, w;
    return set_from_columns(cols, r3, mub_labels(3));
  }
  if (dim == 4) {
    const Complex i = kImag;
    ComplexMatrix cols(4, 20);
    cols << 2, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1,
            0, 2, 0, 0, 1, 1, -1, -1, -1, -1, 1, 1, -i, -i, i, i, -i, -i, i, i,
            0, 0, 2, 0, 1, -1, -1, 1, -i, i, i, -i, -i, i, i, -i, -1, 1, -1, 1,
            0, 0, 0, 2, 1, -1, 1, -1, -i, i, -i, i, -1, 1, -1, 1, -i, i, i, -i;
    return set_from_columns(cols, 2.0, mub_labels(4));
  }
  if (dim == 6)
    throw ValidationError("builtin_mub: no maximal MUB set is known in dimension 6");
  throw ValidationError("builtin_mub: only dimensions 2, 3 and 4 are built in");
}

WeightedStateSet d4_orthonormal_witness() {
  const Complex i = kImag;
  const double r = 1.0 / std::sqrt(2.0);
  ComplexMatrix cols(4, 4);
  cols << r, 0.5, 0, 0.5,
          i * r, -0.5 * i, 0, -0.5 * i,
          0, -0.5 * i, i * r, 0.5 * i,
          0, 0.5, r, -0.5;
  return set_from_columns(cols, 1.0, std::nullopt);
}

SetValidationReport validate_sic(const WeightedStateSet& set, double tol) {
  const int d = set.dim;
  require(set.size() == d * d, "validate_sic: a SIC set needs d^2 states");
  double worst = 0.0;
  for (int x = 0; x < set.size(); ++x) {
    for (int y = 0; y < set.size(); ++y) {
      const double target = (x == y) ? 1.0 : 1.0 / (d + 1);
      const double got = overlap_squared(set.points[x].state, set.points[y].state);
      worst = std::max(worst, std::abs(got - target));
    }
  }
  return {worst, worst <= tol};
}

SetValidationReport validate_sic(const WeightedStateSet& set) {
  return validate_sic(set, tolerances().design);
}

SetValidationReport validate_mub(const WeightedStateSet& set, double tol) {
  const int d = set.dim;
  require(set.size() == d * (d + 1), "validate_mub: a maximal MUB set needs d(d+1) states");
  require(set.labels.has_value() && static_cast<int>(set.labels->size()) == set.size(),
          "validate_mub: basis labels (b, x) are required");
  const auto& labels = *set.labels;
  double worst = 0.0;
  for (int x = 0; x < set.size(); ++x) {
    for (int y = 0; y < set.size(); ++y) {
      const bool same_basis = labels[x].first == labels[y].first;
      const bool same_state = same_basis && labels[x].second == labels[y].second;
      const double target = same_state ? 1.0 : (same_basis ? 0.0 : 1.0 / d);
      const double got = overlap_squared(set.points[x].state, set.points[y].state);
      worst = std::max(worst, std::abs(got - target));
    }
  }
  return {worst, worst <= tol};
}

SetValidationReport validate_mub(const WeightedStateSet& set) {
  return validate_mub(set, tolerances().design);
}

MixedStateSet depolarize(const WeightedStateSet& set, double t) {
  require(t >= 0.0 && t <= 1.0, "depolarize: mixing parameter must lie in [0, 1]");
  const int d = set.dim;
  const ComplexMatrix uniform = ComplexMatrix::Identity(d, d) / static_cast<double>(d);
  MixedStateSet out;
  out.dim = d;
  out.labels = set.labels;
  out.points.reserve(set.points.size());
  for (const auto& p : set.points) {
    ComplexMatrix rho = t * p.state.projector() + (1.0 - t) * uniform;
    out.points.push_back({p.weight, DensityOperator(std::move(rho))});
  }
  const double purity = t * t + (1.0 - t * t) / d;  // Tr[rho^2] for every point
  const bool mub_like = set.labels.has_value();
  out.purity_parameter = mub_like ? purity : purity / (d * d);
  return out;
}

namespace {

double inferred_mean_purity(const MixedStateSet& set) {
  double total = 0.0;
  for (const auto& p : set.points) total += p.state.purity();
  return total / set.size();
}

SetValidationReport validate_generalized(const MixedStateSet& set, double tol, bool mub_like) {
  const int d = set.dim;
  const int n = set.size();
  double worst = 0.0;

  double diag, same_basis, cross;
  if (mub_like) {
    const double k = set.purity_parameter.value_or(inferred_mean_purity(set));
    diag = k;
    same_basis = (1.0 - k) / (d - 1);
    cross = 1.0 / d;
  } else {
    const double a = set.purity_parameter.value_or(inferred_mean_purity(set) / (d * d));
    diag = d * d * a;
    same_basis = cross = d * (1.0 - d * a) / (d * d - 1.0);
  }

  const std::vector<std::pair<int, int>>* labels = nullptr;
  if (mub_like) {
    require(set.labels.has_value() && static_cast<int>(set.labels->size()) == n,
            "generalized MUB validation requires basis labels");
    labels = &*set.labels;
  }

  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      double target;
      if (x == y) {
        target = diag;
      } else if (mub_like && (*labels)[x].first == (*labels)[y].first) {
        target = same_basis;
      } else {
        target = cross;
      }
      const double got =
          real_trace_product(set.points[x].state.matrix(), set.points[y].state.matrix());
      worst = std::max(worst, std::abs(got - target));
    }
  }

  const double completeness = mub_like ? d + 1.0 : d;
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& p : set.points) sum += p.state.matrix();
  worst = std::max(worst,
                   max_abs_entry(sum - completeness * ComplexMatrix::Identity(d, d)));

  return {worst, worst <= tol};
}

} // namespace

SetValidationReport validate_generalized_sic(const MixedStateSet& set, double tol) {
  require(set.size() == set.dim * set.dim,
          "validate_generalized_sic: a SIC-type set needs d^2 operators");
  return validate_generalized(set, tol, false);
}

SetValidationReport validate_generalized_mub(const MixedStateSet& set, double tol) {
  require(set.size() == set.dim * (set.dim + 1),
          "validate_generalized_mub: a MUB-type set needs d(d+1) operators");
  return validate_generalized(set, tol, true);
}

Ensemble as_ensemble(const WeightedStateSet& set) {
  std::vector<Ensemble::Element> elements;
  elements.reserve(set.points.size());
  for (const auto& p : set.points)
    elements.push_back({p.weight, DensityOperator::from_pure(p.state)});
  return Ensemble(set.dim, std::move(elements));
}

Ensemble as_ensemble(const MixedStateSet& set) {
  std::vector<Ensemble::Element> elements;
  elements.reserve(set.points.size());
  for (const auto& p : set.points) elements.push_back({p.weight, p.state});
  return Ensemble(set.dim, std::move(elements));
}

namespace {

template <typename Set, typename Projector>
Povm rescaled_povm(const Set& set, Projector projector) {
  const int d = set.dim;
  std::vector<Effect> effects;
  effects.reserve(set.points.size());
  ComplexMatrix sum = ComplexMatrix::Zero(d, d);
  for (const auto& p : set.points) {
    ComplexMatrix m = static_cast<double>(d) * p.weight * projector(p);
    sum += m;
    effects.push_back(Effect::unchecked(std::move(m)));
  }
  require(max_abs_entry(sum - ComplexMatrix::Identity(d, d)) <= tolerances().normalization,
          "as_povm: set is not a 1-design, effects do not resolve the identity");
  return Povm(d, std::move(effects));
}

} // namespace

Povm as_povm(const WeightedStateSet& set) {
  return rescaled_povm(set, [](const WeightedStateSet::Point& p) { return p.state.projector(); });
}

Povm as_povm(const MixedStateSet& set) {
  return rescaled_povm(set, [](const MixedStateSet::Point& p) { return p.state.matrix(); });
}

WeightedStateSet povm_as_weighted_set(const Povm& povm, double rank_one_tol) {
  WeightedStateSet set;
  set.dim = povm.dim();
  set.points.reserve(static_cast<size_t>(povm.size()));
  for (const auto& effect : povm.elements()) {
    const double tr = effect.trace();
    require(tr > rank_one_tol, "povm_as_weighted_set: zero effect");
    // Rank-one iff Tr[Pi^2] = Tr[Pi]^2.
    require(std::abs(effect.purity_trace() - tr * tr) <= rank_one_tol,
            "povm_as_weighted_set: effect is not rank-one");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(effect.matrix());
    ComplexVector top = solver.eigenvectors().col(povm.dim() - 1);
    set.points.push_back({tr / povm.dim(), PureState(std::move(top)).canonicalized()});
  }
  return set;
}

WeightedStateSet ensemble_as_weighted_set(const Ensemble& ensemble, double rank_one_tol) {
  WeightedStateSet set;
  set.dim = ensemble.dim();
  set.points.reserve(static_cast<size_t>(ensemble.size()));
  for (const auto& el : ensemble.elements()) {
    require(std::abs(el.state.purity() - 1.0) <= rank_one_tol,
            "ensemble_as_weighted_set: state is not pure");
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(el.state.matrix());
    ComplexVector top = solver.eigenvectors().col(ensemble.dim() - 1);
    set.points.push_back({el.weight, PureState(std::move(top)).canonicalized()});
  }
  return set;
}

} // namespace qdesign
