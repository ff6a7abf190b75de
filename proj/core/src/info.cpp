#include "qdesign/info.hpp"

#include <cmath>
#include <numbers>

namespace qdesign {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

double xlog2x(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

} // namespace

double entropy_bits(const RealVector& probabilities) {
  const auto& tol = tolerances();
  double total = 0.0;
  double h = 0.0;
  for (Eigen::Index i = 0; i < probabilities.size(); ++i) {
    double p = probabilities[i];
    if (p < 0.0) {
      require(p >= -tol.probability_floor, "entropy: negative probability");
      p = 0.0;
    }
    total += p;
    h -= xlog2x(p);
  }
  require(std::abs(total - 1.0) <= tol.normalization, "entropy: probabilities do not sum to 1");
  return h;
}

double mutual_information(const JointDistribution& joint) {
  const auto& p = joint.matrix();
  const auto& px = joint.input_marginal();
  const auto& qy = joint.output_marginal();
  double info = 0.0;
  for (Eigen::Index x = 0; x < p.rows(); ++x) {
    for (Eigen::Index y = 0; y < p.cols(); ++y) {
      const double pxy = p(x, y);
      if (pxy > 0.0) info += pxy * std::log2(pxy / (px[x] * qy[y]));
    }
  }
  require(info >= -tolerances().normalization, "mutual information came out negative");
  return std::max(info, 0.0);
}

RealVector conditional_input_distribution(const Ensemble& ensemble, const Effect& effect) {
  require(ensemble.dim() == effect.dim(), "conditional distribution: dimension mismatch");
  const double tr = effect.trace();
  require(tr > 0.0, "conditional distribution: zero effect");
  RealVector p(ensemble.size());
  for (int x = 0; x < ensemble.size(); ++x) {
    const auto& el = ensemble[x];
    p[x] = ensemble.dim() * el.weight *
           real_trace_product(el.state.matrix(), effect.matrix()) / tr;
  }
  return p;
}

RealVector outcome_distribution(const Povm& povm, const DensityOperator& rho) {
  require(povm.dim() == rho.dim(), "outcome distribution: dimension mismatch");
  RealVector q(povm.size());
  for (int y = 0; y < povm.size(); ++y)
    q[y] = real_trace_product(povm[y].matrix(), rho.matrix());
  return q;
}

namespace {

double design_entropy_bound(double trace, double trace_sq, int n, int dim) {
  return std::log2(n * (dim + 1.0) / dim * trace * trace / (trace * trace + trace_sq));
}

} // namespace

double ensemble_entropy_bound(const Effect& effect, int n_states, int dim) {
  require(n_states >= 1, "ensemble_entropy_bound: N must be at least 1");
  const double tr = effect.trace();
  require(tr > 1e-14, "ensemble_entropy_bound: zero effect");
  return design_entropy_bound(tr, effect.purity_trace(), n_states, dim);
}

double povm_entropy_bound(const DensityOperator& rho, int n_outcomes, int dim) {
  require(n_outcomes >= 1, "povm_entropy_bound: N must be at least 1");
  return design_entropy_bound(rho.matrix().trace().real(), rho.purity(), n_outcomes, dim);
}

double accinfo_upper_bound(int dim) {
  require(dim >= 2, "accinfo_upper_bound: dimension must be at least 2");
  return std::log2(2.0 * dim / (dim + 1.0));
}

double infopower_upper_bound(int dim) {
  require(dim >= 2, "infopower_upper_bound: dimension must be at least 2");
  return std::log2(2.0 * dim / (dim + 1.0));
}

ScroogeBounds scrooge_bounds(int dim) {
  require(dim >= 2, "scrooge_bounds: dimension must be at least 2");
  double harmonic_tail = 0.0;
  for (int n = dim; n >= 2; --n) harmonic_tail += 1.0 / n;
  return {std::log2(static_cast<double>(dim)) - harmonic_tail / std::numbers::ln2,
          std::log2(static_cast<double>(dim))};
}

Povm pretty_good_povm(const Ensemble& ensemble) {
  const int d = ensemble.dim();
  const DensityOperator avg = average_state(ensemble);
  require(max_abs_entry(avg.matrix() - ComplexMatrix::Identity(d, d) / static_cast<double>(d)) <=
              tolerances().normalization,
          "pretty_good_povm: ensemble average state is not 1/d");
  std::vector<Effect> effects;
  effects.reserve(static_cast<size_t>(ensemble.size()));
  for (const auto& el : ensemble.elements())
    effects.push_back(Effect::unchecked(d * el.weight * el.state.matrix()));
  return Povm(d, std::move(effects));
}

Ensemble pretty_good_ensemble(const Povm& povm) {
  const int d = povm.dim();
  std::vector<Ensemble::Element> elements;
  elements.reserve(static_cast<size_t>(povm.size()));
  for (const auto& effect : povm.elements()) {
    const double tr = effect.trace();
    require(tr > 1e-14, "pretty_good_ensemble: zero effect");
    elements.push_back({tr / d, DensityOperator::unchecked(effect.matrix() / tr)});
  }
  return Ensemble(d, std::move(elements));
}

double pg_sic_value(int dim) {
  require(dim >= 2, "pg_sic_value: dimension must be at least 2");
  return std::log2(static_cast<double>(dim)) -
         (dim - 1.0) / dim * std::log2(dim + 1.0);
}

double pg_mub_value(int dim) {
  require(dim >= 2, "pg_mub_value: dimension must be at least 2");
  return std::log2(static_cast<double>(dim)) / (dim + 1.0);
}

namespace {

void require_sic_purity_range(int dim, double a) {
  const double d = dim;
  require(a >= 1.0 / (d * d * d) - 1e-12 && a <= 1.0 / (d * d) + 1e-12,
          "SIC purity parameter outside [1/d^3, 1/d^2]");
}

void require_mub_purity_range(int dim, double k) {
  require(k >= 1.0 / dim - 1e-12 && k <= 1.0 + 1e-12,
          "MUB purity parameter outside [1/d, 1]");
}

} // namespace

double gen_sic_bound(int dim, double a) {
  require(dim >= 2, "gen_sic_bound: dimension must be at least 2");
  require_sic_purity_range(dim, a);
  return std::log2(dim * (dim * dim * a + 1.0) / (dim + 1.0));
}

double gen_mub_bound(int dim, double k) {
  require(dim >= 2, "gen_mub_bound: dimension must be at least 2");
  require_mub_purity_range(dim, k);
  return std::log2(dim * (k + 1.0) / (dim + 1.0));
}

double gen_sic_conditional_entropy_bound(int dim, double a) {
  require(dim >= 2, "gen_sic_conditional_entropy_bound: dimension must be at least 2");
  require_sic_purity_range(dim, a);
  const double d = dim;
  return -std::log2((a * d * d * d - a * d * d + d - 1.0) / (d * (d * d - 1.0)));
}

double gen_mub_conditional_entropy_bound(int dim, double k) {
  require(dim >= 2, "gen_mub_conditional_entropy_bound: dimension must be at least 2");
  require_mub_purity_range(dim, k);
  return std::log2((dim + 1.0) * (dim + 1.0) / (k + 1.0));
}

BoundSet bounds_for_dimension(int dim, std::optional<double> a, std::optional<double> k) {
  BoundSet out;
  out.dimension = dim;
  out.accinfo_upper = accinfo_upper_bound(dim);
  out.infopower_upper = infopower_upper_bound(dim);
  out.scrooge_lower = scrooge_bounds(dim).lower;
  out.trivial_upper = std::log2(static_cast<double>(dim));
  if (a) out.gen_sic = gen_sic_bound(dim, *a);
  if (k) out.gen_mub = gen_mub_bound(dim, *k);
  return out;
}

} // namespace qdesign
