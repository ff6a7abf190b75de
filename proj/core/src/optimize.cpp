#include "qdesign/optimize.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <numbers>
#include <thread>

#include "qdesign/designs.hpp"
#include "qdesign/info.hpp"

namespace qdesign {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

double log_2(double v) { return std::log2(v); }

// ---------------------------------------------------------------------------
// parameter packing: complex matrices <-> [re, im] pairs in row-major order

RealVector pack_complex(const ComplexMatrix& m) {
  RealVector v(2 * m.size());
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      v[k++] = m(i, j).real();
      v[k++] = m(i, j).imag();
    }
  }
  return v;
}

ComplexMatrix unpack_complex(const RealVector& v, Eigen::Index rows, Eigen::Index cols) {
  ComplexMatrix m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) {
      m(i, j) = Complex(v[k], v[k + 1]);
      k += 2;
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// job fan-out

template <typename Body>
void run_jobs(int count, int workers, Body&& body) {
  workers = std::min(workers, count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      int i;
      while ((i = next.fetch_add(1)) < count) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// accessible-information objective over isometry points

struct EnsembleData {
  std::vector<ComplexMatrix> states;
  RealVector weights;
  int dim = 0;
};

EnsembleData ensemble_data(const Ensemble& ensemble) {
  EnsembleData data;
  data.dim = ensemble.dim();
  data.weights.resize(ensemble.size());
  data.states.reserve(static_cast<size_t>(ensemble.size()));
  for (int x = 0; x < ensemble.size(); ++x) {
    data.weights[x] = ensemble[x].weight;
    data.states.push_back(ensemble[x].state.matrix());
  }
  return data;
}

// Mutual information of the Born matrix generated by isometry rows, with
// the ensemble weights as the fixed input marginal. The gradient is the
// real-parametrization (Wirtinger) gradient 2 dI/dA*.
double accinfo_eval(const EnsembleData& e, const ComplexMatrix& a,
                    ComplexMatrix* gradient) {
  const int n = static_cast<int>(e.weights.size());
  const int m = static_cast<int>(a.rows());
  RealMatrix born(n, m);
  std::vector<ComplexMatrix> cache;
  if (gradient) cache.reserve(static_cast<size_t>(n));
  for (int x = 0; x < n; ++x) {
    ComplexMatrix t = a * e.states[x];
    born.row(x) =
        e.weights[x] * t.cwiseProduct(a.conjugate()).rowwise().sum().real().transpose();
    if (gradient) cache.push_back(std::move(t));
  }
  RealVector q = born.colwise().sum().transpose();

  double value = 0.0;
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < m; ++y) {
      const double p = born(x, y);
      if (p > 0.0) value += p * log_2(p / (e.weights[x] * q[y]));
    }
  }

  if (gradient) {
    ComplexMatrix g = ComplexMatrix::Zero(m, a.cols());
    RealVector coeff(m);
    for (int x = 0; x < n; ++x) {
      for (int y = 0; y < m; ++y) {
        const double p = born(x, y);
        coeff[y] = p > 0.0 ? log_2(p / (e.weights[x] * q[y])) : 0.0;
      }
      g.noalias() += 2.0 * e.weights[x] * (coeff.asDiagonal() * cache[static_cast<size_t>(x)]);
    }
    *gradient = std::move(g);
  }
  return value;
}

ComplexMatrix stiefel_project(const ComplexMatrix& a, const ComplexMatrix& g) {
  ComplexMatrix w = a.adjoint() * g;
  return g - a * (0.5 * (w + w.adjoint()).eval());
}

struct AscentOutcome {
  double value = 0.0;
  ComplexMatrix point;
  std::vector<double> trace;
  bool converged = false;
};

// Riemannian gradient ascent with thin-QR retraction and Armijo
// backtracking from the previous accepted step.
AscentOutcome ascend_isometry(const EnsembleData& e, ComplexMatrix a,
                              const OptimizerConfig& cfg) {
  AscentOutcome out;
  ComplexMatrix grad;
  double f = accinfo_eval(e, a, &grad);
  out.trace.push_back(f);
  double step = cfg.initial_step;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    const ComplexMatrix xi = stiefel_project(a, grad);
    const double slope = xi.squaredNorm();
    if (std::sqrt(slope) < cfg.grad_norm_tol) {
      out.converged = true;
      break;
    }
    double t = std::min(cfg.initial_step, 2.0 * step);
    bool accepted = false;
    ComplexMatrix a_try;
    double f_try = f;
    while (t >= cfg.min_step) {
      a_try = qr_orthonormalize(a + t * xi);
      f_try = accinfo_eval(e, a_try, nullptr);
      if (f_try >= f + cfg.armijo_slope * t * slope) {
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;  // no ascent direction left at this scale
    const double gain = f_try - f;
    a = std::move(a_try);
    f = accinfo_eval(e, a, &grad);
    step = t;
    out.trace.push_back(f);
    if (gain < cfg.value_tol) {
      out.converged = true;
      break;
    }
  }
  out.value = f;
  out.point = std::move(a);
  return out;
}

std::pair<int, int> outcome_range(const OptimizerConfig& cfg, int dim) {
  int lo = cfg.min_outcomes > 0 ? cfg.min_outcomes : dim;
  int hi = cfg.max_outcomes > 0 ? cfg.max_outcomes : dim * dim;
  require(lo >= dim, "outcome count below the dimension cannot resolve the identity");
  require(hi >= lo, "empty outcome range");
  require(cfg.allow_outcomes_beyond_davies || hi <= dim * dim,
          "outcome range beyond d^2 needs allow_outcomes_beyond_davies");
  return {lo, hi};
}

struct MultistartOutcome {
  double value = 0.0;
  ComplexMatrix point;
  std::vector<double> trace;
  bool converged = false;
  int outcomes = 0;
  int restart = 0;
  int agreeing = 0;
};

MultistartOutcome multistart_accinfo(const EnsembleData& e, const OptimizerConfig& cfg,
                                     std::uint64_t seed_salt) {
  const auto [m_lo, m_hi] = outcome_range(cfg, e.dim);
  require(cfg.restarts >= 1, "at least one restart is required");

  struct Job {
    int outcomes;
    int restart;
  };
  std::vector<Job> jobs;
  for (int m = m_lo; m <= m_hi; ++m)
    for (int r = 0; r < cfg.restarts; ++r) jobs.push_back({m, r});

  std::vector<AscentOutcome> results(jobs.size());
  run_jobs(static_cast<int>(jobs.size()), resolve_worker_count(cfg.threads), [&](int i) {
    Rng rng(mix_seed(cfg.seed + seed_salt, static_cast<std::uint64_t>(i)));
    ComplexMatrix start = random_isometry(jobs[static_cast<size_t>(i)].outcomes, e.dim, rng);
    results[static_cast<size_t>(i)] = ascend_isometry(e, std::move(start), cfg);
  });

  int best = 0;
  for (int i = 1; i < static_cast<int>(results.size()); ++i) {
    if (results[static_cast<size_t>(i)].value > results[static_cast<size_t>(best)].value + 1e-9)
      best = i;
  }
  int agreeing = 0;
  for (const auto& r : results)
    if (r.value >= results[static_cast<size_t>(best)].value - 1e-6) ++agreeing;

  MultistartOutcome out;
  out.value = results[static_cast<size_t>(best)].value;
  out.point = std::move(results[static_cast<size_t>(best)].point);
  out.trace = std::move(results[static_cast<size_t>(best)].trace);
  out.converged = results[static_cast<size_t>(best)].converged;
  out.outcomes = jobs[static_cast<size_t>(best)].outcomes;
  out.restart = jobs[static_cast<size_t>(best)].restart;
  out.agreeing = agreeing;
  return out;
}

Povm povm_from_isometry(const ComplexMatrix& a, int dim) {
  std::vector<Effect> effects;
  effects.reserve(static_cast<size_t>(a.rows()));
  for (Eigen::Index y = 0; y < a.rows(); ++y)
    effects.push_back(Effect::unchecked(a.row(y).adjoint() * a.row(y)));
  return Povm(dim, std::move(effects));
}

bool is_two_design_ensemble(const Ensemble& ensemble) {
  try {
    const WeightedStateSet set = ensemble_as_weighted_set(ensemble);
    return check_design(set, 2).verdict;
  } catch (const ValidationError&) {
    return false;
  }
}

bool is_uniform_two_design_povm(const Povm& povm) {
  try {
    const WeightedStateSet set = povm_as_weighted_set(povm);
    double lo = set.points.front().weight, hi = lo;
    for (const auto& p : set.points) {
      lo = std::min(lo, p.weight);
      hi = std::max(hi, p.weight);
    }
    if (hi - lo > tolerances().design) return false;
    return check_design(set, 2).verdict;
  } catch (const ValidationError&) {
    return false;
  }
}

void finish_result(OptimizationResult& result, double bound, double recomputed) {
  result.value_bits = std::max(recomputed, 0.0);
  result.bound_bits = bound;
  result.bound_gap = result.value_bits - bound;
}

} // namespace

int resolve_worker_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("QDESIGN_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

IsometryPoint::IsometryPoint(ComplexMatrix c) : coefficients(std::move(c)) {
  require(coefficients.rows() >= coefficients.cols(),
          "isometry needs at least d outcome rows");
  require(max_abs_entry(coefficients.adjoint() * coefficients -
                        ComplexMatrix::Identity(coefficients.cols(), coefficients.cols())) <=
              1e-9,
          "matrix is not an isometry: A^dag A differs from the identity");
}

IsometryPoint IsometryPoint::random(int outcomes, int dim, Rng& rng) {
  return IsometryPoint(random_isometry(outcomes, dim, rng));
}

Povm IsometryPoint::to_povm() const { return povm_from_isometry(coefficients, dim()); }

OptimizationResult maximize_accessible_info(const Ensemble& ensemble,
                                            const OptimizerConfig& config) {
  const EnsembleData data = ensemble_data(ensemble);
  MultistartOutcome winner = multistart_accinfo(data, config, 0);

  OptimizationResult result;
  result.best_povm = povm_from_isometry(winner.point, ensemble.dim());
  result.trace = std::move(winner.trace);
  result.converged = winner.converged;
  result.restarts_agreeing = winner.agreeing;
  result.seed = config.seed;
  result.winning_outcomes = winner.outcomes;
  result.winning_restart = winner.restart;

  const double recomputed = mutual_information(born_statistics(ensemble, *result.best_povm));
  const double bound = is_two_design_ensemble(ensemble)
                           ? accinfo_upper_bound(ensemble.dim())
                           : std::log2(static_cast<double>(ensemble.dim()));
  finish_result(result, bound, recomputed);
  require(result.value_bits <= std::log2(static_cast<double>(ensemble.dim())) + 1e-9,
          "optimizer value exceeds log d; inputs are inconsistent");
  return result;
}

// ---------------------------------------------------------------------------
// informational power: Blahut-Arimoto weights alternated with sphere ascent

namespace {

struct PovmData {
  std::vector<ComplexMatrix> effects;
  int dim = 0;
};

PovmData povm_data(const Povm& povm) {
  PovmData data;
  data.dim = povm.dim();
  data.effects.reserve(static_cast<size_t>(povm.size()));
  for (const auto& e : povm.elements()) data.effects.push_back(e.matrix());
  return data;
}

// W(x, y) = <psi_x| Pi_y |psi_x> for unit row states.
RealMatrix channel_of_states(const PovmData& p, const ComplexMatrix& states) {
  const int k = static_cast<int>(states.rows());
  const int m = static_cast<int>(p.effects.size());
  RealMatrix w(k, m);
  const ComplexMatrix conj_states = states.conjugate();
  for (int y = 0; y < m; ++y) {
    w.col(y) = (conj_states * p.effects[static_cast<size_t>(y)])
                   .cwiseProduct(states)
                   .rowwise()
                   .sum()
                   .real();
  }
  return w.cwiseMax(0.0);
}

struct BaOutcome {
  RealVector weights;
  RealVector exponents;  // D_x in bits under the final output marginal
  double value = 0.0;
  double max_exponent = 0.0;
};

// Capacity fixed point p <- p 2^{D_x} / Z for a fixed channel; monotone in
// the mutual information, so every iterate extends the trace.
BaOutcome blahut_arimoto(const RealMatrix& channel, RealVector weights, int max_iters,
                         double gap_tol, std::vector<double>* trace) {
  const int k = static_cast<int>(channel.rows());
  BaOutcome out;
  RealVector d_bits(k);
  for (int iter = 0; iter < max_iters; ++iter) {
    const RealVector q = channel.transpose() * weights;
    double value = 0.0;
    double max_d = -std::numeric_limits<double>::infinity();
    for (int x = 0; x < k; ++x) {
      double dx = 0.0;
      for (int y = 0; y < channel.cols(); ++y) {
        const double w = channel(x, y);
        if (w > 0.0 && q[y] > 0.0) dx += w * log_2(w / q[y]);
      }
      d_bits[x] = dx;
      value += weights[x] * dx;
      max_d = std::max(max_d, dx);
    }
    if (trace) trace->push_back(value);
    out.weights = weights;
    out.exponents = d_bits;
    out.value = value;
    out.max_exponent = max_d;
    if (max_d - value < gap_tol) break;
    for (int x = 0; x < k; ++x) weights[x] *= std::exp2(d_bits[x] - value);
    const double total = weights.sum();
    if (!(total > 0.0)) break;  // all mass underflowed
    weights /= total;
  }
  return out;
}

// One Armijo-accepted projected gradient step for all states jointly on
// the product of unit spheres. Returns false when no step was accepted.
bool sphere_ascend_step(const PovmData& p, const RealVector& weights, ComplexMatrix& states,
                        double& value, double& step, const OptimizerConfig& cfg,
                        std::vector<double>* trace) {
  const int k = static_cast<int>(states.rows());
  const int m = static_cast<int>(p.effects.size());
  const RealMatrix w = channel_of_states(p, states);
  RealVector q = RealVector::Zero(m);
  for (int y = 0; y < m; ++y) q[y] = weights.dot(w.col(y));

  RealMatrix coeff(k, m);
  for (int x = 0; x < k; ++x) {
    for (int y = 0; y < m; ++y) {
      const double born = weights[x] * w(x, y);
      coeff(x, y) = (born > 0.0 && q[y] > 0.0) ? log_2(w(x, y) / q[y]) : 0.0;
    }
  }

  ComplexMatrix grad = ComplexMatrix::Zero(k, states.cols());
  for (int y = 0; y < m; ++y) {
    grad.noalias() += (weights.cwiseProduct(coeff.col(y))).asDiagonal() *
                      (states * p.effects[static_cast<size_t>(y)].transpose());
  }
  grad *= 2.0;

  // tangent projection per sphere
  for (int x = 0; x < k; ++x) {
    const Complex inner = states.row(x).conjugate().cwiseProduct(grad.row(x)).sum();
    grad.row(x) -= inner.real() * states.row(x);
  }
  const double slope = grad.squaredNorm();
  if (std::sqrt(slope) < cfg.grad_norm_tol) return false;

  auto value_of = [&](const ComplexMatrix& s) {
    const RealMatrix wc = channel_of_states(p, s);
    RealVector qc = RealVector::Zero(m);
    for (int y = 0; y < m; ++y) qc[y] = weights.dot(wc.col(y));
    double v = 0.0;
    for (int x = 0; x < k; ++x)
      for (int y = 0; y < m; ++y) {
        const double born = weights[x] * wc(x, y);
        if (born > 0.0) v += born * log_2(wc(x, y) / qc[y]);
      }
    return v;
  };

  double t = std::min(cfg.initial_step, 2.0 * step);
  while (t >= cfg.min_step) {
    ComplexMatrix trial = states + t * grad;
    trial.rowwise().normalize();
    const double v = value_of(trial);
    if (v >= value + cfg.armijo_slope * t * slope) {
      states = std::move(trial);
      value = v;
      step = t;
      if (trace) trace->push_back(v);
      return true;
    }
    t *= 0.5;
  }
  return false;
}

struct PowerRunOutcome {
  double value = 0.0;
  ComplexMatrix states;
  RealVector weights;
  std::vector<double> trace;
  double certificate_gap = 0.0;
  bool converged = false;
};

ComplexMatrix seed_states(const PovmData& p, int count, Rng& rng) {
  ComplexMatrix states(count, p.dim);
  int row = 0;
  for (const auto& effect : p.effects) {
    if (row >= count) break;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(effect);
    states.row(row++) = solver.eigenvectors().col(p.dim - 1).transpose();
  }
  for (; row < count; ++row)
    states.row(row) = random_pure_state(p.dim, rng).amplitudes().transpose();
  return states;
}

double power_value(const PovmData& p, const RealVector& weights,
                   const ComplexMatrix& states) {
  const int k = static_cast<int>(states.rows());
  const int m = static_cast<int>(p.effects.size());
  const RealMatrix w = channel_of_states(p, states);
  RealVector q = RealVector::Zero(m);
  for (int y = 0; y < m; ++y) q[y] = weights.dot(w.col(y));
  double v = 0.0;
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < m; ++y) {
      const double born = weights[x] * w(x, y);
      if (born > 0.0) v += born * log_2(w(x, y) / q[y]);
    }
  return v;
}

// Relative entropy in bits between the outcome distribution of |psi> and a
// fixed output marginal: the capacity exponent D(psi).
double state_exponent(const PovmData& p, const RealVector& q, const ComplexVector& psi) {
  double d = 0.0;
  for (size_t y = 0; y < p.effects.size(); ++y) {
    const double w = std::max(0.0, (psi.adjoint() * p.effects[y] * psi)(0, 0).real());
    if (w > 0.0) d += w * log_2(w / std::max(q[static_cast<Eigen::Index>(y)], 1e-300));
  }
  return d;
}

// Ascend D(psi) over the unit sphere for a fixed output marginal. The
// maximum over all pure states certifies (or refutes) capacity optimality.
ComplexVector ascend_exponent(const PovmData& p, const RealVector& q, ComplexVector psi,
                              int max_iters) {
  double value = state_exponent(p, q, psi);
  double step = 1.0;
  for (int iter = 0; iter < max_iters; ++iter) {
    ComplexVector grad = ComplexVector::Zero(p.dim);
    for (size_t y = 0; y < p.effects.size(); ++y) {
      const double w = std::max(0.0, (psi.adjoint() * p.effects[y] * psi)(0, 0).real());
      if (w > 0.0)
        grad += 2.0 * log_2(w / std::max(q[static_cast<Eigen::Index>(y)], 1e-300)) *
                (p.effects[y] * psi);
    }
    grad -= psi.dot(grad).real() * psi;
    const double slope = grad.squaredNorm();
    if (std::sqrt(slope) < 1e-10) break;
    double t = std::min(1.0, 2.0 * step);
    bool accepted = false;
    while (t >= 1e-18) {
      ComplexVector trial = psi + t * grad;
      trial.normalize();
      const double v = state_exponent(p, q, trial);
      if (v >= value + 1e-4 * t * slope) {
        psi = std::move(trial);
        value = v;
        step = t;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  return psi;
}

struct BestResponse {
  ComplexVector state;
  double exponent = -std::numeric_limits<double>::infinity();
};

BestResponse best_response_state(const PovmData& p, const RealVector& q,
                                 const ComplexMatrix& candidates, Rng& rng,
                                 bool thorough) {
  std::vector<ComplexVector> seeds;
  for (Eigen::Index x = 0; x < candidates.rows(); ++x)
    seeds.push_back(candidates.row(x).transpose());
  if (thorough) {
    for (const auto& effect : p.effects) {
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(effect);
      seeds.push_back(solver.eigenvectors().col(p.dim - 1));
    }
  }
  const int randoms = thorough ? 4 : 2;
  for (int extra = 0; extra < randoms; ++extra)
    seeds.push_back(random_pure_state(p.dim, rng).amplitudes());

  BestResponse best;
  for (auto& seed : seeds) {
    const ComplexVector psi = ascend_exponent(p, q, std::move(seed), thorough ? 300 : 80);
    const double d = state_exponent(p, q, psi);
    if (d > best.exponent) {
      best.exponent = d;
      best.state = psi;
    }
  }
  return best;
}

RealVector output_marginal_of(const PovmData& p, const RealVector& weights,
                              const ComplexMatrix& states) {
  const RealMatrix w = channel_of_states(p, states);
  RealVector q = RealVector::Zero(w.cols());
  for (Eigen::Index y = 0; y < w.cols(); ++y) q[y] = weights.dot(w.col(y));
  return q;
}

void prune_candidates(ComplexMatrix& states, RealVector& weights, double threshold) {
  std::vector<int> keep;
  for (int x = 0; x < static_cast<int>(weights.size()); ++x)
    if (weights[x] >= threshold) keep.push_back(x);
  if (static_cast<int>(keep.size()) == static_cast<int>(weights.size()) || keep.empty())
    return;
  ComplexMatrix pruned_states(keep.size(), states.cols());
  RealVector pruned_weights(keep.size());
  for (int i = 0; i < static_cast<int>(keep.size()); ++i) {
    pruned_states.row(i) = states.row(keep[static_cast<size_t>(i)]);
    pruned_weights[i] = weights[keep[static_cast<size_t>(i)]];
  }
  states = std::move(pruned_states);
  weights = pruned_weights / pruned_weights.sum();
}

// Appends an improving state and picks its weight by exact line search:
// the mutual information is concave along the mixture segment, so a golden
// search finds the best epsilon and the value cannot decrease. Evicts an
// abandoned candidate when the pool is full.
bool insert_candidate(const PovmData& p, ComplexMatrix& states, RealVector& weights,
                      double& value, const BestResponse& br, int cap) {
  if (static_cast<int>(states.rows()) >= cap) {
    Eigen::Index drop;
    if (weights.minCoeff(&drop) > 1e-8) return false;
    std::vector<int> keep;
    for (int x = 0; x < static_cast<int>(weights.size()); ++x)
      if (x != static_cast<int>(drop)) keep.push_back(x);
    ComplexMatrix kept_states(keep.size(), states.cols());
    RealVector kept_weights(keep.size());
    for (int i = 0; i < static_cast<int>(keep.size()); ++i) {
      kept_states.row(i) = states.row(keep[static_cast<size_t>(i)]);
      kept_weights[i] = weights[keep[static_cast<size_t>(i)]];
    }
    states = std::move(kept_states);
    weights = kept_weights / kept_weights.sum();
    value = power_value(p, weights, states);
  }

  ComplexMatrix trial_states(states.rows() + 1, states.cols());
  trial_states.topRows(states.rows()) = states;
  trial_states.bottomRows(1) = br.state.transpose();
  const auto mixture_value = [&](double eps) {
    RealVector w(weights.size() + 1);
    w.head(weights.size()) = (1.0 - eps) * weights;
    w[weights.size()] = eps;
    return power_value(p, w, trial_states);
  };

  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  double lo = 0.0, hi = 1.0;
  double mid_lo = hi - golden * (hi - lo), mid_hi = lo + golden * (hi - lo);
  double f_lo = mixture_value(mid_lo), f_hi = mixture_value(mid_hi);
  for (int iter = 0; iter < 60; ++iter) {
    if (f_lo < f_hi) {
      lo = mid_lo;
      mid_lo = mid_hi;
      f_lo = f_hi;
      mid_hi = lo + golden * (hi - lo);
      f_hi = mixture_value(mid_hi);
    } else {
      hi = mid_hi;
      mid_hi = mid_lo;
      f_hi = f_lo;
      mid_lo = hi - golden * (hi - lo);
      f_lo = mixture_value(mid_lo);
    }
  }
  const double eps = 0.5 * (lo + hi);
  const double v = mixture_value(eps);
  if (!(v > value) || eps <= 0.0) return false;
  RealVector w(weights.size() + 1);
  w.head(weights.size()) = (1.0 - eps) * weights;
  w[weights.size()] = eps;
  states = std::move(trial_states);
  weights = std::move(w);
  value = v;
  return true;
}

PowerRunOutcome run_power_alternation(const PovmData& p, ComplexMatrix states,
                                      const OptimizerConfig& cfg, Rng& rng) {
  PowerRunOutcome out;
  const int cap = static_cast<int>(states.rows()) + 4;
  RealVector weights =
      RealVector::Constant(states.rows(), 1.0 / static_cast<double>(states.rows()));
  double value = 0.0;
  double step = cfg.initial_step;

  for (int round = 0; round < cfg.max_alternations; ++round) {
    const double round_start = value;

    BaOutcome ba = blahut_arimoto(channel_of_states(p, states), weights, cfg.ba_max_iters,
                                  1e-12, &out.trace);
    weights = ba.weights;
    value = ba.value;
    prune_candidates(states, weights, cfg.prune_threshold);
    value = power_value(p, weights, states);

    for (int s = 0; s < cfg.state_steps_per_round; ++s) {
      if (!sphere_ascend_step(p, weights, states, value, step, cfg, &out.trace)) break;
    }

    if (round > 0 && value - round_start < cfg.value_tol) {
      // progress stalled: look for a pure state whose exponent beats the
      // current value (capacity optimality condition over the whole
      // state space); insert it, or conclude the alternation is done
      const BestResponse br = best_response_state(
          p, output_marginal_of(p, weights, states), states, rng, false);
      if (!(br.exponent > value + 1e-7 &&
            insert_candidate(p, states, weights, value, br, cap))) {
        break;
      }
    }
  }

  // polish: converge the weights hard, then close the certificate by
  // inserting best-response states until none improves
  for (int polish = 0; polish < 12; ++polish) {
    BaOutcome ba = blahut_arimoto(channel_of_states(p, states), weights,
                                  std::max(cfg.ba_max_iters, 20000), 1e-13, &out.trace);
    weights = ba.weights;
    value = ba.value;
    prune_candidates(states, weights, cfg.prune_threshold);
    value = power_value(p, weights, states);
    const BestResponse closing = best_response_state(
        p, output_marginal_of(p, weights, states), states, rng, true);
    out.certificate_gap = std::max(ba.max_exponent, closing.exponent) - value;
    if (out.certificate_gap < 5e-8) break;
    const bool inserted = closing.exponent > value + 1e-9 &&
                          insert_candidate(p, states, weights, value, closing, cap);
    for (int s = 0; s < cfg.state_steps_per_round; ++s) {
      if (!sphere_ascend_step(p, weights, states, value, step, cfg, &out.trace)) break;
    }
    if (!inserted) break;
  }

  out.weights = weights;
  out.value = value;
  out.states = std::move(states);
  out.converged = out.certificate_gap < 1e-6;
  return out;
}

Ensemble ensemble_from_rows(const ComplexMatrix& states, const RealVector& weights, int dim,
                            double floor) {
  std::vector<Ensemble::Element> elements;
  double kept = 0.0;
  for (int x = 0; x < static_cast<int>(states.rows()); ++x)
    if (weights[x] > floor) kept += weights[x];
  for (int x = 0; x < static_cast<int>(states.rows()); ++x) {
    if (weights[x] <= floor) continue;
    ComplexVector v = states.row(x).transpose();
    v /= v.norm();
    PureState psi{std::move(v)};
    elements.push_back({weights[x] / kept, DensityOperator::from_pure(psi.canonicalized())});
  }
  return Ensemble(dim, std::move(elements));
}

double povm_bound(const Povm& povm) {
  return is_uniform_two_design_povm(povm) ? infopower_upper_bound(povm.dim())
                                          : std::log2(static_cast<double>(povm.dim()));
}

} // namespace

OptimizationResult maximize_informational_power(const Povm& povm,
                                                const OptimizerConfig& config) {
  const PovmData data = povm_data(povm);
  const int candidates =
      config.candidate_states > 0 ? config.candidate_states : data.dim * data.dim + 4;
  require(candidates >= 2, "need at least two candidate states");
  require(config.restarts >= 1, "at least one restart is required");

  std::vector<PowerRunOutcome> results(static_cast<size_t>(config.restarts));
  run_jobs(config.restarts, resolve_worker_count(config.threads), [&](int r) {
    Rng rng(mix_seed(config.seed, 0x706f77ULL + static_cast<std::uint64_t>(r)));
    ComplexMatrix seeds = seed_states(data, candidates, rng);
    results[static_cast<size_t>(r)] =
        run_power_alternation(data, std::move(seeds), config, rng);
  });

  int best = 0;
  for (int r = 1; r < config.restarts; ++r)
    if (results[static_cast<size_t>(r)].value > results[static_cast<size_t>(best)].value + 1e-9)
      best = r;
  int agreeing = 0;
  for (const auto& r : results)
    if (r.value >= results[static_cast<size_t>(best)].value - 1e-6) ++agreeing;
  PowerRunOutcome& winner = results[static_cast<size_t>(best)];

  OptimizationResult result;
  result.best_ensemble = ensemble_from_rows(winner.states, winner.weights, data.dim, 1e-14);
  result.trace = std::move(winner.trace);
  result.converged = winner.converged;
  result.restarts_agreeing = agreeing;
  result.certificate_gap = winner.certificate_gap;
  result.seed = config.seed;
  result.winning_outcomes = static_cast<int>(winner.states.rows());
  result.winning_restart = best;

  const double recomputed = mutual_information(born_statistics(*result.best_ensemble, povm));
  finish_result(result, povm_bound(povm), recomputed);
  require(result.value_bits <= std::log2(static_cast<double>(povm.dim())) + 1e-9,
          "optimizer value exceeds log d; inputs are inconsistent");
  return result;
}

// ---------------------------------------------------------------------------
// duality route: outer ascent over rho, inner accessible-information runs

namespace {

struct DualityContext {
  const PovmData* povm;
  std::vector<ComplexMatrix> inner_effects;  // fixed inner POVM Q
};

DensityOperator rho_of(const ComplexMatrix& b) {
  ComplexMatrix rho = b.adjoint() * b;
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint().eval());
  return DensityOperator::unchecked(std::move(rho));
}

// I({rho^1/2 Pi_y rho^1/2}, Q) for fixed Q as a function of B.
double duality_value(const DualityContext& ctx, const ComplexMatrix& b) {
  const DensityOperator rho = rho_of(b);
  const ComplexMatrix root = hermitian_sqrt(rho);
  const int ny = static_cast<int>(ctx.povm->effects.size());
  const int nz = static_cast<int>(ctx.inner_effects.size());
  RealMatrix born(ny, nz);
  RealVector py(ny);
  for (int y = 0; y < ny; ++y) {
    const ComplexMatrix sandwich = root * ctx.povm->effects[static_cast<size_t>(y)] * root;
    py[y] = sandwich.trace().real();
    for (int z = 0; z < nz; ++z)
      born(y, z) = real_trace_product(sandwich, ctx.inner_effects[static_cast<size_t>(z)]);
  }
  const RealVector qz = born.colwise().sum().transpose();
  double value = 0.0;
  for (int y = 0; y < ny; ++y)
    for (int z = 0; z < nz; ++z) {
      const double p = born(y, z);
      if (p > 0.0 && py[y] > 0.0) value += p * log_2(p / (py[y] * qz[z]));
    }
  return value;
}

std::vector<ComplexMatrix> effects_of_isometry(const ComplexMatrix& a) {
  std::vector<ComplexMatrix> out;
  out.reserve(static_cast<size_t>(a.rows()));
  for (Eigen::Index y = 0; y < a.rows(); ++y) out.push_back(a.row(y).adjoint() * a.row(y));
  return out;
}

} // namespace

OptimizationResult infopower_via_duality(const Povm& povm, const OptimizerConfig& config) {
  const PovmData data = povm_data(povm);
  const int d = data.dim;
  require(config.outer_starts >= 1, "at least one outer start is required");

  OptimizerConfig inner = config;
  inner.restarts = std::max(4, config.restarts / 8);
  inner.max_iters = std::min(config.max_iters, 3000);

  OptimizerConfig warm_cfg = inner;

  double best_value = -1.0;
  ComplexMatrix best_b;
  ComplexMatrix best_a;
  std::vector<double> best_trace;
  bool best_converged = false;
  int best_outcomes = 0;
  int best_start = 0;
  int agreeing = 0;
  std::vector<double> start_values;

  for (int s = 0; s < config.outer_starts; ++s) {
    Rng rng(mix_seed(config.seed, 0xd0a1ULL + static_cast<std::uint64_t>(s)));
    ComplexMatrix b = s == 0 ? ComplexMatrix::Identity(d, d) : ginibre(d, d, rng);
    b /= b.norm();

    EnsembleData distorted = ensemble_data(distorted_ensemble(povm, rho_of(b)));
    MultistartOutcome current =
        multistart_accinfo(distorted, inner, 0xabcdULL + static_cast<std::uint64_t>(s));
    double f = current.value;
    ComplexMatrix a = current.point;
    std::vector<double> trace = std::move(current.trace);
    bool stable = false;

    int stall = 0;
    for (int outer = 0; outer < config.outer_max_iters; ++outer) {
      // density-operator step by finite-difference ascent, inner POVM fixed
      DualityContext ctx{&data, effects_of_isometry(a)};
      RealVector bx = pack_complex(b);
      double g0 = duality_value(ctx, b);
      for (int move = 0; move < 3; ++move) {
        RealVector grad(bx.size());
        const double h = 1e-6;
        for (Eigen::Index i = 0; i < bx.size(); ++i) {
          RealVector plus = bx, minus = bx;
          plus[i] += h;
          minus[i] -= h;
          grad[i] = (duality_value(ctx, unpack_complex(plus, d, d)) -
                     duality_value(ctx, unpack_complex(minus, d, d))) /
                    (2.0 * h);
        }
        const double slope = grad.squaredNorm();
        if (std::sqrt(slope) < 1e-9) break;
        double t = 1.0;
        bool accepted = false;
        while (t >= 1e-14) {
          RealVector trial = bx + t * grad;
          const double g_try = duality_value(ctx, unpack_complex(trial, d, d));
          if (g_try >= g0 + config.armijo_slope * t * slope) {
            bx = std::move(trial);
            g0 = g_try;
            accepted = true;
            break;
          }
          t *= 0.5;
        }
        if (!accepted) break;
      }
      b = unpack_complex(bx, d, d);
      b /= b.norm();

      // re-solve the inner problem at the moved rho, warm-started
      distorted = ensemble_data(distorted_ensemble(povm, rho_of(b)));
      AscentOutcome warm = ascend_isometry(distorted, a, warm_cfg);
      double new_f = warm.value;
      ComplexMatrix new_a = warm.point;
      std::vector<double> new_trace = std::move(warm.trace);
      if (stall >= 1) {
        // progress stalled; try to escape the warm start's basin
        MultistartOutcome fresh = multistart_accinfo(
            distorted, inner, 0x517eULL + static_cast<std::uint64_t>(s * 100 + outer));
        if (fresh.value > new_f) {
          new_f = fresh.value;
          new_a = std::move(fresh.point);
          new_trace = std::move(fresh.trace);
        }
      }
      if (new_f >= f) {
        a = std::move(new_a);
        trace = std::move(new_trace);
      }
      if (new_f - f < 1e-9) {
        ++stall;
      } else {
        stall = 0;
      }
      f = std::max(f, new_f);
      if (stall >= 2) {
        stable = true;
        break;
      }
    }

    // certify the inner supremum at the final density operator
    OptimizerConfig certify = inner;
    certify.restarts = std::max(inner.restarts, config.restarts / 2);
    MultistartOutcome final_run = multistart_accinfo(
        distorted, certify, 0xcafeULL + static_cast<std::uint64_t>(s));
    bool inner_converged = final_run.converged;
    if (final_run.value > f) {
      f = final_run.value;
      a = std::move(final_run.point);
      trace = std::move(final_run.trace);
    }
    start_values.push_back(f);

    if (f > best_value + 1e-9) {
      best_value = f;
      best_b = b;
      best_a = a;
      best_trace = std::move(trace);
      best_converged = stable && inner_converged;
      best_outcomes = static_cast<int>(a.rows());
      best_start = s;
    }
  }

  for (const double v : start_values)
    if (v >= best_value - 1e-6) ++agreeing;

  const DensityOperator rho = rho_of(best_b);
  const Povm inner_povm = povm_from_isometry(best_a, d);
  const Ensemble maximizer = distorted_ensemble(inner_povm, rho);

  OptimizationResult result;
  result.best_ensemble = maximizer;
  result.best_state = rho;
  result.trace = std::move(best_trace);
  result.converged = best_converged;
  result.restarts_agreeing = agreeing;
  result.seed = config.seed;
  result.winning_outcomes = best_outcomes;
  result.winning_restart = best_start;

  const double recomputed = mutual_information(born_statistics(maximizer, povm));
  finish_result(result, povm_bound(povm), recomputed);
  require(result.value_bits <= std::log2(static_cast<double>(d)) + 1e-9,
          "optimizer value exceeds log d; inputs are inconsistent");
  return result;
}

// ---------------------------------------------------------------------------
// objectives exposed for finite-difference verification

double gradient_check(const RealObjective& objective, const RealVector& point, double eps) {
  const RealVector analytic = objective.gradient(point);
  RealVector fd(point.size());
  for (Eigen::Index i = 0; i < point.size(); ++i) {
    RealVector plus = point, minus = point;
    plus[i] += eps;
    minus[i] -= eps;
    fd[i] = (objective.value(plus) - objective.value(minus)) / (2.0 * eps);
  }
  const double scale = std::max(fd.cwiseAbs().maxCoeff(), 1e-12);
  return (analytic - fd).cwiseAbs().maxCoeff() / scale;
}

AccessibleInfoObjective::AccessibleInfoObjective(const Ensemble& ensemble, int outcomes)
    : dim_(ensemble.dim()), outcomes_(outcomes) {
  require(outcomes_ >= 1, "objective needs at least one outcome");
  weights_.resize(ensemble.size());
  states_.reserve(static_cast<size_t>(ensemble.size()));
  for (int x = 0; x < ensemble.size(); ++x) {
    weights_[x] = ensemble[x].weight;
    states_.push_back(ensemble[x].state.matrix());
  }
}

Eigen::Index AccessibleInfoObjective::parameter_count() const {
  return 2 * static_cast<Eigen::Index>(outcomes_) * dim_;
}

double AccessibleInfoObjective::value_at(const ComplexMatrix& a) const {
  EnsembleData data{states_, weights_, dim_};
  return accinfo_eval(data, a, nullptr);
}

ComplexMatrix AccessibleInfoObjective::gradient_at(const ComplexMatrix& a) const {
  EnsembleData data{states_, weights_, dim_};
  ComplexMatrix g;
  accinfo_eval(data, a, &g);
  return g;
}

double AccessibleInfoObjective::value(const RealVector& params) const {
  return value_at(unpack(params));
}

RealVector AccessibleInfoObjective::gradient(const RealVector& params) const {
  return pack_complex(gradient_at(unpack(params)));
}

RealVector AccessibleInfoObjective::pack(const ComplexMatrix& a) const {
  return pack_complex(a);
}

ComplexMatrix AccessibleInfoObjective::unpack(const RealVector& params) const {
  return unpack_complex(params, outcomes_, dim_);
}

PureStateEnsembleObjective::PureStateEnsembleObjective(const Povm& povm, RealVector weights)
    : weights_(std::move(weights)), dim_(povm.dim()) {
  require(weights_.size() >= 1, "objective needs at least one state");
  effects_.reserve(static_cast<size_t>(povm.size()));
  for (const auto& e : povm.elements()) effects_.push_back(e.matrix());
}

Eigen::Index PureStateEnsembleObjective::parameter_count() const {
  return 2 * weights_.size() * dim_;
}

double PureStateEnsembleObjective::value_at(const ComplexMatrix& states) const {
  const int k = static_cast<int>(states.rows());
  const int m = static_cast<int>(effects_.size());
  RealMatrix born(k, m);
  const ComplexMatrix conj_states = states.conjugate();
  for (int y = 0; y < m; ++y) {
    born.col(y) = weights_.cwiseProduct((conj_states * effects_[static_cast<size_t>(y)])
                                            .cwiseProduct(states)
                                            .rowwise()
                                            .sum()
                                            .real());
  }
  const RealVector q = born.colwise().sum().transpose();
  double value = 0.0;
  for (int x = 0; x < k; ++x)
    for (int y = 0; y < m; ++y) {
      const double p = born(x, y);
      if (p > 0.0) value += p * log_2(p / (weights_[x] * q[y]));
    }
  return value;
}

ComplexMatrix PureStateEnsembleObjective::gradient_at(const ComplexMatrix& states) const {
  const int k = static_cast<int>(states.rows());
  const int m = static_cast<int>(effects_.size());
  RealMatrix born(k, m);
  const ComplexMatrix conj_states = states.conjugate();
  for (int y = 0; y < m; ++y) {
    born.col(y) = weights_.cwiseProduct((conj_states * effects_[static_cast<size_t>(y)])
                                            .cwiseProduct(states)
                                            .rowwise()
                                            .sum()
                                            .real());
  }
  const RealVector q = born.colwise().sum().transpose();
  ComplexMatrix grad = ComplexMatrix::Zero(k, dim_);
  for (int y = 0; y < m; ++y) {
    RealVector coeff(k);
    for (int x = 0; x < k; ++x) {
      const double p = born(x, y);
      coeff[x] = p > 0.0 ? weights_[x] * log_2(p / (weights_[x] * q[y])) : 0.0;
    }
    grad.noalias() +=
        coeff.asDiagonal() * (states * effects_[static_cast<size_t>(y)].transpose());
  }
  return 2.0 * grad;
}

double PureStateEnsembleObjective::value(const RealVector& params) const {
  return value_at(unpack(params));
}

RealVector PureStateEnsembleObjective::gradient(const RealVector& params) const {
  return pack_complex(gradient_at(unpack(params)));
}

RealVector PureStateEnsembleObjective::pack(const ComplexMatrix& states) const {
  return pack_complex(states);
}

ComplexMatrix PureStateEnsembleObjective::unpack(const RealVector& params) const {
  return unpack_complex(params, weights_.size(), dim_);
}

WeightObjective::WeightObjective(RealMatrix channel) : channel_(std::move(channel)) {
  row_sums_ = channel_.rowwise().sum();
}

Eigen::Index WeightObjective::parameter_count() const { return channel_.rows(); }

double WeightObjective::value(const RealVector& weights) const {
  const RealVector q = channel_.transpose() * weights;
  double v = 0.0;
  for (Eigen::Index x = 0; x < channel_.rows(); ++x) {
    for (Eigen::Index y = 0; y < channel_.cols(); ++y) {
      const double w = channel_(x, y);
      if (weights[x] > 0.0 && w > 0.0 && q[y] > 0.0)
        v += weights[x] * w * log_2(w / q[y]);
    }
  }
  return v;
}

RealVector WeightObjective::gradient(const RealVector& weights) const {
  const RealVector q = channel_.transpose() * weights;
  RealVector grad(channel_.rows());
  for (Eigen::Index x = 0; x < channel_.rows(); ++x) {
    double dx = 0.0;
    for (Eigen::Index y = 0; y < channel_.cols(); ++y) {
      const double w = channel_(x, y);
      if (w > 0.0 && q[y] > 0.0) dx += w * log_2(w / q[y]);
    }
    grad[x] = dx - row_sums_[x] / std::numbers::ln2;
  }
  return grad;
}

} // namespace qdesign
