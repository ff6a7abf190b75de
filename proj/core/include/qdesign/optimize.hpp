#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "qdesign/quantum_core.hpp"
#include "qdesign/random.hpp"

namespace qdesign {

/// Rank-one m-outcome POVM encoded as an m x d matrix A with A^dag A = 1;
/// row y is the unnormalized effect vector, Pi_y = row_y^dag row_y. The
/// completeness constraint is satisfied exactly at every point of the
/// manifold, so search needs no projection back onto valid POVMs.
struct IsometryPoint {
  explicit IsometryPoint(ComplexMatrix coefficients);
  static IsometryPoint random(int outcomes, int dim, Rng& rng);

  int outcomes() const { return static_cast<int>(coefficients.rows()); }
  int dim() const { return static_cast<int>(coefficients.cols()); }
  Povm to_povm() const;

  ComplexMatrix coefficients;
};

struct OptimizerConfig {
  int restarts = 32;
  int min_outcomes = 0;  // 0: defaults to d
  int max_outcomes = 0;  // 0: defaults to d^2 (Davies cardinality)
  bool allow_outcomes_beyond_davies = false;
  int max_iters = 5000;
  double initial_step = 1.0;
  double armijo_slope = 1e-4;
  double min_step = 1e-20;
  double grad_norm_tol = 1e-8;
  double value_tol = 1e-10;
  std::uint64_t seed = 20150414;
  int threads = 0;  // 0: QDESIGN_THREADS env var, else hardware concurrency

  // informational-power alternation
  int candidate_states = 0;  // 0: d^2 + 4
  double prune_threshold = 1e-10;
  int ba_max_iters = 600;
  int state_steps_per_round = 20;
  int max_alternations = 80;

  // duality outer loop over density operators
  int outer_starts = 3;
  int outer_max_iters = 40;
};

struct OptimizationResult {
  double value_bits = 0.0;
  std::optional<Povm> best_povm;
  std::optional<Ensemble> best_ensemble;
  std::optional<DensityOperator> best_state;  // duality: the maximizing rho
  double bound_bits = 0.0;
  double bound_gap = 0.0;  // value - bound; expected <= 0
  std::vector<double> trace;
  bool converged = false;
  int restarts_agreeing = 0;
  double certificate_gap = std::numeric_limits<double>::quiet_NaN();
  std::uint64_t seed = 0;
  int winning_outcomes = 0;
  int winning_restart = 0;
};

/// A(E): multistart Riemannian gradient ascent of I(E, P(A)) over isometry
/// points, for each outcome count in the configured range. The gap is
/// reported against log(2d/(d+1)) when E is a verified 2-design ensemble of
/// pure states, against log d otherwise.
OptimizationResult maximize_accessible_info(const Ensemble& ensemble,
                                            const OptimizerConfig& config = {});

/// W(P): alternating maximization over a pool of candidate pure states.
/// Weights follow the classical capacity fixed point p <- p 2^{D_x} / Z;
/// states follow projected gradient ascent on the unit sphere. The
/// capacity optimality condition max_x D_x = I certifies the result
/// (certificate_gap).
OptimizationResult maximize_informational_power(const Povm& povm,
                                                const OptimizerConfig& config = {});

/// W(P) through the duality with accessible information: outer ascent over
/// rho = B^dag B / Tr[B^dag B], inner accessible-information runs on the
/// distorted ensemble {rho^1/2 Pi_y rho^1/2}. Cross-validates
/// maximize_informational_power.
OptimizationResult infopower_via_duality(const Povm& povm,
                                         const OptimizerConfig& config = {});

/// Differentiable scalar function of a real parameter vector. Complex
/// matrices are packed as [re, im] pairs in row-major entry order.
class RealObjective {
 public:
  virtual ~RealObjective() = default;
  virtual Eigen::Index parameter_count() const = 0;
  virtual double value(const RealVector& params) const = 0;
  virtual RealVector gradient(const RealVector& params) const = 0;
};

/// Compares the analytic gradient against central finite differences.
/// Returns max_i |grad_i - fd_i| scaled by the largest finite-difference
/// component (or 1e-12 when the gradient vanishes).
double gradient_check(const RealObjective& objective, const RealVector& point,
                      double eps = 1e-5);

/// I(E, P(A)) as a function of isometry coordinates; the ensemble weights
/// stay fixed as the input marginal.
class AccessibleInfoObjective : public RealObjective {
 public:
  AccessibleInfoObjective(const Ensemble& ensemble, int outcomes);

  Eigen::Index parameter_count() const override;
  double value(const RealVector& params) const override;
  RealVector gradient(const RealVector& params) const override;

  double value_at(const ComplexMatrix& a) const;
  ComplexMatrix gradient_at(const ComplexMatrix& a) const;

  RealVector pack(const ComplexMatrix& a) const;
  ComplexMatrix unpack(const RealVector& params) const;

 private:
  std::vector<ComplexMatrix> states_;
  RealVector weights_;
  int dim_;
  int outcomes_;
};

/// I as a function of the candidate pure states of an ensemble with fixed
/// weights, measured by a fixed POVM. Rows of the packed matrix are states.
class PureStateEnsembleObjective : public RealObjective {
 public:
  PureStateEnsembleObjective(const Povm& povm, RealVector weights);

  Eigen::Index parameter_count() const override;
  double value(const RealVector& params) const override;
  RealVector gradient(const RealVector& params) const override;

  double value_at(const ComplexMatrix& states) const;
  ComplexMatrix gradient_at(const ComplexMatrix& states) const;

  RealVector pack(const ComplexMatrix& states) const;
  ComplexMatrix unpack(const RealVector& params) const;

 private:
  std::vector<ComplexMatrix> effects_;
  RealVector weights_;
  int dim_;
};

/// I as a function of the input weights of a fixed discrete channel.
class WeightObjective : public RealObjective {
 public:
  explicit WeightObjective(RealMatrix channel);

  Eigen::Index parameter_count() const override;
  double value(const RealVector& weights) const override;
  RealVector gradient(const RealVector& weights) const override;

 private:
  RealMatrix channel_;
  RealVector row_sums_;
};

/// Worker count for restart fan-out: explicit request, else QDESIGN_THREADS,
/// else hardware concurrency.
int resolve_worker_count(int requested);

} // namespace qdesign
