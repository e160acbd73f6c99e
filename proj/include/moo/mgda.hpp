#pragma once

#include <cstdint>
#include <optional>

#include "moo/core.hpp"
#include "moo/minnorm.hpp"

namespace moo {

/// A differentiable multi-objective training context. Losses and gradients
/// are evaluated on the training split, metrics on the evaluation split.
/// Implementations are read-only during optimization and safe to share
/// across threads; each optimize call owns its parameter state exclusively.
class Problem {
 public:
  virtual ~Problem() = default;
  virtual std::size_t objective_count() const = 0;
  virtual std::size_t metric_count() const { return objective_count(); }
  virtual std::size_t param_dim() const = 0;
  virtual ParamVector initial_params(std::uint64_t seed) const = 0;
  virtual ObjectiveValues losses(const ParamVector& theta) const = 0;
  virtual GradientSet gradients(const ParamVector& theta) const = 0;
  virtual MetricVector metrics(const ParamVector& theta) const = 0;
};

struct TrainConfig {
  double learning_rate = 0.1;
  int max_steps = 1000;
  // steps without any metric reaching a new best before stopping
  int patience = 20;
  // squared norm of the min-norm direction at or below which the current
  // point counts as stationary
  double stationarity_tol = 1e-12;
  std::uint64_t init_seed = 0;
  // when set, exploration loops chain each run from the previous solution
  // instead of re-initializing from init_seed
  bool warm_start = false;
  int fw_max_iters = 100;
  double fw_gamma_tol = 1e-5;

  void validate() const;
};

enum class StopReason { stationary, no_improvement, step_limit };

struct StepRecord {
  ObjectiveValues losses;
  MetricVector metrics;
  SimplexWeights alpha;  // combination actually applied (after preference bias)
  double sq_norm;        // squared norm of the unbiased min-norm direction
};

struct TrainTrace {
  std::vector<StepRecord> steps;
  Vec final_params;
  StopReason stop_reason = StopReason::step_limit;
};

/// Raised when a parameter update or gradient turns non-finite. Carries the
/// step index and whatever trace had been collected.
class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, long step_index)
      : std::runtime_error(what), step_index_(step_index) {}
  DivergenceError(const std::string& what, long step_index, TrainTrace trace)
      : std::runtime_error(what), step_index_(step_index), trace_(std::move(trace)) {}
  long step_index() const { return step_index_; }
  const TrainTrace& partial_trace() const { return trace_; }

 private:
  long step_index_;
  TrainTrace trace_;
};

/// Bias simplex weights by subjective preferences:
///   alpha'[t] = alpha[t] w[t] / sum_s alpha[s] w[s].
/// Uniform preferences are an exact no-op; a zero alpha component stays zero.
SimplexWeights reweight_alpha(const SimplexWeights& alpha, const PreferenceWeights& w);

/// One descent update: theta' = theta - lr * sum_t alpha[t] g[t].
ParamVector mgda_step(const ParamVector& theta, const GradientSet& g,
                      const SimplexWeights& alpha, double lr);

struct OptimizeResult {
  MetricVector metrics;  // evaluated at the final parameters
  TrainTrace trace;
};

/// Multi-gradient descent until the metrics stop improving for `patience`
/// consecutive steps, the point is stationary, or max_steps is reached.
/// Starts from `start` when given, otherwise from
/// problem.initial_params(cfg.init_seed).
OptimizeResult optimize(const Problem& problem, const PreferenceWeights& w,
                        const TrainConfig& cfg,
                        const std::optional<ParamVector>& start = std::nullopt);

enum class OptimizerKind { mgda, static_scaling };

/// Dispatch between the adaptive multi-gradient path and the fixed linear
/// scalarization baseline (weights normalized into convex coefficients).
OptimizeResult run_optimize(const Problem& problem, const PreferenceWeights& w,
                            const TrainConfig& cfg, OptimizerKind kind,
                            const std::optional<ParamVector>& start = std::nullopt);

}  // namespace moo
