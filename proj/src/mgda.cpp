#include "moo/mgda.hpp"

#include <cmath>

namespace moo {

void TrainConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ContractViolation("TrainConfig: learning_rate must be > 0");
  if (max_steps < 1) throw ContractViolation("TrainConfig: max_steps must be >= 1");
  if (patience < 1) throw ContractViolation("TrainConfig: patience must be >= 1");
  if (!(stationarity_tol > 0.0))
    throw ContractViolation("TrainConfig: stationarity_tol must be > 0");
  if (fw_max_iters < 1) throw ContractViolation("TrainConfig: fw_max_iters must be >= 1");
  if (!(fw_gamma_tol > 0.0)) throw ContractViolation("TrainConfig: fw_gamma_tol must be > 0");
}

SimplexWeights reweight_alpha(const SimplexWeights& alpha, const PreferenceWeights& w) {
  if (alpha.size() != w.size()) throw ContractViolation("reweight_alpha: size mismatch");
  bool w_uniform = true;
  for (std::size_t t = 1; t < w.size(); ++t) {
    if (w[t] != w[0]) {
      w_uniform = false;
      break;
    }
  }
  if (w_uniform) return alpha;  // exact identity, keeps traces bit-stable

  Vec products(alpha.size());
  double sum = 0.0;
  for (std::size_t t = 0; t < alpha.size(); ++t) {
    products[t] = alpha[t] * w[t];
    sum += products[t];
  }
  if (!(sum > 0.0))
    throw ContractViolation("reweight_alpha: all products are zero, cannot normalize");
  return SimplexWeights(std::move(products));
}

ParamVector mgda_step(const ParamVector& theta, const GradientSet& g,
                      const SimplexWeights& alpha, double lr) {
  if (g.objective_count() != alpha.size())
    throw ContractViolation("mgda_step: alpha size does not match objective count");
  if (g.dim() != theta.dim()) throw ContractViolation("mgda_step: gradient dimension mismatch");

  Vec next = theta.values();
  for (std::size_t t = 0; t < g.objective_count(); ++t) {
    const double a = alpha[t];
    if (a == 0.0) continue;
    const Vec& row = g.row(t);
    for (std::size_t i = 0; i < next.size(); ++i) next[i] -= lr * a * row[i];
  }
  if (!all_finite(next)) throw DivergenceError("mgda_step: non-finite parameter update", -1);
  return ParamVector(std::move(next));
}

OptimizeResult optimize(const Problem& problem, const PreferenceWeights& w,
                        const TrainConfig& cfg, const std::optional<ParamVector>& start) {
  cfg.validate();
  if (w.size() != problem.objective_count())
    throw ContractViolation("optimize: preference weight count does not match objectives");

  ParamVector theta = start ? *start : problem.initial_params(cfg.init_seed);
  if (theta.dim() != problem.param_dim())
    throw ContractViolation("optimize: start has wrong parameter dimension");

  TrainTrace trace;
  Vec best = problem.metrics(theta).values();
  int since_improve = 0;
  StopReason reason = StopReason::step_limit;

  // non-finite gradients, parameters or losses all surface as a divergence
  // error carrying the step index and the trace collected so far
  const auto diverged = [&trace, &theta](const char* what, int step) {
    trace.final_params = theta.values();
    return DivergenceError("optimize: " + std::string(what) + " at step " + std::to_string(step),
                           step, std::move(trace));
  };

  for (int step = 0; step < cfg.max_steps; ++step) {
    GradientSet g = [&] {
      try {
        return problem.gradients(theta);
      } catch (const ContractViolation& e) {
        throw diverged(e.what(), step);
      } catch (const DivergenceError& e) {
        throw diverged(e.what(), step);
      }
    }();
    MinNormResult mn = frank_wolfe_solve(g, cfg.fw_max_iters, cfg.fw_gamma_tol);
    if (mn.sq_norm <= cfg.stationarity_tol) {
      reason = StopReason::stationary;
      break;
    }
    SimplexWeights used = reweight_alpha(mn.alpha, w);
    try {
      theta = mgda_step(theta, g, used, cfg.learning_rate);
    } catch (const DivergenceError& e) {
      throw diverged(e.what(), step);
    }

    ObjectiveValues l = [&] {
      try {
        return problem.losses(theta);
      } catch (const ContractViolation& e) {
        throw diverged(e.what(), step);
      }
    }();
    MetricVector m = [&] {
      try {
        return problem.metrics(theta);
      } catch (const ContractViolation& e) {
        throw diverged(e.what(), step);
      }
    }();
    bool improved = false;
    for (std::size_t t = 0; t < m.size(); ++t) {
      if (m[t] > best[t]) {
        best[t] = m[t];
        improved = true;
      }
    }
    trace.steps.push_back(StepRecord{std::move(l), m, std::move(used), mn.sq_norm});

    since_improve = improved ? 0 : since_improve + 1;
    if (since_improve >= cfg.patience) {
      reason = StopReason::no_improvement;
      break;
    }
  }

  trace.final_params = theta.values();
  trace.stop_reason = reason;
  return OptimizeResult{problem.metrics(theta), std::move(trace)};
}

}  // namespace moo
