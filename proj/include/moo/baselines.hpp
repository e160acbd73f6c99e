#pragma once

#include "moo/posterior.hpp"

namespace moo::baselines {

/// Collapses a multi-objective problem into one objective sum_t c[t] L[t]
/// with fixed convex coefficients; metrics pass through unchanged. Plain
/// gradient descent on this wrapper is the static-scaling baseline.
class ScalarizedProblem final : public Problem {
 public:
  ScalarizedProblem(const Problem& base, Vec coefficients);

  std::size_t objective_count() const override { return 1; }
  std::size_t metric_count() const override { return base_->metric_count(); }
  std::size_t param_dim() const override { return base_->param_dim(); }
  ParamVector initial_params(std::uint64_t seed) const override {
    return base_->initial_params(seed);
  }
  ObjectiveValues losses(const ParamVector& theta) const override;
  GradientSet gradients(const ParamVector& theta) const override;
  MetricVector metrics(const ParamVector& theta) const override { return base_->metrics(theta); }

  const Vec& coefficients() const { return coeffs_; }

 private:
  const Problem* base_;
  Vec coeffs_;
};

/// Gradient descent on the fixed linear combination, sharing optimize()'s
/// stopping rules, seeds and trace format.
OptimizeResult static_scaling_optimize(const Problem& problem, const Vec& coefficients,
                                       const TrainConfig& cfg,
                                       const std::optional<ParamVector>& start = std::nullopt);

/// All points of the uniform simplex grid with `resolution` levels per axis
/// (step 1 / (resolution - 1)), in lexicographic order.
std::vector<Vec> simplex_grid(std::size_t t_count, std::size_t resolution);

/// One static-scaling run per simplex grid point; archives (c, M) in grid
/// order. Runs are independent, so jobs > 1 executes them on worker threads
/// without changing the archive. With restarts > 1 each grid point is solved
/// from that many seeds (cfg.init_seed + r) and the run with the lowest final
/// scalarized loss wins, which keeps multi-basin landscapes from archiving a
/// worse local optimum.
posterior::FrontierArchive grid_search(const Problem& problem, std::size_t resolution,
                                       const TrainConfig& cfg, std::size_t jobs = 1,
                                       std::size_t restarts = 1);

/// Per-metric explored range, max - min over the archive with values clipped
/// into the bounds first.
Vec coverage_span(const posterior::FrontierArchive& archive, const MetricBounds& bounds);

/// Dominated-area indicator for two maximize-direction metrics relative to a
/// reference point; an evaluation statistic for comparing archives.
double hypervolume_2d(const std::vector<Vec>& metric_points, const Vec& ref);

}  // namespace moo::baselines
