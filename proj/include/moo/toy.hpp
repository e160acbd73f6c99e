#pragma once

#include "moo/mgda.hpp"

namespace moo::toy {

/// Two convex quadratic objectives ||theta - a||^2 and ||theta - b||^2.
/// The set of trade-off optima is exactly the segment [a, b]. Metrics map
/// losses into [0, 1] via clamp(1 - L / metric_scale), so the achievable
/// metric frontier spans the full unit range and favors larger values.
class QuadraticToy final : public Problem {
 public:
  // metric_scale <= 0 means "use ||a - b||^2"
  QuadraticToy(Vec a, Vec b, double metric_scale = 0.0, double init_radius = 0.9);

  std::size_t objective_count() const override { return 2; }
  std::size_t param_dim() const override { return a_.size(); }
  ParamVector initial_params(std::uint64_t seed) const override;
  ObjectiveValues losses(const ParamVector& theta) const override;
  GradientSet gradients(const ParamVector& theta) const override;
  MetricVector metrics(const ParamVector& theta) const override;

  const Vec& minimizer_a() const { return a_; }
  const Vec& minimizer_b() const { return b_; }
  double metric_scale() const { return scale_; }

 private:
  Vec a_;
  Vec b_;
  double scale_;
  double init_radius_;
};

/// The same two bowls pushed through a saturating transform,
/// F_t = 1 - exp(-||theta - x_t||^2). The metric frontier
/// (exp(-Q_1), exp(-Q_2)) has a concave middle segment, which fixed linear
/// scalarizations cannot reach: they only recover the convex shell of the
/// achievable metric set. Used to separate the adaptive explorer from the
/// static-weight baselines.
class ConcaveFrontierToy final : public Problem {
 public:
  ConcaveFrontierToy(Vec a, Vec b, double init_radius = 1.0);

  std::size_t objective_count() const override { return 2; }
  std::size_t param_dim() const override { return a_.size(); }
  ParamVector initial_params(std::uint64_t seed) const override;
  ObjectiveValues losses(const ParamVector& theta) const override;
  GradientSet gradients(const ParamVector& theta) const override;
  MetricVector metrics(const ParamVector& theta) const override;

 private:
  Vec a_;
  Vec b_;
  double init_radius_;
};

}  // namespace moo::toy
