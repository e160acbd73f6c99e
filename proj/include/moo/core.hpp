#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace moo {

using Vec = std::vector<double>;

/// Thrown when a caller violates a documented precondition.
class ContractViolation : public std::invalid_argument {
 public:
  explicit ContractViolation(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when a metric has no defined value for the given data
/// (for example, service level over a batch with zero total demand).
class UndefinedMetricError : public std::runtime_error {
 public:
  explicit UndefinedMetricError(const std::string& what) : std::runtime_error(what) {}
};

bool all_finite(const Vec& v);

/// Flat model parameter vector. All entries finite, length >= 1.
class ParamVector {
 public:
  explicit ParamVector(Vec values);
  const Vec& values() const { return values_; }
  std::size_t dim() const { return values_.size(); }

 private:
  Vec values_;
};

/// One gradient row per objective; all rows share the parameter dimension.
/// Non-finite entries are rejected at construction so divergence surfaces
/// at the step that produced it, not later.
class GradientSet {
 public:
  explicit GradientSet(std::vector<Vec> rows);
  std::size_t objective_count() const { return rows_.size(); }
  std::size_t dim() const { return rows_.front().size(); }
  const Vec& row(std::size_t t) const { return rows_.at(t); }
  const std::vector<Vec>& rows() const { return rows_; }

 private:
  std::vector<Vec> rows_;
};

/// Nonnegative per-objective weights summing to one. The constructor
/// renormalizes; repeated reweighting otherwise accumulates drift.
class SimplexWeights {
 public:
  explicit SimplexWeights(Vec alpha);
  static SimplexWeights uniform(std::size_t t_count);
  const Vec& alpha() const { return alpha_; }
  std::size_t size() const { return alpha_.size(); }
  double operator[](std::size_t i) const { return alpha_.at(i); }

 private:
  Vec alpha_;
};

/// Per-objective empirical losses; finite and nonnegative.
class ObjectiveValues {
 public:
  explicit ObjectiveValues(Vec losses);
  const Vec& values() const { return losses_; }
  std::size_t size() const { return losses_.size(); }
  double operator[](std::size_t i) const { return losses_.at(i); }

 private:
  Vec losses_;
};

/// Per-objective evaluation metrics. Larger is better for every metric in
/// this toolkit; values are finite but not otherwise range-restricted here.
class MetricVector {
 public:
  explicit MetricVector(Vec metrics);
  const Vec& values() const { return metrics_; }
  std::size_t size() const { return metrics_.size(); }
  double operator[](std::size_t i) const { return metrics_.at(i); }

 private:
  Vec metrics_;
};

/// Decision-maker knowledge range per metric: lo[t] < hi[t].
class MetricBounds {
 public:
  MetricBounds(Vec lo, Vec hi);
  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }
  std::size_t size() const { return lo_.size(); }

 private:
  Vec lo_;
  Vec hi_;
};

/// Strictly positive subjective weights used to bias the descent direction.
class PreferenceWeights {
 public:
  explicit PreferenceWeights(Vec w);
  static PreferenceWeights uniform(std::size_t t_count);
  const Vec& values() const { return w_; }
  std::size_t size() const { return w_.size(); }
  double operator[](std::size_t i) const { return w_.at(i); }

 private:
  Vec w_;
};

/// Componentwise domination on losses: a <= b everywhere and a != b.
/// Equal vectors never dominate.
bool dominates(const ObjectiveValues& a, const ObjectiveValues& b);

/// True iff the min-norm point of the gradient hull has Euclidean norm <= tol,
/// i.e. some convex combination of the objective gradients vanishes.
bool is_pareto_stationary(const GradientSet& g, double tol);

}  // namespace moo
