#include "moo/core.hpp"

#include <cmath>

#include "moo/minnorm.hpp"

namespace moo {

bool all_finite(const Vec& v) {
  for (double x : v) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

ParamVector::ParamVector(Vec values) : values_(std::move(values)) {
  if (values_.empty()) throw ContractViolation("ParamVector: dimension must be >= 1");
  if (!all_finite(values_)) throw ContractViolation("ParamVector: non-finite entry");
}

GradientSet::GradientSet(std::vector<Vec> rows) : rows_(std::move(rows)) {
  if (rows_.empty()) throw ContractViolation("GradientSet: need at least one objective");
  const std::size_t d = rows_.front().size();
  if (d == 0) throw ContractViolation("GradientSet: zero-dimensional gradient");
  for (std::size_t t = 0; t < rows_.size(); ++t) {
    if (rows_[t].size() != d)
      throw ContractViolation("GradientSet: row " + std::to_string(t) + " has mismatched length");
    if (!all_finite(rows_[t]))
      throw ContractViolation("GradientSet: non-finite entry in objective " + std::to_string(t));
  }
}

SimplexWeights::SimplexWeights(Vec alpha) : alpha_(std::move(alpha)) {
  if (alpha_.empty()) throw ContractViolation("SimplexWeights: empty");
  if (!all_finite(alpha_)) throw ContractViolation("SimplexWeights: non-finite entry");
  double sum = 0.0;
  for (double& a : alpha_) {
    if (a < 0.0) {
      if (a < -1e-9) throw ContractViolation("SimplexWeights: negative component");
      a = 0.0;  // rounding dust from convex updates
    }
    sum += a;
  }
  if (sum <= 0.0) throw ContractViolation("SimplexWeights: components sum to zero");
  for (double& a : alpha_) a /= sum;
}

SimplexWeights SimplexWeights::uniform(std::size_t t_count) {
  if (t_count == 0) throw ContractViolation("SimplexWeights: empty");
  return SimplexWeights(Vec(t_count, 1.0 / static_cast<double>(t_count)));
}

ObjectiveValues::ObjectiveValues(Vec losses) : losses_(std::move(losses)) {
  if (losses_.empty()) throw ContractViolation("ObjectiveValues: empty");
  if (!all_finite(losses_)) throw ContractViolation("ObjectiveValues: non-finite loss");
  for (double& l : losses_) {
    if (l < 0.0) {
      if (l < -1e-9) throw ContractViolation("ObjectiveValues: negative loss");
      l = 0.0;
    }
  }
}

MetricVector::MetricVector(Vec metrics) : metrics_(std::move(metrics)) {
  if (metrics_.empty()) throw ContractViolation("MetricVector: empty");
  if (!all_finite(metrics_)) throw ContractViolation("MetricVector: non-finite metric");
}

MetricBounds::MetricBounds(Vec lo, Vec hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_.empty() || lo_.size() != hi_.size())
    throw ContractViolation("MetricBounds: lo/hi size mismatch");
  for (std::size_t t = 0; t < lo_.size(); ++t) {
    if (!std::isfinite(lo_[t]) || !std::isfinite(hi_[t]) || !(lo_[t] < hi_[t]))
      throw ContractViolation("MetricBounds: need lo < hi for metric " + std::to_string(t));
  }
}

PreferenceWeights::PreferenceWeights(Vec w) : w_(std::move(w)) {
  if (w_.empty()) throw ContractViolation("PreferenceWeights: empty");
  for (double x : w_) {
    if (!std::isfinite(x) || x <= 0.0)
      throw ContractViolation("PreferenceWeights: weights must be positive and finite");
  }
}

PreferenceWeights PreferenceWeights::uniform(std::size_t t_count) {
  if (t_count == 0) throw ContractViolation("PreferenceWeights: empty");
  return PreferenceWeights(Vec(t_count, 1.0 / static_cast<double>(t_count)));
}

bool dominates(const ObjectiveValues& a, const ObjectiveValues& b) {
  if (a.size() != b.size()) throw ContractViolation("dominates: length mismatch");
  bool strictly_better_somewhere = false;
  for (std::size_t t = 0; t < a.size(); ++t) {
    if (a[t] > b[t]) return false;
    if (a[t] < b[t]) strictly_better_somewhere = true;
  }
  return strictly_better_somewhere;
}

bool is_pareto_stationary(const GradientSet& g, double tol) {
  if (!(tol > 0.0)) throw ContractViolation("is_pareto_stationary: tol must be positive");
  const MinNormResult r = frank_wolfe_solve(g);
  return std::sqrt(r.sq_norm) <= tol;
}

}  // namespace moo
