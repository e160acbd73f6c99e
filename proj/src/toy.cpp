#include "moo/toy.hpp"

#include <algorithm>
#include <cmath>

#include "moo/rng.hpp"

namespace moo::toy {

namespace {

double sq_dist(const Vec& x, const Vec& c) {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - c[i];
    s += d * d;
  }
  return s;
}

Vec scaled_diff(const Vec& x, const Vec& c, double factor) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = factor * (x[i] - c[i]);
  return out;
}

Vec random_point_near(const Vec& a, const Vec& b, double radius, std::uint64_t seed) {
  Rng rng(seed * 0x9e3779b97f4a7c15ULL + 1);
  Vec p(a.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double mid = 0.5 * (a[i] + b[i]);
    p[i] = rng.uniform(mid - radius, mid + radius);
  }
  return p;
}

}  // namespace

QuadraticToy::QuadraticToy(Vec a, Vec b, double metric_scale, double init_radius)
    : a_(std::move(a)), b_(std::move(b)), scale_(metric_scale), init_radius_(init_radius) {
  if (a_.empty() || a_.size() != b_.size())
    throw ContractViolation("QuadraticToy: minimizers must share a nonzero dimension");
  if (scale_ <= 0.0) scale_ = sq_dist(a_, b_);
  if (scale_ <= 0.0) throw ContractViolation("QuadraticToy: a and b must differ");
}

ParamVector QuadraticToy::initial_params(std::uint64_t seed) const {
  return ParamVector(random_point_near(a_, b_, init_radius_, seed));
}

ObjectiveValues QuadraticToy::losses(const ParamVector& theta) const {
  return ObjectiveValues({sq_dist(theta.values(), a_), sq_dist(theta.values(), b_)});
}

GradientSet QuadraticToy::gradients(const ParamVector& theta) const {
  return GradientSet({scaled_diff(theta.values(), a_, 2.0), scaled_diff(theta.values(), b_, 2.0)});
}

MetricVector QuadraticToy::metrics(const ParamVector& theta) const {
  const ObjectiveValues l = losses(theta);
  Vec m(2);
  for (std::size_t t = 0; t < 2; ++t) m[t] = std::clamp(1.0 - l[t] / scale_, 0.0, 1.0);
  return MetricVector(std::move(m));
}

ConcaveFrontierToy::ConcaveFrontierToy(Vec a, Vec b, double init_radius)
    : a_(std::move(a)), b_(std::move(b)), init_radius_(init_radius) {
  if (a_.empty() || a_.size() != b_.size())
    throw ContractViolation("ConcaveFrontierToy: minimizers must share a nonzero dimension");
  if (sq_dist(a_, b_) <= 0.0) throw ContractViolation("ConcaveFrontierToy: a and b must differ");
}

ParamVector ConcaveFrontierToy::initial_params(std::uint64_t seed) const {
  return ParamVector(random_point_near(a_, b_, init_radius_, seed));
}

ObjectiveValues ConcaveFrontierToy::losses(const ParamVector& theta) const {
  const double q1 = sq_dist(theta.values(), a_);
  const double q2 = sq_dist(theta.values(), b_);
  return ObjectiveValues({1.0 - std::exp(-q1), 1.0 - std::exp(-q2)});
}

GradientSet ConcaveFrontierToy::gradients(const ParamVector& theta) const {
  const double q1 = sq_dist(theta.values(), a_);
  const double q2 = sq_dist(theta.values(), b_);
  return GradientSet({scaled_diff(theta.values(), a_, 2.0 * std::exp(-q1)),
                      scaled_diff(theta.values(), b_, 2.0 * std::exp(-q2))});
}

MetricVector ConcaveFrontierToy::metrics(const ParamVector& theta) const {
  const double q1 = sq_dist(theta.values(), a_);
  const double q2 = sq_dist(theta.values(), b_);
  return MetricVector({std::exp(-q1), std::exp(-q2)});
}

}  // namespace moo::toy
