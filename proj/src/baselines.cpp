#include "moo/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>

namespace moo {

OptimizeResult run_optimize(const Problem& problem, const PreferenceWeights& w,
                            const TrainConfig& cfg, OptimizerKind kind,
                            const std::optional<ParamVector>& start) {
  if (kind == OptimizerKind::mgda) return optimize(problem, w, cfg, start);
  Vec coeffs = w.values();
  double sum = 0.0;
  for (double c : coeffs) sum += c;
  for (double& c : coeffs) c /= sum;
  return baselines::static_scaling_optimize(problem, coeffs, cfg, start);
}

}  // namespace moo

namespace moo::baselines {

ScalarizedProblem::ScalarizedProblem(const Problem& base, Vec coefficients)
    : base_(&base), coeffs_(std::move(coefficients)) {
  if (coeffs_.size() != base.objective_count())
    throw ContractViolation("ScalarizedProblem: coefficient count mismatch");
  double sum = 0.0;
  for (double c : coeffs_) {
    if (!(c >= 0.0) || c > 1.0 + 1e-12)
      throw ContractViolation("ScalarizedProblem: coefficients must lie in [0, 1]");
    sum += c;
  }
  if (std::fabs(sum - 1.0) > 1e-9)
    throw ContractViolation("ScalarizedProblem: coefficients must sum to 1");
}

ObjectiveValues ScalarizedProblem::losses(const ParamVector& theta) const {
  const ObjectiveValues base = base_->losses(theta);
  double total = 0.0;
  for (std::size_t t = 0; t < coeffs_.size(); ++t) total += coeffs_[t] * base[t];
  return ObjectiveValues({total});
}

GradientSet ScalarizedProblem::gradients(const ParamVector& theta) const {
  const GradientSet base = base_->gradients(theta);
  Vec combined(base.dim(), 0.0);
  for (std::size_t t = 0; t < coeffs_.size(); ++t) {
    if (coeffs_[t] == 0.0) continue;
    const Vec& row = base.row(t);
    for (std::size_t i = 0; i < combined.size(); ++i) combined[i] += coeffs_[t] * row[i];
  }
  return GradientSet({std::move(combined)});
}

OptimizeResult static_scaling_optimize(const Problem& problem, const Vec& coefficients,
                                       const TrainConfig& cfg,
                                       const std::optional<ParamVector>& start) {
  const ScalarizedProblem scalarized(problem, coefficients);
  return optimize(scalarized, PreferenceWeights({1.0}), cfg, start);
}

std::vector<Vec> simplex_grid(std::size_t t_count, std::size_t resolution) {
  if (t_count == 0) throw ContractViolation("simplex_grid: t_count must be >= 1");
  if (resolution < 2) throw ContractViolation("simplex_grid: resolution must be >= 2");
  const std::size_t levels = resolution - 1;

  std::vector<Vec> grid;
  Vec point(t_count, 0.0);
  // distribute `levels` units over t_count coordinates, lexicographically
  std::vector<std::size_t> units(t_count, 0);
  const std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t pos,
                                                                std::size_t remaining) {
    if (pos + 1 == t_count) {
      units[pos] = remaining;
      for (std::size_t i = 0; i < t_count; ++i)
        point[i] = static_cast<double>(units[i]) / static_cast<double>(levels);
      grid.push_back(point);
      return;
    }
    for (std::size_t u = 0; u <= remaining; ++u) {
      units[pos] = u;
      rec(pos + 1, remaining - u);
    }
  };
  rec(0, levels);
  return grid;
}

posterior::FrontierArchive grid_search(const Problem& problem, std::size_t resolution,
                                       const TrainConfig& cfg, std::size_t jobs,
                                       std::size_t restarts) {
  cfg.validate();
  if (restarts == 0) throw ContractViolation("grid_search: restarts must be >= 1");
  const std::vector<Vec> grid = simplex_grid(problem.objective_count(), resolution);
  std::vector<std::optional<posterior::FrontierEntry>> slots(grid.size());

  const auto run_one = [&](std::size_t i) {
    const ScalarizedProblem scalarized(problem, grid[i]);
    std::optional<OptimizeResult> best;
    double best_loss = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < restarts; ++r) {
      TrainConfig run_cfg = cfg;
      run_cfg.init_seed = cfg.init_seed + r;
      OptimizeResult res = optimize(scalarized, PreferenceWeights({1.0}), run_cfg);
      const double final_loss = scalarized.losses(ParamVector(res.trace.final_params))[0];
      if (final_loss < best_loss) {
        best_loss = final_loss;
        best = std::move(res);
      }
    }
    slots[i] = posterior::FrontierEntry{grid[i], best->metrics.values()};
  };

  if (jobs <= 1 || grid.size() <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) run_one(i);
  } else {
    const std::size_t workers = std::min(jobs, grid.size());
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < grid.size(); i += workers) run_one(i);
      });
    }
    for (std::thread& t : pool) t.join();
  }

  posterior::FrontierArchive archive;
  archive.entries.reserve(grid.size());
  for (auto& slot : slots) archive.entries.push_back(std::move(*slot));
  return archive;
}

Vec coverage_span(const posterior::FrontierArchive& archive, const MetricBounds& bounds) {
  Vec span(bounds.size(), 0.0);
  if (archive.entries.empty()) return span;
  for (std::size_t t = 0; t < bounds.size(); ++t) {
    double lo = bounds.hi()[t];
    double hi = bounds.lo()[t];
    for (const posterior::FrontierEntry& e : archive.entries) {
      const double v = std::clamp(e.metrics[t], bounds.lo()[t], bounds.hi()[t]);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    span[t] = std::max(0.0, hi - lo);
  }
  return span;
}

double hypervolume_2d(const std::vector<Vec>& metric_points, const Vec& ref) {
  if (ref.size() != 2) throw ContractViolation("hypervolume_2d: reference must be 2-dimensional");
  std::vector<Vec> pts;
  for (const Vec& p : metric_points) {
    if (p.size() != 2) throw ContractViolation("hypervolume_2d: points must be 2-dimensional");
    if (p[0] > ref[0] && p[1] > ref[1]) pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end(),
            [](const Vec& a, const Vec& b) { return a[0] > b[0] || (a[0] == b[0] && a[1] > b[1]); });
  double hv = 0.0;
  double best_y = ref[1];
  for (const Vec& p : pts) {
    if (p[1] > best_y) {
      hv += (p[0] - ref[0]) * (p[1] - best_y);
      best_y = p[1];
    }
  }
  return hv;
}

}  // namespace moo::baselines
