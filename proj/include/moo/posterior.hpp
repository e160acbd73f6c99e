#pragma once

#include <iosfwd>
#include <optional>

#include "moo/mgda.hpp"

namespace moo::posterior {

/// One memorized exploration result: the preference weights a run used and
/// the metrics it reached. Weights are stored raw (the grid baseline archives
/// convex coefficients, which may contain zeros).
struct FrontierEntry {
  Vec weights;
  Vec metrics;
};

/// Entries in production order; each metric vector came from a full
/// optimization run.
struct FrontierArchive {
  std::vector<FrontierEntry> entries;
};

struct ExploreConfig {
  MetricBounds bounds;
  Vec granularity_target;  // per-metric threshold on the mean adjacent gap
  double pace = 2.0;       // > 1, scales weights when pushing toward a bound
  int max_rounds = 50;

  void validate(std::size_t metric_count) const;
};

/// Mean gap between adjacent elements of {lo} + points + {hi} after clipping
/// points into [lo, hi] and collapsing duplicates within 1e-9. Equals
/// (hi - lo) / (n + 1) for n distinct interior points.
double granularity(Vec points, double lo, double hi);

/// Decide the next preference weights from the archive, or nullopt when the
/// coverage target is met for every metric. Picks the metric with the worst
/// granularity (ties toward the lowest index), locates its widest uncovered
/// interval (ties toward the smaller left endpoint), then either scales the
/// boundary-adjacent entry's weight by pace (gap touching a bound) or
/// averages the two flanking entries' weights (interior gap).
std::optional<PreferenceWeights> next_weights(const FrontierArchive& archive,
                                              const ExploreConfig& cfg);

/// Raised when an optimization run inside the exploration loop fails; the
/// archive built so far rides along.
class ExplorationError : public std::runtime_error {
 public:
  ExplorationError(const std::string& what, FrontierArchive partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const FrontierArchive& partial_archive() const { return partial_; }

 private:
  FrontierArchive partial_;
};

/// Repeatedly optimize and reweight until the metric frontier is covered to
/// the target granularity or max_rounds runs have been spent. Starts from
/// uniform preferences.
FrontierArchive explore_frontier(const Problem& problem, const ExploreConfig& cfg,
                                 const TrainConfig& train_cfg,
                                 OptimizerKind kind = OptimizerKind::mgda);

/// CSV with columns round,w_1..w_T,m_1..m_T, numbers at 9 significant digits.
void write_archive_csv(const FrontierArchive& archive, std::ostream& out);

}  // namespace moo::posterior
