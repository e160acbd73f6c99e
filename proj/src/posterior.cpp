#include "moo/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "moo/textio.hpp"

namespace moo::posterior {

namespace {

constexpr double kDupEps = 1e-9;
constexpr double kWeightFloor = 1e-6;
constexpr double kWeightCeil = 1e6;

double clip(double v, double lo, double hi) { return std::min(hi, std::max(lo, v)); }

// sorted distinct values of {lo} + clipped points + {hi}
Vec coverage_sequence(const Vec& points, double lo, double hi) {
  Vec seq;
  seq.reserve(points.size() + 2);
  seq.push_back(lo);
  for (double p : points) seq.push_back(clip(p, lo, hi));
  seq.push_back(hi);
  std::sort(seq.begin(), seq.end());
  Vec dedup;
  for (double v : seq) {
    if (dedup.empty() || v - dedup.back() > kDupEps) dedup.push_back(v);
  }
  return dedup;
}

double clamp_weight(double w) { return std::min(kWeightCeil, std::max(kWeightFloor, w)); }

// Most recent archive entry whose clipped metric t equals `value`. Recency
// matters: when runs keep saturating the same value, pairing against the
// newest weights halves the weight gap each round instead of looping.
std::optional<std::size_t> owner_of(const FrontierArchive& archive, std::size_t t, double value,
                                    double lo, double hi) {
  for (std::size_t i = archive.entries.size(); i-- > 0;) {
    if (std::fabs(clip(archive.entries[i].metrics[t], lo, hi) - value) <= kDupEps) return i;
  }
  return std::nullopt;
}

PreferenceWeights scaled_entry_weights(const FrontierEntry& entry, std::size_t t, double factor) {
  Vec w = entry.weights;
  w[t] = clamp_weight(w[t] * factor);
  return PreferenceWeights(std::move(w));
}

}  // namespace

void ExploreConfig::validate(std::size_t metric_count) const {
  if (bounds.size() != metric_count)
    throw ContractViolation("ExploreConfig: bounds do not match metric count");
  if (granularity_target.size() != metric_count)
    throw ContractViolation("ExploreConfig: granularity target does not match metric count");
  for (double phi : granularity_target) {
    if (!(phi > 0.0)) throw ContractViolation("ExploreConfig: granularity target must be > 0");
  }
  if (!(pace > 1.0)) throw ContractViolation("ExploreConfig: pace must be > 1");
  if (max_rounds < 1) throw ContractViolation("ExploreConfig: max_rounds must be >= 1");
}

double granularity(Vec points, double lo, double hi) {
  if (!(lo < hi)) throw ContractViolation("granularity: need lo < hi");
  const Vec seq = coverage_sequence(points, lo, hi);
  return (hi - lo) / static_cast<double>(seq.size() - 1);
}

std::optional<PreferenceWeights> next_weights(const FrontierArchive& archive,
                                              const ExploreConfig& cfg) {
  if (archive.entries.empty()) throw ContractViolation("next_weights: archive is empty");
  const std::size_t t_count = cfg.bounds.size();

  Vec gran(t_count);
  bool covered = true;
  for (std::size_t t = 0; t < t_count; ++t) {
    Vec pts;
    pts.reserve(archive.entries.size());
    for (const FrontierEntry& e : archive.entries) pts.push_back(e.metrics[t]);
    gran[t] = granularity(std::move(pts), cfg.bounds.lo()[t], cfg.bounds.hi()[t]);
    if (gran[t] > cfg.granularity_target[t]) covered = false;
  }
  if (covered) return std::nullopt;

  std::size_t t_hat = 0;
  for (std::size_t t = 1; t < t_count; ++t) {
    if (gran[t] > gran[t_hat]) t_hat = t;
  }

  const double lo = cfg.bounds.lo()[t_hat];
  const double hi = cfg.bounds.hi()[t_hat];
  Vec pts;
  for (const FrontierEntry& e : archive.entries) pts.push_back(e.metrics[t_hat]);
  const Vec seq = coverage_sequence(pts, lo, hi);

  std::size_t gap_i = 0;
  for (std::size_t i = 1; i + 1 < seq.size(); ++i) {
    if (seq[i + 1] - seq[i] > seq[gap_i + 1] - seq[gap_i]) gap_i = i;
  }
  const double left = seq[gap_i];
  const double right = seq[gap_i + 1];
  const bool left_is_lo = (gap_i == 0);
  const bool right_is_hi = (gap_i + 2 == seq.size());

  const auto left_owner = owner_of(archive, t_hat, left, lo, hi);
  const auto right_owner = owner_of(archive, t_hat, right, lo, hi);

  // A bound element some run already attained marks explored territory, so
  // the bound cases apply only to bounds no entry has reached; otherwise the
  // widest gap sits between two known runs and their weights get averaged.
  // Re-scaling the bound-adjacent entry when the bound is already attained
  // would regenerate the same weights round after round.
  if (left_is_lo && !left_owner && right_owner) {
    // unexplored region hugs the lower bound: ease off objective t_hat
    return scaled_entry_weights(archive.entries[*right_owner], t_hat, 1.0 / cfg.pace);
  }
  if (right_is_hi && !right_owner && left_owner) {
    // unexplored region hugs the upper bound: push objective t_hat harder
    return scaled_entry_weights(archive.entries[*left_owner], t_hat, cfg.pace);
  }
  if (left_owner && right_owner) {
    const Vec& wi = archive.entries[*left_owner].weights;
    const Vec& wj = archive.entries[*right_owner].weights;
    Vec mid(wi.size());
    for (std::size_t k = 0; k < wi.size(); ++k) mid[k] = clamp_weight(0.5 * (wi[k] + wj[k]));
    return PreferenceWeights(std::move(mid));
  }
  // The widest gap touches an unreached bound on one side with every entry
  // collapsed onto the other; scale the collapsed pile toward the open side.
  if (left_owner) return scaled_entry_weights(archive.entries[*left_owner], t_hat, cfg.pace);
  if (right_owner)
    return scaled_entry_weights(archive.entries[*right_owner], t_hat, 1.0 / cfg.pace);
  throw ContractViolation("next_weights: no archive entry adjacent to the widest gap");
}

FrontierArchive explore_frontier(const Problem& problem, const ExploreConfig& cfg,
                                 const TrainConfig& train_cfg, OptimizerKind kind) {
  cfg.validate(problem.metric_count());
  train_cfg.validate();

  FrontierArchive archive;
  PreferenceWeights w = PreferenceWeights::uniform(problem.objective_count());
  std::optional<ParamVector> start;

  for (int round = 0; round < cfg.max_rounds; ++round) {
    try {
      OptimizeResult res = run_optimize(problem, w, train_cfg, kind, start);
      archive.entries.push_back(FrontierEntry{w.values(), res.metrics.values()});
      if (train_cfg.warm_start) start = ParamVector(res.trace.final_params);
    } catch (const DivergenceError& e) {
      throw ExplorationError(std::string("explore_frontier: ") + e.what(), std::move(archive));
    }

    std::optional<PreferenceWeights> next = next_weights(archive, cfg);
    if (!next) break;
    // Cold-start runs are pure functions of the weights, so re-running an
    // already-archived weight vector would only duplicate its entry; the
    // search has no further move and stops early.
    if (!train_cfg.warm_start) {
      bool seen = false;
      for (const FrontierEntry& e : archive.entries) {
        bool same = true;
        for (std::size_t t = 0; t < e.weights.size(); ++t) {
          if (std::fabs(e.weights[t] - next->values()[t]) >
              1e-12 * std::max(1.0, std::fabs(e.weights[t]))) {
            same = false;
            break;
          }
        }
        if (same) {
          seen = true;
          break;
        }
      }
      if (seen) break;
    }
    w = std::move(*next);
  }
  return archive;
}

void write_archive_csv(const FrontierArchive& archive, std::ostream& out) {
  if (archive.entries.empty()) {
    out << "round\n";
    return;
  }
  const std::size_t t_count = archive.entries.front().weights.size();
  const std::size_t m_count = archive.entries.front().metrics.size();
  out << "round";
  for (std::size_t t = 0; t < t_count; ++t) out << ",w_" << (t + 1);
  for (std::size_t t = 0; t < m_count; ++t) out << ",m_" << (t + 1);
  out << "\n";
  for (std::size_t i = 0; i < archive.entries.size(); ++i) {
    out << i;
    for (double w : archive.entries[i].weights) out << "," << fmt_g9(w);
    for (double m : archive.entries[i].metrics) out << "," << fmt_g9(m);
    out << "\n";
  }
}

}  // namespace moo::posterior
