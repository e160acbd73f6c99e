#pragma once

#include <string>

#include "moo/mgda.hpp"

namespace moo::prior {

enum class CondKind { ge, le, eq, between };

/// A condition on one metric: M[metric] >= a, <= a, == a, or in [a, b].
struct AtomicCondition {
  std::size_t metric = 0;
  CondKind kind = CondKind::ge;
  double a = 0.0;
  double b = 0.0;  // upper edge, between only

  void validate(std::size_t metric_count) const;
  bool holds(double value, double eq_tol) const;
  /// Boundary value the search steers toward; for `between` the endpoint
  /// nearer to `current`.
  double extreme(double current) const;
};

/// Conjunction over metrics of per-metric disjunctions. Each constrained
/// metric appears exactly once.
struct ConstraintSet {
  // alternatives[i] lists the atoms for one constrained metric
  std::vector<std::vector<AtomicCondition>> alternatives;

  void validate(std::size_t metric_count) const;
};

/// One atom chosen per constrained metric, with the extreme point those
/// boundaries form and the priority key used for ordering.
struct FeasibleSubset {
  std::vector<AtomicCondition> atoms;
  Vec extreme_point;         // one coordinate per constrained metric
  std::size_t ineq_count;    // ge/le/between atoms (eq excluded)
  double priority_gap;       // distance from the enumeration-time metrics
};

/// Cartesian product of the per-metric alternatives, ordered by inequality
/// count (descending), then Euclidean distance from `current` to the extreme
/// point (ascending), then lexicographic choice indices. `current` is the
/// uniform-preference solution available when enumeration happens.
std::vector<FeasibleSubset> enumerate_feasible_subsets(const ConstraintSet& constraints,
                                                       const MetricVector& current);

/// Euclidean distance over the constrained coordinates only.
double euclidean_gap(const MetricVector& m, const FeasibleSubset& s);

/// All atoms hold; equality atoms hold within eq_tol.
bool satisfies(const MetricVector& m, const FeasibleSubset& s, double eq_tol = 1e-3);

/// The full conjunction: for every constrained metric, some alternative holds.
bool satisfies_all(const MetricVector& m, const ConstraintSet& constraints,
                   double eq_tol = 1e-3);

/// Scale exactly one preference weight by pace: pick the failing constrained
/// metric farthest from its boundary value; shrink its weight when the metric
/// overshoots the boundary, grow it otherwise. Callers only invoke this on
/// unsatisfied metrics; an empty failing set is a contract violation.
PreferenceWeights reweight_toward(const Vec& extreme_point, const MetricVector& m,
                                  const PreferenceWeights& w, const FeasibleSubset& s,
                                  double pace, double eq_tol = 1e-3);

struct PreferredResult {
  MetricVector metrics;
  Vec weights;
  bool satisfied = false;
  long subset_index = -1;  // -1: the uniform-preference solution already satisfied
  long rounds_used = 0;    // reweighting rounds inside the winning (or last) subset
};

/// Find one solution whose metrics satisfy the constraints: run once with
/// uniform preferences, and if that misses, walk the feasible subsets in
/// priority order, nudging one weight per round until the subset is
/// satisfied or its round budget is spent. Unsatisfiable constraints return
/// the last solution with satisfied = false.
PreferredResult solve_preferred(const Problem& problem, const ConstraintSet& constraints,
                                double pace, int max_rounds_per_subset,
                                const TrainConfig& train_cfg,
                                OptimizerKind kind = OptimizerKind::mgda,
                                double eq_tol = 1e-3);

/// Constraint mini-language: whitespace-separated tokens, one constrained
/// metric per token, alternatives joined by '|' inside a token. Forms:
///   m<i>>=<v>   m<i><=<v>   m<i>==<v>   m<i>in[<lo>,<hi>]
/// with 1-based metric indices; metric names from `metric_names` (e.g. "acc",
/// "sl") work in place of m<i>. Throws ParseError naming the offending token.
ConstraintSet parse_constraints(const std::string& text,
                                const std::vector<std::string>& metric_names);

}  // namespace moo::prior
