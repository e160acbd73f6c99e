#include "moo/prior.hpp"

#include <algorithm>
#include <cmath>

#include "moo/textio.hpp"

namespace moo::prior {

namespace {

constexpr double kWeightFloor = 1e-6;
constexpr double kWeightCeil = 1e6;

double clamp_weight(double w) { return std::min(kWeightCeil, std::max(kWeightFloor, w)); }

bool is_inequality(CondKind k) { return k != CondKind::eq; }

}  // namespace

void AtomicCondition::validate(std::size_t metric_count) const {
  if (metric >= metric_count)
    throw ContractViolation("AtomicCondition: metric index out of range");
  if (!std::isfinite(a) || !std::isfinite(b))
    throw ContractViolation("AtomicCondition: non-finite bound");
  if (kind == CondKind::between && !(a <= b))
    throw ContractViolation("AtomicCondition: between needs lower <= upper");
}

bool AtomicCondition::holds(double value, double eq_tol) const {
  switch (kind) {
    case CondKind::ge:
      return value >= a;
    case CondKind::le:
      return value <= a;
    case CondKind::eq:
      return std::fabs(value - a) <= eq_tol;
    case CondKind::between:
      return value >= a && value <= b;
  }
  return false;
}

double AtomicCondition::extreme(double current) const {
  switch (kind) {
    case CondKind::ge:
    case CondKind::le:
    case CondKind::eq:
      return a;
    case CondKind::between:
      return (std::fabs(current - a) <= std::fabs(current - b)) ? a : b;
  }
  return a;
}

void ConstraintSet::validate(std::size_t metric_count) const {
  if (alternatives.empty()) throw ContractViolation("ConstraintSet: no constraints");
  std::vector<bool> seen(metric_count, false);
  for (const auto& alts : alternatives) {
    if (alts.empty())
      throw ContractViolation("ConstraintSet: empty disjunction for a metric");
    const std::size_t t = alts.front().metric;
    for (const AtomicCondition& c : alts) {
      c.validate(metric_count);
      if (c.metric != t)
        throw ContractViolation("ConstraintSet: mixed metrics inside one disjunction");
    }
    if (t < metric_count && seen[t])
      throw ContractViolation("ConstraintSet: metric constrained twice");
    seen[t] = true;
  }
}

std::vector<FeasibleSubset> enumerate_feasible_subsets(const ConstraintSet& constraints,
                                                       const MetricVector& current) {
  constraints.validate(current.size());
  const std::size_t k = constraints.alternatives.size();

  std::vector<FeasibleSubset> subsets;
  std::vector<std::size_t> choice(k, 0);
  std::vector<std::vector<std::size_t>> choices;  // kept for the lexicographic tiebreak
  while (true) {
    FeasibleSubset s;
    s.atoms.reserve(k);
    s.extreme_point.reserve(k);
    s.ineq_count = 0;
    for (std::size_t i = 0; i < k; ++i) {
      const AtomicCondition& c = constraints.alternatives[i][choice[i]];
      s.atoms.push_back(c);
      s.extreme_point.push_back(c.extreme(current[c.metric]));
      if (is_inequality(c.kind)) ++s.ineq_count;
    }
    s.priority_gap = euclidean_gap(current, s);
    subsets.push_back(std::move(s));
    choices.push_back(choice);

    // advance the mixed-radix counter; stop after the last combination
    std::size_t pos = k;
    while (pos > 0 && ++choice[pos - 1] == constraints.alternatives[pos - 1].size()) {
      choice[pos - 1] = 0;
      --pos;
    }
    if (pos == 0) break;
  }

  std::vector<std::size_t> order(subsets.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    if (subsets[x].ineq_count != subsets[y].ineq_count)
      return subsets[x].ineq_count > subsets[y].ineq_count;
    if (subsets[x].priority_gap != subsets[y].priority_gap)
      return subsets[x].priority_gap < subsets[y].priority_gap;
    return choices[x] < choices[y];
  });
  std::vector<FeasibleSubset> out;
  out.reserve(subsets.size());
  for (std::size_t i : order) out.push_back(std::move(subsets[i]));
  return out;
}

double euclidean_gap(const MetricVector& m, const FeasibleSubset& s) {
  double sq = 0.0;
  for (std::size_t i = 0; i < s.atoms.size(); ++i) {
    const std::size_t t = s.atoms[i].metric;
    if (t >= m.size()) throw ContractViolation("euclidean_gap: metric index out of range");
    const double d = m[t] - s.extreme_point[i];
    sq += d * d;
  }
  return std::sqrt(sq);
}

bool satisfies(const MetricVector& m, const FeasibleSubset& s, double eq_tol) {
  if (!(eq_tol > 0.0)) throw ContractViolation("satisfies: eq_tol must be > 0");
  for (const AtomicCondition& c : s.atoms) {
    if (c.metric >= m.size()) throw ContractViolation("satisfies: metric index out of range");
    if (!c.holds(m[c.metric], eq_tol)) return false;
  }
  return true;
}

bool satisfies_all(const MetricVector& m, const ConstraintSet& constraints, double eq_tol) {
  constraints.validate(m.size());
  for (const auto& alts : constraints.alternatives) {
    bool any = false;
    for (const AtomicCondition& c : alts) {
      if (c.holds(m[c.metric], eq_tol)) {
        any = true;
        break;
      }
    }
    if (!any) return false;
  }
  return true;
}

PreferenceWeights reweight_toward(const Vec& extreme_point, const MetricVector& m,
                                  const PreferenceWeights& w, const FeasibleSubset& s,
                                  double pace, double eq_tol) {
  if (!(pace > 1.0)) throw ContractViolation("reweight_toward: pace must be > 1");
  if (extreme_point.size() != s.atoms.size())
    throw ContractViolation("reweight_toward: extreme point size mismatch");

  // failing constrained metrics, with their gap to the boundary; gaps within
  // 1e-9 count as tied and the lowest metric index wins (decimal inputs like
  // 0.95 - 0.90 vs 0.75 - 0.70 differ only by rounding noise)
  std::size_t best_i = s.atoms.size();
  double best_gap = -1.0;
  for (std::size_t i = 0; i < s.atoms.size(); ++i) {
    const AtomicCondition& c = s.atoms[i];
    if (c.holds(m[c.metric], eq_tol)) continue;
    const double gap = std::fabs(extreme_point[i] - m[c.metric]);
    if (gap > best_gap + 1e-9) {
      best_gap = gap;
      best_i = i;
    }
  }
  if (best_i == s.atoms.size())
    throw ContractViolation("reweight_toward: no failing metric (caller bug)");

  const std::size_t t_hat = s.atoms[best_i].metric;
  Vec next = w.values();
  if (m[t_hat] > extreme_point[best_i]) {
    next[t_hat] = clamp_weight(next[t_hat] / pace);
  } else {
    next[t_hat] = clamp_weight(next[t_hat] * pace);
  }
  return PreferenceWeights(std::move(next));
}

PreferredResult solve_preferred(const Problem& problem, const ConstraintSet& constraints,
                                double pace, int max_rounds_per_subset,
                                const TrainConfig& train_cfg, OptimizerKind kind,
                                double eq_tol) {
  constraints.validate(problem.metric_count());
  if (!(pace > 1.0)) throw ContractViolation("solve_preferred: pace must be > 1");
  if (max_rounds_per_subset < 1)
    throw ContractViolation("solve_preferred: max_rounds_per_subset must be >= 1");

  const PreferenceWeights uniform = PreferenceWeights::uniform(problem.objective_count());
  OptimizeResult base = run_optimize(problem, uniform, train_cfg, kind);
  if (satisfies_all(base.metrics, constraints, eq_tol))
    return PreferredResult{base.metrics, uniform.values(), true, -1, 0};

  const std::vector<FeasibleSubset> subsets =
      enumerate_feasible_subsets(constraints, base.metrics);

  MetricVector last_m = base.metrics;
  Vec last_w = uniform.values();
  long last_subset = -1;
  long last_rounds = 0;

  for (std::size_t si = 0; si < subsets.size(); ++si) {
    const FeasibleSubset& s = subsets[si];
    PreferenceWeights w = uniform;
    MetricVector m = base.metrics;
    for (int round = 1; round <= max_rounds_per_subset; ++round) {
      w = reweight_toward(s.extreme_point, m, w, s, pace, eq_tol);
      OptimizeResult res = run_optimize(problem, w, train_cfg, kind);
      m = res.metrics;
      last_m = m;
      last_w = w.values();
      last_subset = static_cast<long>(si);
      last_rounds = round;
      if (satisfies(m, s, eq_tol))
        return PreferredResult{m, w.values(), true, static_cast<long>(si), round};
    }
  }
  return PreferredResult{last_m, last_w, false, last_subset, last_rounds};
}

namespace {

// one alternative inside a token, e.g. "sl>=0.95" or "m1in[0.2,0.4]"
AtomicCondition parse_atom(const std::string& atom, const std::string& token,
                           const std::vector<std::string>& metric_names) {
  const auto fail = [&](const std::string& why) {
    throw ParseError("constraint token '" + token + "': " + why);
  };

  const std::size_t op_ge = atom.find(">=");
  const std::size_t op_le = atom.find("<=");
  const std::size_t op_eq = atom.find("==");
  const std::size_t op_in = atom.find("in[");
  std::size_t op_pos = std::min(std::min(op_ge, op_le), std::min(op_eq, op_in));
  if (op_pos == std::string::npos) fail("expected one of >=, <=, ==, in[...]");

  const std::string name = atom.substr(0, op_pos);
  std::size_t metric = metric_names.size();
  for (std::size_t i = 0; i < metric_names.size(); ++i) {
    if (name == metric_names[i]) {
      metric = i;
      break;
    }
  }
  if (metric == metric_names.size()) {
    if (name.size() >= 2 && name[0] == 'm') {
      const long idx = parse_long(name.substr(1), "constraint token '" + token + "'");
      if (idx < 1 || static_cast<std::size_t>(idx) > metric_names.size())
        fail("metric index out of range (metrics are m1..m" +
             std::to_string(metric_names.size()) + ")");
      metric = static_cast<std::size_t>(idx - 1);
    } else {
      fail("unknown metric '" + name + "'");
    }
  }

  AtomicCondition c;
  c.metric = metric;
  const std::string ctx = "constraint token '" + token + "'";
  if (op_pos == op_in) {
    if (atom.back() != ']') fail("unterminated interval, expected m<i>in[<lo>,<hi>]");
    const std::string inner = atom.substr(op_pos + 3, atom.size() - op_pos - 4);
    const std::vector<std::string> parts = split(inner, ',');
    if (parts.size() != 2) fail("interval needs exactly two bounds");
    c.kind = CondKind::between;
    c.a = parse_double(parts[0], ctx);
    c.b = parse_double(parts[1], ctx);
    if (!(c.a <= c.b)) fail("interval bounds out of order");
    return c;
  }
  const std::string rest = atom.substr(op_pos + 2);
  if (rest.empty()) fail("missing bound value");
  if (rest.find('>') != std::string::npos || rest.find('<') != std::string::npos ||
      rest.find('=') != std::string::npos)
    fail("malformed comparison operator");
  c.a = parse_double(rest, ctx);
  if (op_pos == op_ge) {
    c.kind = CondKind::ge;
  } else if (op_pos == op_le) {
    c.kind = CondKind::le;
  } else {
    c.kind = CondKind::eq;
  }
  return c;
}

}  // namespace

ConstraintSet parse_constraints(const std::string& text,
                                const std::vector<std::string>& metric_names) {
  ConstraintSet cs;
  std::vector<bool> used(metric_names.size(), false);
  for (const std::string& raw : split(text, ' ')) {
    const std::string token = trim(raw);
    if (token.empty()) continue;
    std::vector<AtomicCondition> alts;
    for (const std::string& atom : split(token, '|')) {
      const std::string a = trim(atom);
      if (a.empty()) throw ParseError("constraint token '" + token + "': empty alternative");
      alts.push_back(parse_atom(a, token, metric_names));
    }
    const std::size_t metric = alts.front().metric;
    for (const AtomicCondition& c : alts) {
      if (c.metric != metric)
        throw ParseError("constraint token '" + token +
                         "': alternatives must reference one metric");
    }
    if (used[metric])
      throw ParseError("constraint token '" + token + "': metric constrained twice");
    used[metric] = true;
    cs.alternatives.push_back(std::move(alts));
  }
  if (cs.alternatives.empty()) throw ParseError("constraints: no tokens");
  return cs;
}

}  // namespace moo::prior
