#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "moo/posterior.hpp"
#include "moo/prior.hpp"
#include "moo/textio.hpp"
#include "moo/toy.hpp"

using namespace moo;
using namespace moo::prior;

namespace {

const std::vector<std::string> kNames = {"acc", "sl"};

TrainConfig quad_cfg() {
  TrainConfig cfg;
  cfg.learning_rate = 0.25;
  cfg.max_steps = 2000;
  cfg.patience = 50;
  cfg.stationarity_tol = 1e-12;
  cfg.init_seed = 3;
  return cfg;
}

// counts optimize calls via gradient evaluations at step zero
class CountingToy final : public Problem {
 public:
  explicit CountingToy(const toy::QuadraticToy& base) : base_(&base) {}
  std::size_t objective_count() const override { return base_->objective_count(); }
  std::size_t param_dim() const override { return base_->param_dim(); }
  ParamVector initial_params(std::uint64_t seed) const override {
    ++init_calls;
    return base_->initial_params(seed);
  }
  ObjectiveValues losses(const ParamVector& t) const override { return base_->losses(t); }
  GradientSet gradients(const ParamVector& t) const override { return base_->gradients(t); }
  MetricVector metrics(const ParamVector& t) const override { return base_->metrics(t); }

  mutable int init_calls = 0;

 private:
  const toy::QuadraticToy* base_;
};

}  // namespace

TEST_CASE("parse: single inequality with alias") {
  const ConstraintSet cs = parse_constraints("sl>=0.95", kNames);
  REQUIRE(cs.alternatives.size() == 1);
  REQUIRE(cs.alternatives[0].size() == 1);
  CHECK(cs.alternatives[0][0].metric == 1);
  CHECK(cs.alternatives[0][0].kind == CondKind::ge);
  CHECK(cs.alternatives[0][0].a == doctest::Approx(0.95));
}

TEST_CASE("parse: indexed forms, intervals and disjunction") {
  const ConstraintSet cs = parse_constraints("m1>=0.9|m1==0.5 m2in[0.2,0.4]", kNames);
  REQUIRE(cs.alternatives.size() == 2);
  CHECK(cs.alternatives[0].size() == 2);
  CHECK(cs.alternatives[0][1].kind == CondKind::eq);
  CHECK(cs.alternatives[1][0].kind == CondKind::between);
  CHECK(cs.alternatives[1][0].a == doctest::Approx(0.2));
  CHECK(cs.alternatives[1][0].b == doctest::Approx(0.4));
}

TEST_CASE("parse: malformed tokens name the token") {
  CHECK_THROWS_WITH_AS(parse_constraints("sl>>0.9", kNames),
                       doctest::Contains("sl>>0.9"), ParseError);
  CHECK_THROWS_AS(parse_constraints("foo>=0.9", kNames), ParseError);
  CHECK_THROWS_AS(parse_constraints("m3>=0.9", kNames), ParseError);
  CHECK_THROWS_AS(parse_constraints("m1in[0.5,0.2]", kNames), ParseError);
  CHECK_THROWS_AS(parse_constraints("m1in[0.5", kNames), ParseError);
  CHECK_THROWS_AS(parse_constraints("sl>=", kNames), ParseError);
  CHECK_THROWS_AS(parse_constraints("", kNames), ParseError);
}

TEST_CASE("parse: one metric may not be constrained twice") {
  CHECK_THROWS_AS(parse_constraints("sl>=0.9 sl<=0.95", kNames), ParseError);
  CHECK_THROWS_AS(parse_constraints("m1>=0.9|m2<=0.1", kNames), ParseError);
}

TEST_CASE("enumerate: single inequality gives one subset with its boundary point") {
  const ConstraintSet cs = parse_constraints("sl>=0.95", kNames);
  const auto subsets = enumerate_feasible_subsets(cs, MetricVector({0.5, 0.5}));
  REQUIRE(subsets.size() == 1);
  CHECK(subsets[0].extreme_point[0] == doctest::Approx(0.95));
  CHECK(subsets[0].ineq_count == 1);
}

TEST_CASE("enumerate: inequality-heavy subsets come first") {
  const ConstraintSet cs = parse_constraints("m1>=0.9|m1==0.5 m2<=0.3", kNames);
  const auto subsets = enumerate_feasible_subsets(cs, MetricVector({0.5, 0.5}));
  REQUIRE(subsets.size() == 2);
  CHECK(subsets[0].atoms[0].kind == CondKind::ge);
  CHECK(subsets[0].ineq_count == 2);
  CHECK(subsets[1].atoms[0].kind == CondKind::eq);
  CHECK(subsets[1].ineq_count == 1);
}

TEST_CASE("enumerate: two intervals form a single subset") {
  const ConstraintSet cs = parse_constraints("m1in[0.2,0.4] m2in[0.6,0.8]", kNames);
  const auto subsets = enumerate_feasible_subsets(cs, MetricVector({0.0, 1.0}));
  REQUIRE(subsets.size() == 1);
  // interval boundary nearest to the current point
  CHECK(subsets[0].extreme_point[0] == doctest::Approx(0.2));
  CHECK(subsets[0].extreme_point[1] == doctest::Approx(0.8));
}

TEST_CASE("enumerate: equal inequality counts order by distance to the extreme point") {
  const ConstraintSet cs = parse_constraints("m1>=0.9|m1<=0.1", kNames);
  const auto subsets = enumerate_feasible_subsets(cs, MetricVector({0.2, 0.5}));
  REQUIRE(subsets.size() == 2);
  CHECK(subsets[0].atoms[0].kind == CondKind::le);  // 0.1 is nearer to 0.2
  CHECK(subsets[0].priority_gap <= subsets[1].priority_gap);
}

TEST_CASE("euclidean_gap: boundary point has zero gap") {
  const ConstraintSet cs = parse_constraints("m1>=0.95", kNames);
  const auto subsets = enumerate_feasible_subsets(cs, MetricVector({0.95, 0.3}));
  CHECK(euclidean_gap(MetricVector({0.95, 0.3}), subsets[0]) == doctest::Approx(0.0));
}

TEST_CASE("euclidean_gap: both metrics constrained") {
  const ConstraintSet cs = parse_constraints("m1>=0.95 m2>=0.75", kNames);
  const auto subsets = enumerate_feasible_subsets(cs, MetricVector({0.90, 0.70}));
  CHECK(euclidean_gap(MetricVector({0.90, 0.70}), subsets[0]) ==
        doctest::Approx(std::sqrt(0.0025 + 0.0025)));
}

TEST_CASE("euclidean_gap: unconstrained metrics are excluded") {
  const ConstraintSet cs = parse_constraints("m1>=0.9", kNames);
  const auto subsets = enumerate_feasible_subsets(cs, MetricVector({0.5, 0.123}));
  CHECK(euclidean_gap(MetricVector({0.5, 0.99}), subsets[0]) == doctest::Approx(0.4));
}

TEST_CASE("satisfies: inequality and equality forms") {
  const ConstraintSet ge = parse_constraints("m1>=0.95", kNames);
  const auto s_ge = enumerate_feasible_subsets(ge, MetricVector({0.5, 0.5}));
  CHECK(satisfies(MetricVector({0.96, 0.0}), s_ge[0]));
  CHECK_FALSE(satisfies(MetricVector({0.94, 0.0}), s_ge[0]));

  const ConstraintSet eq = parse_constraints("m1==0.5", kNames);
  const auto s_eq = enumerate_feasible_subsets(eq, MetricVector({0.5, 0.5}));
  CHECK(satisfies(MetricVector({0.5004, 0.0}), s_eq[0], 1e-3));
  CHECK_FALSE(satisfies(MetricVector({0.502, 0.0}), s_eq[0], 1e-3));
}

TEST_CASE("reweight_toward: tied gaps pick the lowest metric, undershoot grows the weight") {
  const ConstraintSet cs = parse_constraints("m1>=0.95 m2>=0.75", kNames);
  const auto subsets = enumerate_feasible_subsets(cs, MetricVector({0.90, 0.70}));
  const PreferenceWeights w = reweight_toward(subsets[0].extreme_point,
                                              MetricVector({0.90, 0.70}),
                                              PreferenceWeights({0.5, 0.5}), subsets[0], 2.0);
  CHECK(w[0] == doctest::Approx(1.0));
  CHECK(w[1] == doctest::Approx(0.5));
}

TEST_CASE("reweight_toward: overshoot beyond an upper bound shrinks the weight") {
  const std::vector<std::string> one = {"m"};
  const ConstraintSet cs = parse_constraints("m1<=0.95", one);
  const auto subsets = enumerate_feasible_subsets(cs, MetricVector({0.99}));
  const PreferenceWeights w = reweight_toward(subsets[0].extreme_point, MetricVector({0.99}),
                                              PreferenceWeights({1.0}), subsets[0], 2.0);
  CHECK(w[0] == doctest::Approx(0.5));
}

TEST_CASE("reweight_toward: only the failing metric's weight moves") {
  const ConstraintSet cs = parse_constraints("m1>=0.5 m2>=0.75", kNames);
  const auto subsets = enumerate_feasible_subsets(cs, MetricVector({0.9, 0.70}));
  const PreferenceWeights w = reweight_toward(subsets[0].extreme_point, MetricVector({0.9, 0.70}),
                                              PreferenceWeights({0.4, 0.6}), subsets[0], 2.0);
  CHECK(w[0] == 0.4);
  CHECK(w[1] == doctest::Approx(1.2));
}

TEST_CASE("reweight_toward: a fully satisfied subset is a caller bug") {
  const ConstraintSet cs = parse_constraints("m1>=0.5", kNames);
  const auto subsets = enumerate_feasible_subsets(cs, MetricVector({0.9, 0.5}));
  CHECK_THROWS_AS(reweight_toward(subsets[0].extreme_point, MetricVector({0.9, 0.5}),
                                  PreferenceWeights({1.0, 1.0}), subsets[0], 2.0),
                  ContractViolation);
}

TEST_CASE("solve_preferred: a constraint the uniform run satisfies exits after one call") {
  const toy::QuadraticToy quad({0.0, 0.0}, {2.0, 0.0});
  const CountingToy counting(quad);
  const ConstraintSet cs = parse_constraints("m1>=0.1", {"m1", "m2"});
  const PreferredResult res = solve_preferred(counting, cs, 2.0, 10, quad_cfg());
  CHECK(res.satisfied);
  CHECK(res.subset_index == -1);
  CHECK(res.rounds_used == 0);
  CHECK(counting.init_calls == 1);
}

TEST_CASE("solve_preferred: active constraint stays near the constrained optimum") {
  const toy::QuadraticToy quad({0.0, 0.0}, {2.0, 0.0});
  const ConstraintSet cs = parse_constraints("m1>=0.9", {"m1", "m2"});
  // gentle pace: the landing point is sensitive to the weight ratio, so big
  // jumps overshoot the boundary and give away the other metric
  const PreferredResult res = solve_preferred(quad, cs, 1.02, 60, quad_cfg());
  REQUIRE(res.satisfied);
  CHECK(res.metrics[0] >= 0.9 - 1e-3);

  // oracle: dense frontier sweep filtered to the feasible region
  posterior::ExploreConfig ec{MetricBounds({0, 0}, {1, 1}), {0.02, 0.02}, 1.5, 60};
  const posterior::FrontierArchive sweep = posterior::explore_frontier(quad, ec, quad_cfg());
  double best_m2 = -1.0;
  for (const auto& e : sweep.entries) {
    if (e.metrics[0] >= 0.9) best_m2 = std::max(best_m2, e.metrics[1]);
  }
  REQUIRE(best_m2 >= 0.0);
  CHECK(res.metrics[1] >= best_m2 - 0.05);
}

TEST_CASE("solve_preferred: infeasible constraints report satisfied = false") {
  const toy::QuadraticToy quad({0.0, 0.0}, {2.0, 0.0});
  const ConstraintSet cs = parse_constraints("m1>=1.5", {"m1", "m2"});
  TrainConfig cfg = quad_cfg();
  cfg.max_steps = 200;
  const PreferredResult res = solve_preferred(quad, cs, 2.0, 4, cfg);
  CHECK_FALSE(res.satisfied);
}

TEST_CASE("reweight_toward: compounding updates stay within the weight clamp") {
  const std::vector<std::string> one = {"m"};
  const ConstraintSet cs = parse_constraints("m1>=2.0", one);  // unreachable
  const auto subsets = enumerate_feasible_subsets(cs, MetricVector({0.5}));
  PreferenceWeights w({1.0});
  for (int round = 0; round < 200; ++round)
    w = reweight_toward(subsets[0].extreme_point, MetricVector({0.5}), w, subsets[0], 10.0);
  CHECK(w[0] <= 1e6);
  PreferenceWeights down({1.0});
  const ConstraintSet cs2 = parse_constraints("m1<=-1.0", one);  // unreachable below
  const auto subsets2 = enumerate_feasible_subsets(cs2, MetricVector({0.5}));
  for (int round = 0; round < 200; ++round)
    down = reweight_toward(subsets2[0].extreme_point, MetricVector({0.5}), down, subsets2[0], 10.0);
  CHECK(down[0] >= 1e-6);
}
