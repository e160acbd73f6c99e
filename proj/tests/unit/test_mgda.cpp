#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "moo/baselines.hpp"
#include "moo/mgda.hpp"
#include "moo/rng.hpp"
#include "moo/toy.hpp"
#include "support/oracles.hpp"

using namespace moo;

TEST_CASE("reweight_alpha: identity weights") {
  const SimplexWeights a = reweight_alpha(SimplexWeights({0.25, 0.75}), PreferenceWeights({1, 1}));
  CHECK(a[0] == 0.25);
  CHECK(a[1] == 0.75);
}

TEST_CASE("reweight_alpha: arithmetic") {
  const SimplexWeights a =
      reweight_alpha(SimplexWeights({0.5, 0.5}), PreferenceWeights({0.8, 0.2}));
  CHECK(a[0] == doctest::Approx(0.8));
  CHECK(a[1] == doctest::Approx(0.2));
}

TEST_CASE("reweight_alpha: a zero component stays zero") {
  const SimplexWeights a =
      reweight_alpha(SimplexWeights({1.0, 0.0}), PreferenceWeights({0.1, 10.0}));
  CHECK(a[0] == doctest::Approx(1.0));
  CHECK(a[1] == 0.0);
}

TEST_CASE("reweight_alpha: uniform preferences are an exact no-op") {
  const SimplexWeights alpha({0.3, 0.3, 0.4});
  const SimplexWeights out = reweight_alpha(alpha, PreferenceWeights::uniform(3));
  for (std::size_t t = 0; t < 3; ++t) CHECK(out[t] == alpha[t]);
}

TEST_CASE("reweight_alpha: size mismatch is rejected") {
  CHECK_THROWS_AS(reweight_alpha(SimplexWeights({1.0}), PreferenceWeights({1.0, 1.0})),
                  ContractViolation);
}

TEST_CASE("mgda_step: direct arithmetic") {
  const ParamVector next = mgda_step(ParamVector({1.0, 1.0}),
                                     GradientSet({{1.0, 0.0}, {0.0, 1.0}}),
                                     SimplexWeights({0.5, 0.5}), 0.1);
  CHECK(next.values()[0] == doctest::Approx(0.95));
  CHECK(next.values()[1] == doctest::Approx(0.95));
}

TEST_CASE("mgda_step: zero combined direction leaves theta unchanged") {
  const ParamVector next = mgda_step(ParamVector({3.0, -2.0}),
                                     GradientSet({{1.0, 1.0}, {-1.0, -1.0}}),
                                     SimplexWeights({0.5, 0.5}), 0.7);
  CHECK(next.values()[0] == doctest::Approx(3.0));
  CHECK(next.values()[1] == doctest::Approx(-2.0));
}

TEST_CASE("mgda_step: single objective is plain gradient descent") {
  const ParamVector next =
      mgda_step(ParamVector({0.0}), GradientSet(std::vector<Vec>{{2.0}}), SimplexWeights({1.0}), 0.5);
  CHECK(next.values()[0] == doctest::Approx(-1.0));
}

TEST_CASE("mgda_step: overflowing update raises a divergence error") {
  CHECK_THROWS_AS(mgda_step(ParamVector({1.0}), GradientSet(std::vector<Vec>{{1e308}}), SimplexWeights({1.0}), 10.0),
                  DivergenceError);
}

TEST_CASE("optimize: lands on the segment between the two minimizers") {
  const toy::QuadraticToy quad({0.0, 0.0, 0.0}, {2.0, 0.0, 1.0});
  TrainConfig cfg;
  cfg.learning_rate = 0.25;
  cfg.max_steps = 2000;
  cfg.patience = 50;
  cfg.stationarity_tol = 1e-12;
  for (std::uint64_t seed : {1, 2, 3, 4, 5}) {
    cfg.init_seed = seed;
    const OptimizeResult res = optimize(quad, PreferenceWeights::uniform(2), cfg);
    const double dist = oracles::dist_to_segment(res.trace.final_params, quad.minimizer_a(),
                                                 quad.minimizer_b());
    CHECK(dist <= 1e-2);
    CHECK(res.trace.steps.size() <= 2000);
  }
}

TEST_CASE("optimize: strong preference for one objective lands near its minimizer") {
  const toy::QuadraticToy quad({0.0, 0.0}, {2.0, 0.0});
  TrainConfig cfg;
  cfg.learning_rate = 0.25;
  cfg.max_steps = 2000;
  cfg.patience = 50;
  cfg.stationarity_tol = 1e-12;
  cfg.init_seed = 3;
  const OptimizeResult biased = optimize(quad, PreferenceWeights({1000.0, 1.0}), cfg);
  const OptimizeResult plain = optimize(quad, PreferenceWeights::uniform(2), cfg);
  const double d_biased = oracles::euclid(biased.trace.final_params, quad.minimizer_a());
  const double d_plain = oracles::euclid(plain.trace.final_params, quad.minimizer_a());
  CHECK(d_biased <= 1e-1);
  CHECK(d_biased < d_plain);
}

TEST_CASE("optimize: T=1 matches a hand-rolled gradient descent step for step") {
  const toy::QuadraticToy quad({0.5, -0.5}, {2.0, 0.0});
  const baselines::ScalarizedProblem single(quad, {1.0, 0.0});
  TrainConfig cfg;
  cfg.learning_rate = 0.2;
  cfg.max_steps = 25;
  cfg.patience = 1000;
  cfg.stationarity_tol = 1e-300;
  cfg.init_seed = 7;
  const OptimizeResult res = optimize(single, PreferenceWeights({1.0}), cfg);

  Vec theta = single.initial_params(7).values();
  for (std::size_t step = 0; step < res.trace.steps.size(); ++step) {
    const GradientSet g = single.gradients(ParamVector(theta));
    for (std::size_t i = 0; i < theta.size(); ++i)
      theta[i] -= cfg.learning_rate * 1.0 * g.row(0)[i];
    CHECK(res.trace.steps[step].losses[0] == single.losses(ParamVector(theta))[0]);
  }
  CHECK(res.trace.steps.size() == 25);
  for (std::size_t i = 0; i < theta.size(); ++i) CHECK(res.trace.final_params[i] == theta[i]);
}

TEST_CASE("optimize with uniform preferences never worsens any loss along the trace") {
  const toy::QuadraticToy quad({0.0, 0.0}, {2.0, 0.0});
  TrainConfig cfg;
  cfg.learning_rate = 0.1;
  cfg.max_steps = 500;
  cfg.patience = 50;
  cfg.stationarity_tol = 1e-12;
  cfg.init_seed = 11;
  const OptimizeResult res = optimize(quad, PreferenceWeights::uniform(2), cfg);
  REQUIRE(res.trace.steps.size() > 3);
  for (std::size_t i = 1; i < res.trace.steps.size(); ++i) {
    for (std::size_t t = 0; t < 2; ++t)
      CHECK(res.trace.steps[i].losses[t] <= res.trace.steps[i - 1].losses[t] + 1e-6);
  }
}

TEST_CASE("halve-and-retest: some learning rate makes the step improve all objectives") {
  const toy::QuadraticToy quad({0.0, 0.0}, {2.0, 0.0});
  Rng rng(88);
  for (int trial = 0; trial < 20; ++trial) {
    const ParamVector theta({rng.uniform(-2.0, 4.0), rng.uniform(-3.0, 3.0)});
    const GradientSet g = quad.gradients(theta);
    const MinNormResult mn = frank_wolfe_solve(g);
    if (mn.sq_norm <= 1e-12) continue;
    const ObjectiveValues before = quad.losses(theta);
    double lr = 0.5;
    int halvings = 0;
    while (halvings < 30) {
      const ObjectiveValues after = quad.losses(mgda_step(theta, g, mn.alpha, lr));
      bool ok = true;
      for (std::size_t t = 0; t < 2; ++t) ok = ok && (after[t] <= before[t] + 1e-6);
      if (ok) break;
      lr *= 0.5;
      ++halvings;
    }
    CHECK(halvings < 30);
  }
}

TEST_CASE("optimize: divergence carries the step index and partial trace") {
  const toy::QuadraticToy quad({0.0, 0.0}, {2.0, 0.0});
  TrainConfig cfg;
  cfg.learning_rate = 1e155;  // quadratic gradients square the scale each step
  cfg.max_steps = 50;
  cfg.patience = 50;
  cfg.stationarity_tol = 1e-18;
  cfg.init_seed = 1;
  try {
    optimize(quad, PreferenceWeights::uniform(2), cfg);
    FAIL("expected DivergenceError");
  } catch (const DivergenceError& e) {
    CHECK(e.step_index() >= 0);
    CHECK(e.partial_trace().steps.size() <= 50);
  }
}

TEST_CASE("optimize: stop reasons are reported") {
  const toy::QuadraticToy quad({0.0, 0.0}, {2.0, 0.0});
  TrainConfig cfg;
  cfg.learning_rate = 0.25;
  cfg.max_steps = 2000;
  cfg.patience = 50;
  cfg.stationarity_tol = 1e-12;
  cfg.init_seed = 3;
  CHECK(optimize(quad, PreferenceWeights::uniform(2), cfg).trace.stop_reason ==
        StopReason::stationary);
  cfg.max_steps = 2;
  CHECK(optimize(quad, PreferenceWeights::uniform(2), cfg).trace.stop_reason ==
        StopReason::step_limit);
}

TEST_CASE("TrainConfig validation") {
  TrainConfig cfg;
  cfg.learning_rate = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ContractViolation);
  cfg.learning_rate = 0.1;
  cfg.max_steps = 0;
  CHECK_THROWS_AS(cfg.validate(), ContractViolation);
  cfg.max_steps = 10;
  cfg.patience = 0;
  CHECK_THROWS_AS(cfg.validate(), ContractViolation);
}
