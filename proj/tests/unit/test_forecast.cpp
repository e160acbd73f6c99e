#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "moo/forecast.hpp"
#include "moo/rng.hpp"
#include "support/oracles.hpp"

using namespace moo;
using namespace moo::forecast;

namespace {

SeriesBatch tiny_batch() {
  SeriesBatch b;
  b.k = 2;
  b.g = 2;
  b.feat_dim = 1;
  b.samples.push_back({{1.0, 2.0}, {3.0, 4.0}});
  b.samples.push_back({{0.5, 1.5}, {2.0, 1.0}});
  return b;
}

SeriesBatch random_batch(Rng& rng, std::size_t n, std::size_t k, std::size_t g, std::size_t f) {
  SeriesBatch b;
  b.k = k;
  b.g = g;
  b.feat_dim = f;
  for (std::size_t i = 0; i < n; ++i) {
    SeriesBatch::Sample s;
    for (std::size_t j = 0; j < k * f; ++j) s.features.push_back(rng.uniform(-2.0, 2.0));
    for (std::size_t j = 0; j < g; ++j) s.targets.push_back(rng.uniform(0.0, 5.0));
    b.samples.push_back(std::move(s));
  }
  return b;
}

}  // namespace

TEST_CASE("forward: zero parameters give zero predictions") {
  const SeriesBatch b = tiny_batch();
  const Model model({ModelKind::linear, 16, true}, b.input_dim(), b.g, Standardizer::fit(b));
  const auto preds = model.forward(ParamVector(Vec(model.param_dim(), 0.0)), b);
  for (const Vec& p : preds) {
    for (double v : p) CHECK(v == 0.0);
  }
}

TEST_CASE("forward: constructed weights pass a feature through") {
  SeriesBatch b;
  b.k = 2;
  b.g = 1;
  b.feat_dim = 1;
  b.samples.push_back({{7.0, 3.0}, {0.0}});
  const Model model({ModelKind::linear, 16, false}, 2, 1, Standardizer::identity(1));
  // one output row [w00 w01] + bias: select the first input feature
  Vec p(model.param_dim(), 0.0);
  p[0] = 1.0;
  const auto preds = model.forward(ParamVector(p), b);
  CHECK(preds[0][0] == doctest::Approx(7.0));
}

TEST_CASE("forward: identical inputs give bitwise-identical predictions") {
  Rng rng(5);
  const SeriesBatch b = random_batch(rng, 4, 3, 2, 2);
  for (ModelKind kind : {ModelKind::linear, ModelKind::feedforward}) {
    const Model model({kind, 8, true}, b.input_dim(), b.g, Standardizer::fit(b));
    const ParamVector params = model.init_params(12);
    const auto p1 = model.forward(params, b);
    const auto p2 = model.forward(params, b);
    for (std::size_t i = 0; i < p1.size(); ++i) {
      for (std::size_t j = 0; j < p1[i].size(); ++j) CHECK(p1[i][j] == p2[i][j]);
    }
    // init is a pure function of the seed
    const ParamVector again = model.init_params(12);
    for (std::size_t i = 0; i < params.dim(); ++i)
      CHECK(params.values()[i] == again.values()[i]);
  }
}

TEST_CASE("loss_mse: pinned values and gradient") {
  CHECK(loss_mse({{1.0, 2.0}}, {{1.0, 2.0}}) == 0.0);
  CHECK(loss_mse({{0.0, 0.0}}, {{1.0, 1.0}}) == doctest::Approx(2.0));
  const auto g = loss_mse_grad({{1.0}}, {{3.0}});
  CHECK(g[0][0] == doctest::Approx(4.0));
}

TEST_CASE("loss_qrl: asymmetry prefers overstock at q = 0.9") {
  CHECK(loss_qrl({{1.0}}, {{0.0}}, 0.9) == 0.9);
  CHECK(loss_qrl({{0.0}}, {{1.0}}, 0.9) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(loss_qrl({{2.5}}, {{2.5}}, 0.9) == 0.0);
}

TEST_CASE("loss_qrl: subgradient convention") {
  const auto g = loss_qrl_grad({{1.0, 0.0, 2.0}}, {{0.0, 1.0, 2.0}}, 0.9);
  CHECK(g[0][0] == doctest::Approx(-0.9));
  CHECK(g[0][1] == doctest::Approx(0.1));
  CHECK(g[0][2] == 0.0);
}

TEST_CASE("loss_qrl at q = 0.5 equals half the L1 loss") {
  Rng rng(6);
  for (int trial = 0; trial < 30; ++trial) {
    const SeriesBatch b = random_batch(rng, 3, 2, 3, 1);
    std::vector<Vec> y, yhat;
    double l1 = 0.0;
    for (const auto& s : b.samples) {
      y.push_back(s.targets);
      Vec p(s.targets.size());
      for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = s.targets[i] + rng.uniform(-3.0, 3.0);
        l1 += std::fabs(s.targets[i] - p[i]);
      }
      yhat.push_back(std::move(p));
    }
    CHECK(loss_qrl(y, yhat, 0.5) == doctest::Approx(0.5 * l1).epsilon(1e-12));
  }
}

TEST_CASE("metric_acc: pinned examples") {
  CHECK(metric_acc({{10.0}}, {{10.0}}) == doctest::Approx(1.0));
  CHECK(metric_acc({{10.0}}, {{5.0}}) == doctest::Approx(0.5));
  CHECK(metric_acc({{10.0}, {20.0}}, {{5.0}, {20.0}}) == doctest::Approx(0.9));
}

TEST_CASE("metric_sl: pinned examples") {
  CHECK(metric_sl({{10.0}}, {{15.0}}) == doctest::Approx(1.0));
  CHECK(metric_sl({{10.0}}, {{5.0}}) == doctest::Approx(0.5));
  CHECK(metric_sl({{10.0}, {20.0}}, {{5.0}, {20.0}}) == doctest::Approx(25.0 / 30.0));
}

TEST_CASE("metrics: zero-demand series are excluded; all-zero demand is undefined") {
  // the zero-demand series contributes nothing even with a positive forecast
  CHECK(metric_acc({{0.0}, {10.0}}, {{4.0}, {10.0}}) == doctest::Approx(1.0));
  CHECK(metric_sl({{0.0}, {10.0}}, {{4.0}, {10.0}}) == doctest::Approx(1.0));
  CHECK_THROWS_AS(metric_acc({{0.0}, {0.0}}, {{1.0}, {2.0}}), UndefinedMetricError);
  CHECK_THROWS_AS(metric_sl({{0.0}}, {{1.0}}), UndefinedMetricError);
}

TEST_CASE("metrics: negative forecasts clamp to zero before totaling") {
  CHECK(metric_sl({{10.0}}, {{-5.0}}) == doctest::Approx(0.0));
  CHECK(metric_acc({{10.0}}, {{-5.0}}) == doctest::Approx(0.0));
  // a negative step inside the horizon only cancels what remains positive
  CHECK(metric_sl({{5.0, 5.0}}, {{8.0, -3.0}}) == doctest::Approx(0.8));
}

TEST_CASE("metric bounds and perfection conditions hold on random batches") {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 4;
    std::vector<Vec> y(n), yhat(n);
    bool perfect = true;
    bool covered = true;
    for (std::size_t i = 0; i < n; ++i) {
      double ty = 0.0, th = 0.0;
      y[i].push_back(rng.uniform(0.1, 10.0));
      yhat[i].push_back(rng.uniform(0.0, 12.0));
      ty = y[i][0];
      th = yhat[i][0];
      if (std::fabs(ty - th) > 1e-12) perfect = false;
      if (th < ty) covered = false;
    }
    const double acc = metric_acc(y, yhat);
    const double sl = metric_sl(y, yhat);
    CHECK(acc >= 0.0);
    CHECK(acc <= 1.0);
    CHECK(sl >= 0.0);
    CHECK(sl <= 1.0);
    CHECK((acc == doctest::Approx(1.0)) == perfect);
    CHECK((sl == doctest::Approx(1.0)) == covered);
  }
}

TEST_CASE("service level rises with any single forecast; accuracy falls past the actual") {
  const std::vector<Vec> y = {{10.0}, {20.0}};
  CHECK(metric_sl(y, {{5.0}, {20.0}}) < metric_sl(y, {{7.0}, {20.0}}));
  CHECK(metric_acc(y, {{12.0}, {20.0}}) > metric_acc(y, {{14.0}, {20.0}}));
}

TEST_CASE("objective_gradients: rows match central finite differences") {
  Rng rng(8);
  const LossMetricBinding binding{0.9};
  for (int trial = 0; trial < 10; ++trial) {
    const SeriesBatch b = random_batch(rng, 3, 2, 2, 2);
    const ModelSpec spec{trial % 2 == 0 ? ModelKind::linear : ModelKind::feedforward, 4,
                         trial % 3 == 0};
    const Model model(spec, b.input_dim(), b.g,
                      spec.standardize ? Standardizer::fit(b) : Standardizer::identity(2));
    Vec p(model.param_dim());
    for (double& v : p) v = rng.uniform(-1.0, 1.0);
    const ParamVector params(p);

    // keep clear of pinball kinks so the difference quotient is valid
    const auto preds = model.forward(params, b);
    bool near_kink = false;
    for (std::size_t i = 0; i < b.samples.size(); ++i) {
      for (std::size_t j = 0; j < b.g; ++j)
        near_kink = near_kink || std::fabs(b.samples[i].targets[j] - preds[i][j]) < 1e-3;
    }
    if (near_kink) continue;

    const GradientSet g = objective_gradients(model, params, b, binding);
    std::vector<Vec> targets;
    for (const auto& s : b.samples) targets.push_back(s.targets);
    for (int obj = 0; obj < 2; ++obj) {
      const Vec fd = oracles::central_diff(
          [&](const Vec& x) {
            const auto pr = model.forward(ParamVector(x), b);
            const double inv_n = 1.0 / static_cast<double>(b.samples.size());
            return obj == 0 ? loss_mse(targets, pr) * inv_n
                            : loss_qrl(targets, pr, binding.quantile) * inv_n;
          },
          params.values(), 1e-5);
      CHECK(oracles::rel_row_error(g.row(obj), fd) <= 1e-4);
    }
  }
}

TEST_CASE("objective_gradients: linear model matches the normal-equation gradient") {
  Rng rng(9);
  const SeriesBatch b = random_batch(rng, 4, 2, 2, 2);
  const Model model({ModelKind::linear, 4, false}, b.input_dim(), b.g,
                    Standardizer::identity(2));
  Vec p(model.param_dim());
  for (double& v : p) v = rng.uniform(-1.0, 1.0);
  const GradientSet g = objective_gradients(model, ParamVector(p), b, LossMetricBinding{0.9});

  // d/dW of (1/N) sum ||y - (Wx + b)||^2 is (2/N) sum (pred - y) x^T
  const auto preds = model.forward(ParamVector(p), b);
  const std::size_t in_dim = b.input_dim();
  const double inv_n = 1.0 / static_cast<double>(b.samples.size());
  for (std::size_t o = 0; o < b.g; ++o) {
    for (std::size_t i = 0; i < in_dim; ++i) {
      double expect = 0.0;
      for (std::size_t n = 0; n < b.samples.size(); ++n)
        expect += 2.0 * (preds[n][o] - b.samples[n].targets[o]) * b.samples[n].features[i];
      CHECK(g.row(0)[o * in_dim + i] == doctest::Approx(expect * inv_n).epsilon(1e-9));
    }
  }
}

TEST_CASE("objective_gradients: perfect predictions zero the squared-error row") {
  SeriesBatch b;
  b.k = 1;
  b.g = 1;
  b.feat_dim = 1;
  b.samples.push_back({{2.0}, {6.0}});
  const Model model({ModelKind::linear, 4, false}, 1, 1, Standardizer::identity(1));
  // weight 3, bias 0: prediction = 6 = target
  const GradientSet g =
      objective_gradients(model, ParamVector({3.0, 0.0}), b, LossMetricBinding{0.9});
  for (double v : g.row(0)) CHECK(v == doctest::Approx(0.0));
}

TEST_CASE("SeriesBatch validation rejects negative targets and ragged windows") {
  SeriesBatch b = tiny_batch();
  b.samples[0].targets[0] = -1.0;
  CHECK_THROWS_AS(b.validate(), ContractViolation);
  SeriesBatch ragged = tiny_batch();
  ragged.samples[1].features.pop_back();
  CHECK_THROWS_AS(ragged.validate(), ContractViolation);
}

TEST_CASE("LossMetricBinding validates the quantile") {
  CHECK_THROWS_AS(LossMetricBinding{0.0}.validate(), ContractViolation);
  CHECK_THROWS_AS(LossMetricBinding{1.0}.validate(), ContractViolation);
  CHECK_NOTHROW(LossMetricBinding{0.9}.validate());
}
