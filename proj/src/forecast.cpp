#include "moo/forecast.hpp"

#include <algorithm>
#include <cmath>

#include "moo/rng.hpp"

namespace moo::forecast {

void SeriesBatch::validate() const {
  if (k == 0 || g == 0 || feat_dim == 0)
    throw ContractViolation("SeriesBatch: k, g and feat_dim must be positive");
  for (const Sample& s : samples) {
    if (s.features.size() != k * feat_dim)
      throw ContractViolation("SeriesBatch: feature window size mismatch");
    if (s.targets.size() != g) throw ContractViolation("SeriesBatch: target window size mismatch");
    if (!all_finite(s.features) || !all_finite(s.targets))
      throw ContractViolation("SeriesBatch: non-finite value");
    for (double t : s.targets) {
      if (t < 0.0) throw ContractViolation("SeriesBatch: negative demand target");
    }
  }
}

Standardizer Standardizer::fit(const SeriesBatch& train) {
  const std::size_t dim = train.feat_dim;
  Standardizer s;
  s.mean.assign(dim, 0.0);
  s.inv_sd.assign(dim, 1.0);
  std::size_t count = 0;
  for (const auto& sample : train.samples) {
    for (std::size_t step = 0; step < train.k; ++step) {
      for (std::size_t f = 0; f < dim; ++f) s.mean[f] += sample.features[step * dim + f];
    }
    count += train.k;
  }
  if (count == 0) return s;
  for (double& m : s.mean) m /= static_cast<double>(count);
  Vec var(dim, 0.0);
  for (const auto& sample : train.samples) {
    for (std::size_t step = 0; step < train.k; ++step) {
      for (std::size_t f = 0; f < dim; ++f) {
        const double d = sample.features[step * dim + f] - s.mean[f];
        var[f] += d * d;
      }
    }
  }
  for (std::size_t f = 0; f < dim; ++f) {
    const double sd = std::sqrt(var[f] / static_cast<double>(count));
    s.inv_sd[f] = (sd > 1e-9) ? 1.0 / sd : 1.0;
  }
  return s;
}

Standardizer Standardizer::identity(std::size_t dim) {
  Standardizer s;
  s.mean.assign(dim, 0.0);
  s.inv_sd.assign(dim, 1.0);
  return s;
}

void Standardizer::apply(const Vec& in, Vec& out) const {
  const std::size_t dim = mean.size();
  out.resize(in.size());
  for (std::size_t i = 0; i < in.size(); ++i) {
    const std::size_t f = i % dim;
    out[i] = (in[i] - mean[f]) * inv_sd[f];
  }
}

Model::Model(ModelSpec spec, std::size_t input_dim, std::size_t output_dim, Standardizer std_in)
    : spec_(spec), in_dim_(input_dim), out_dim_(output_dim), std_(std::move(std_in)) {
  if (in_dim_ == 0 || out_dim_ == 0) throw ContractViolation("Model: zero dimension");
  if (spec_.kind == ModelKind::feedforward && spec_.hidden == 0)
    throw ContractViolation("Model: feedforward needs hidden > 0");
}

std::size_t Model::param_dim() const {
  if (spec_.kind == ModelKind::linear) return out_dim_ * (in_dim_ + 1);
  return spec_.hidden * (in_dim_ + 1) + out_dim_ * (spec_.hidden + 1);
}

ParamVector Model::init_params(std::uint64_t seed) const {
  Rng rng(seed ^ 0xabcdef1234567891ULL);
  Vec p(param_dim());
  const double s1 = 1.0 / std::sqrt(static_cast<double>(in_dim_));
  if (spec_.kind == ModelKind::linear) {
    for (double& v : p) v = rng.uniform(-s1, s1) * 0.1;
    return ParamVector(std::move(p));
  }
  const std::size_t w1 = spec_.hidden * (in_dim_ + 1);
  const double s2 = 1.0 / std::sqrt(static_cast<double>(spec_.hidden));
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = (i < w1) ? rng.uniform(-s1, s1) : rng.uniform(-s2, s2);
  }
  return ParamVector(std::move(p));
}

std::vector<Vec> Model::forward(const ParamVector& params, const SeriesBatch& batch) const {
  if (params.dim() != param_dim()) throw ContractViolation("Model::forward: parameter mismatch");
  if (batch.input_dim() != in_dim_ || batch.g != out_dim_)
    throw ContractViolation("Model::forward: batch shape mismatch");
  const Vec& p = params.values();
  std::vector<Vec> preds(batch.samples.size());

  Vec x;
  if (spec_.kind == ModelKind::linear) {
    // p = [W (out x in) row-major, b (out)]
    const std::size_t bias_off = out_dim_ * in_dim_;
    for (std::size_t n = 0; n < batch.samples.size(); ++n) {
      if (spec_.standardize) {
        std_.apply(batch.samples[n].features, x);
      } else {
        x = batch.samples[n].features;
      }
      Vec& out = preds[n];
      out.assign(out_dim_, 0.0);
      for (std::size_t o = 0; o < out_dim_; ++o) {
        double acc = p[bias_off + o];
        const double* row = &p[o * in_dim_];
        for (std::size_t i = 0; i < in_dim_; ++i) acc += row[i] * x[i];
        out[o] = acc;
      }
    }
    return preds;
  }

  // feedforward: p = [W1 (h x in), b1 (h), W2 (out x h), b2 (out)]
  const std::size_t h = spec_.hidden;
  const std::size_t w1_off = 0;
  const std::size_t b1_off = h * in_dim_;
  const std::size_t w2_off = b1_off + h;
  const std::size_t b2_off = w2_off + out_dim_ * h;
  Vec hidden(h);
  for (std::size_t n = 0; n < batch.samples.size(); ++n) {
    if (spec_.standardize) {
      std_.apply(batch.samples[n].features, x);
    } else {
      x = batch.samples[n].features;
    }
    for (std::size_t j = 0; j < h; ++j) {
      double acc = p[b1_off + j];
      const double* row = &p[w1_off + j * in_dim_];
      for (std::size_t i = 0; i < in_dim_; ++i) acc += row[i] * x[i];
      hidden[j] = std::tanh(acc);
    }
    Vec& out = preds[n];
    out.assign(out_dim_, 0.0);
    for (std::size_t o = 0; o < out_dim_; ++o) {
      double acc = p[b2_off + o];
      const double* row = &p[w2_off + o * h];
      for (std::size_t j = 0; j < h; ++j) acc += row[j] * hidden[j];
      out[o] = acc;
    }
  }
  return preds;
}

Vec Model::backprop(const ParamVector& params, const SeriesBatch& batch,
                    const std::vector<Vec>& grad_pred) const {
  if (grad_pred.size() != batch.samples.size())
    throw ContractViolation("Model::backprop: gradient count mismatch");
  const Vec& p = params.values();
  Vec grad(param_dim(), 0.0);

  Vec x;
  if (spec_.kind == ModelKind::linear) {
    const std::size_t bias_off = out_dim_ * in_dim_;
    for (std::size_t n = 0; n < batch.samples.size(); ++n) {
      if (spec_.standardize) {
        std_.apply(batch.samples[n].features, x);
      } else {
        x = batch.samples[n].features;
      }
      const Vec& gp = grad_pred[n];
      for (std::size_t o = 0; o < out_dim_; ++o) {
        const double go = gp[o];
        if (go == 0.0) continue;
        double* row = &grad[o * in_dim_];
        for (std::size_t i = 0; i < in_dim_; ++i) row[i] += go * x[i];
        grad[bias_off + o] += go;
      }
    }
    return grad;
  }

  const std::size_t h = spec_.hidden;
  const std::size_t b1_off = h * in_dim_;
  const std::size_t w2_off = b1_off + h;
  const std::size_t b2_off = w2_off + out_dim_ * h;
  Vec hidden(h);
  Vec pre_tanh_grad(h);
  for (std::size_t n = 0; n < batch.samples.size(); ++n) {
    if (spec_.standardize) {
      std_.apply(batch.samples[n].features, x);
    } else {
      x = batch.samples[n].features;
    }
    for (std::size_t j = 0; j < h; ++j) {
      double acc = p[b1_off + j];
      const double* row = &p[j * in_dim_];
      for (std::size_t i = 0; i < in_dim_; ++i) acc += row[i] * x[i];
      hidden[j] = std::tanh(acc);
    }
    const Vec& gp = grad_pred[n];
    std::fill(pre_tanh_grad.begin(), pre_tanh_grad.end(), 0.0);
    for (std::size_t o = 0; o < out_dim_; ++o) {
      const double go = gp[o];
      if (go == 0.0) continue;
      double* w2row = &grad[w2_off + o * h];
      const double* w2p = &p[w2_off + o * h];
      for (std::size_t j = 0; j < h; ++j) {
        w2row[j] += go * hidden[j];
        pre_tanh_grad[j] += go * w2p[j];
      }
      grad[b2_off + o] += go;
    }
    for (std::size_t j = 0; j < h; ++j) {
      const double gj = pre_tanh_grad[j] * (1.0 - hidden[j] * hidden[j]);
      if (gj == 0.0) continue;
      double* w1row = &grad[j * in_dim_];
      for (std::size_t i = 0; i < in_dim_; ++i) w1row[i] += gj * x[i];
      grad[b1_off + j] += gj;
    }
  }
  return grad;
}

namespace {

void check_shapes(const std::vector<Vec>& y, const std::vector<Vec>& yhat) {
  if (y.size() != yhat.size()) throw ContractViolation("loss: sample count mismatch");
  for (std::size_t n = 0; n < y.size(); ++n) {
    if (y[n].size() != yhat[n].size()) throw ContractViolation("loss: horizon length mismatch");
  }
}

}  // namespace

double loss_mse(const std::vector<Vec>& y, const std::vector<Vec>& yhat) {
  check_shapes(y, yhat);
  double total = 0.0;
  for (std::size_t n = 0; n < y.size(); ++n) {
    for (std::size_t t = 0; t < y[n].size(); ++t) {
      const double d = y[n][t] - yhat[n][t];
      total += d * d;
    }
  }
  return total;
}

std::vector<Vec> loss_mse_grad(const std::vector<Vec>& y, const std::vector<Vec>& yhat) {
  check_shapes(y, yhat);
  std::vector<Vec> g(y.size());
  for (std::size_t n = 0; n < y.size(); ++n) {
    g[n].resize(y[n].size());
    for (std::size_t t = 0; t < y[n].size(); ++t) g[n][t] = 2.0 * (yhat[n][t] - y[n][t]);
  }
  return g;
}

double loss_qrl(const std::vector<Vec>& y, const std::vector<Vec>& yhat, double q) {
  check_shapes(y, yhat);
  if (!(q > 0.0 && q < 1.0)) throw ContractViolation("loss_qrl: q must be in (0, 1)");
  double total = 0.0;
  for (std::size_t n = 0; n < y.size(); ++n) {
    for (std::size_t t = 0; t < y[n].size(); ++t) {
      const double d = y[n][t] - yhat[n][t];
      total += std::max(q * d, (q - 1.0) * d);
    }
  }
  return total;
}

std::vector<Vec> loss_qrl_grad(const std::vector<Vec>& y, const std::vector<Vec>& yhat, double q) {
  check_shapes(y, yhat);
  if (!(q > 0.0 && q < 1.0)) throw ContractViolation("loss_qrl: q must be in (0, 1)");
  std::vector<Vec> g(y.size());
  for (std::size_t n = 0; n < y.size(); ++n) {
    g[n].resize(y[n].size());
    for (std::size_t t = 0; t < y[n].size(); ++t) {
      const double d = y[n][t] - yhat[n][t];
      if (d > 0.0) {
        g[n][t] = -q;  // underforecast
      } else if (d < 0.0) {
        g[n][t] = 1.0 - q;  // overforecast
      } else {
        g[n][t] = 0.0;
      }
    }
  }
  return g;
}

namespace {

struct SeriesTotals {
  double actual;
  double forecast;  // clamped to >= 0 per step
};

std::vector<SeriesTotals> horizon_totals(const std::vector<Vec>& y, const std::vector<Vec>& yhat) {
  check_shapes(y, yhat);
  std::vector<SeriesTotals> totals;
  totals.reserve(y.size());
  for (std::size_t n = 0; n < y.size(); ++n) {
    SeriesTotals t{0.0, 0.0};
    for (std::size_t i = 0; i < y[n].size(); ++i) {
      t.actual += y[n][i];
      t.forecast += std::max(0.0, yhat[n][i]);
    }
    totals.push_back(t);
  }
  return totals;
}

}  // namespace

double metric_acc(const std::vector<Vec>& y, const std::vector<Vec>& yhat) {
  double num = 0.0;
  double den = 0.0;
  for (const SeriesTotals& t : horizon_totals(y, yhat)) {
    if (t.actual <= 0.0) continue;  // zero-demand series carry zero volume weight
    num += t.actual * std::min(t.actual, t.forecast);
    den += t.actual * std::max(t.actual, t.forecast);
  }
  if (den <= 0.0) throw UndefinedMetricError("metric_acc: no series with positive demand");
  return num / den;
}

double metric_sl(const std::vector<Vec>& y, const std::vector<Vec>& yhat) {
  double fulfilled = 0.0;
  double total = 0.0;
  for (const SeriesTotals& t : horizon_totals(y, yhat)) {
    if (t.actual <= 0.0) continue;
    fulfilled += std::min(t.actual, t.forecast);
    total += t.actual;
  }
  if (total <= 0.0) throw UndefinedMetricError("metric_sl: no series with positive demand");
  return fulfilled / total;
}

void LossMetricBinding::validate() const {
  if (!(quantile > 0.0 && quantile < 1.0))
    throw ContractViolation("LossMetricBinding: quantile must be in (0, 1)");
}

GradientSet objective_gradients(const Model& model, const ParamVector& params,
                                const SeriesBatch& batch, const LossMetricBinding& binding) {
  binding.validate();
  if (batch.samples.empty()) throw ContractViolation("objective_gradients: empty batch");
  const double inv_n = 1.0 / static_cast<double>(batch.samples.size());

  const std::vector<Vec> preds = model.forward(params, batch);
  std::vector<Vec> targets(batch.samples.size());
  for (std::size_t n = 0; n < batch.samples.size(); ++n) targets[n] = batch.samples[n].targets;

  Vec g_mse = model.backprop(params, batch, loss_mse_grad(targets, preds));
  Vec g_qrl = model.backprop(params, batch, loss_qrl_grad(targets, preds, binding.quantile));
  for (double& v : g_mse) v *= inv_n;
  for (double& v : g_qrl) v *= inv_n;
  if (!all_finite(g_mse) || !all_finite(g_qrl))
    throw DivergenceError("objective_gradients: non-finite gradient", -1);
  return GradientSet({std::move(g_mse), std::move(g_qrl)});
}

ForecastProblem::ForecastProblem(ModelSpec spec, SeriesBatch train, SeriesBatch eval,
                                 LossMetricBinding binding)
    : train_(std::move(train)),
      eval_(std::move(eval)),
      binding_(binding),
      model_(spec, train_.input_dim(), train_.g,
             spec.standardize ? Standardizer::fit(train_) : Standardizer::identity(train_.feat_dim)) {
  train_.validate();
  eval_.validate();
  binding_.validate();
  if (train_.samples.empty() || eval_.samples.empty())
    throw ContractViolation("ForecastProblem: empty split");
  if (eval_.input_dim() != train_.input_dim() || eval_.g != train_.g)
    throw ContractViolation("ForecastProblem: train/eval window shape mismatch");
}

ParamVector ForecastProblem::initial_params(std::uint64_t seed) const {
  return model_.init_params(seed);
}

ObjectiveValues ForecastProblem::losses(const ParamVector& theta) const {
  const std::vector<Vec> preds = model_.forward(theta, train_);
  std::vector<Vec> targets(train_.samples.size());
  for (std::size_t n = 0; n < train_.samples.size(); ++n) targets[n] = train_.samples[n].targets;
  const double inv_n = 1.0 / static_cast<double>(train_.samples.size());
  return ObjectiveValues({loss_mse(targets, preds) * inv_n,
                          loss_qrl(targets, preds, binding_.quantile) * inv_n});
}

GradientSet ForecastProblem::gradients(const ParamVector& theta) const {
  return objective_gradients(model_, theta, train_, binding_);
}

MetricVector ForecastProblem::metrics(const ParamVector& theta) const {
  const std::vector<Vec> preds = model_.forward(theta, eval_);
  std::vector<Vec> targets(eval_.samples.size());
  for (std::size_t n = 0; n < eval_.samples.size(); ++n) targets[n] = eval_.samples[n].targets;
  return MetricVector({metric_acc(targets, preds), metric_sl(targets, preds)});
}

}  // namespace moo::forecast
