#pragma once

#include <cstdint>
#include <string>

#include "moo/mgda.hpp"

namespace moo::forecast {

/// Windowed samples: each sample holds k feature steps (flattened step-major,
/// feat_dim values per step) and g nonnegative demand targets.
struct SeriesBatch {
  std::size_t k = 0;
  std::size_t g = 0;
  std::size_t feat_dim = 0;

  struct Sample {
    Vec features;  // k * feat_dim
    Vec targets;   // g
  };
  std::vector<Sample> samples;

  std::size_t input_dim() const { return k * feat_dim; }
  void validate() const;
};

enum class ModelKind { linear, feedforward };

struct ModelSpec {
  ModelKind kind = ModelKind::linear;
  std::size_t hidden = 16;   // feedforward only
  bool standardize = true;   // standardize inputs with training-split stats
};

/// Per-feature affine input normalization fitted on the training split.
struct Standardizer {
  Vec mean;
  Vec inv_sd;

  static Standardizer fit(const SeriesBatch& train);
  static Standardizer identity(std::size_t dim);
  void apply(const Vec& in, Vec& out) const;
};

/// Differentiable map from a feature window to g forecasts. Parameters live
/// in one flat vector; forward and the parameter-space pullback are exact.
class Model {
 public:
  Model(ModelSpec spec, std::size_t input_dim, std::size_t output_dim, Standardizer std);

  std::size_t param_dim() const;
  std::size_t output_dim() const { return out_dim_; }
  const ModelSpec& spec() const { return spec_; }

  ParamVector init_params(std::uint64_t seed) const;

  /// Predictions for every sample; deterministic in (params, batch).
  std::vector<Vec> forward(const ParamVector& params, const SeriesBatch& batch) const;

  /// Gradient of sum_n <grad_pred[n], pred[n]> with respect to the parameters.
  Vec backprop(const ParamVector& params, const SeriesBatch& batch,
               const std::vector<Vec>& grad_pred) const;

 private:
  ModelSpec spec_;
  std::size_t in_dim_;
  std::size_t out_dim_;
  Standardizer std_;
};

// Losses over all samples and horizon steps (sums, not means).

double loss_mse(const std::vector<Vec>& y, const std::vector<Vec>& yhat);
std::vector<Vec> loss_mse_grad(const std::vector<Vec>& y, const std::vector<Vec>& yhat);

/// Pinball loss sum_n sum_t max(q (y - yhat), (q - 1)(y - yhat)). At q = 0.9
/// an underforecast costs nine times an overforecast.
double loss_qrl(const std::vector<Vec>& y, const std::vector<Vec>& yhat, double q);
/// Subgradient wrt yhat: -q below the target, (1 - q) above, 0 at equality.
std::vector<Vec> loss_qrl_grad(const std::vector<Vec>& y, const std::vector<Vec>& yhat, double q);

// Horizon-total metrics in [0, 1]; forecasts are clamped to >= 0 before
// totaling and series with zero actual demand drop out of both sums.
// All-zero demand raises UndefinedMetricError.

/// Volume-weighted min/max ratio of actual vs forecast horizon totals;
/// exactly 1 at a perfect forecast.
double metric_acc(const std::vector<Vec>& y, const std::vector<Vec>& yhat);

/// Volume-weighted fill rate: fulfilled demand over total demand, each series
/// capped at full fulfillment.
double metric_sl(const std::vector<Vec>& y, const std::vector<Vec>& yhat);

/// Objective order for the demand task: (squared error -> accuracy) first,
/// (pinball at quantile q -> service level) second. Raising a preference
/// weight pushes the paired metric up.
struct LossMetricBinding {
  double quantile = 0.9;

  void validate() const;
  static constexpr std::size_t objective_count() { return 2; }
};

/// Per-objective gradients of the averaged losses (1/N scaling applied here),
/// backpropagated through the model. Non-finite gradients raise
/// DivergenceError.
GradientSet objective_gradients(const Model& model, const ParamVector& params,
                                const SeriesBatch& batch, const LossMetricBinding& binding);

/// Training context for the demand task: losses and gradients on the training
/// batch, accuracy and service level on the evaluation batch.
class ForecastProblem final : public Problem {
 public:
  ForecastProblem(ModelSpec spec, SeriesBatch train, SeriesBatch eval, LossMetricBinding binding);

  std::size_t objective_count() const override { return LossMetricBinding::objective_count(); }
  std::size_t param_dim() const override { return model_.param_dim(); }
  ParamVector initial_params(std::uint64_t seed) const override;
  ObjectiveValues losses(const ParamVector& theta) const override;
  GradientSet gradients(const ParamVector& theta) const override;
  MetricVector metrics(const ParamVector& theta) const override;

  const Model& model() const { return model_; }
  const SeriesBatch& train_batch() const { return train_; }
  const SeriesBatch& eval_batch() const { return eval_; }
  static std::vector<std::string> metric_names() { return {"acc", "sl"}; }

 private:
  SeriesBatch train_;
  SeriesBatch eval_;
  LossMetricBinding binding_;
  Model model_;
};

}  // namespace moo::forecast
