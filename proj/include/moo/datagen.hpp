#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "moo/forecast.hpp"

namespace moo::datagen {

enum class DemandClass { intermittent, smooth };

/// Synthetic weekly service-parts demand. Smooth series follow a life-cycle
/// curve (logistic growth, plateau, exponential decline) with a seasonal
/// factor and multiplicative noise; intermittent series are Bernoulli
/// occurrences with discretized lognormal sizes.
struct GenSpec {
  std::uint64_t seed = 7;
  std::size_t n_series = 24;
  std::size_t weeks = 260;  // five years
  double intermittent_fraction = 0.5;  // leading fraction of series
  // intermittent demand
  double occurrence_p = 0.3;
  double size_mu = 1.4;
  double size_sigma = 0.5;
  // smooth demand
  double level = 8.0;
  double growth_frac = 0.3;
  double maturity_frac = 0.4;  // remainder declines
  double seasonal_amplitude = 0.15;
  double noise_rel = 0.25;

  void validate() const;
};

/// Raw weekly panel: per series, one demand value and one feature row per
/// week. This is what the CSV files hold; model batches are cut from it.
struct DemandPanel {
  std::vector<std::string> feature_names;
  struct Series {
    std::string id;
    Vec demand;                 // weeks
    std::vector<Vec> features;  // weeks x feature_names.size()
  };
  std::vector<Series> series;

  std::size_t weeks() const { return series.empty() ? 0 : series.front().demand.size(); }
};

DemandPanel generate(const GenSpec& spec);

/// CSV schema: series_id,week,demand,<feature columns>; numbers at 9
/// significant digits. Malformed rows fail with the line number; negative
/// demand is rejected.
void write_csv(const DemandPanel& panel, std::ostream& out);
DemandPanel read_csv(std::istream& in);
void write_csv_file(const DemandPanel& panel, const std::string& path);
DemandPanel read_csv_file(const std::string& path);

struct SplitBatches {
  forecast::SeriesBatch train;
  forecast::SeriesBatch valid;
  forecast::SeriesBatch test;
};

/// Cut (k-step feature window, g-step target window) samples and assign each
/// window to the split holding its whole target block. Splits are contiguous
/// time blocks in an 8:1:1 ratio; inputs may reach back into earlier weeks
/// but targets never cross a split boundary, so no future week leaks into an
/// earlier split.
SplitBatches window_splits(const DemandPanel& panel, std::size_t k, std::size_t g,
                           std::size_t stride);

}  // namespace moo::datagen
