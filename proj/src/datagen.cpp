#include "moo/datagen.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "moo/rng.hpp"
#include "moo/textio.hpp"

namespace moo::datagen {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// Life-cycle timing drawn per series. Different parts are at different
// phases in any calendar week, so contiguous time splits stay comparable.
struct Lifecycle {
  double level;
  double growth_end;
  double maturity_end;
  double decline_tau;

  static Lifecycle draw(const GenSpec& spec, Rng& rng) {
    const double weeks = static_cast<double>(spec.weeks);
    Lifecycle lc;
    lc.level = spec.level * std::exp(0.3 * rng.normal());
    lc.growth_end = weeks * spec.growth_frac * rng.uniform(0.5, 1.5);
    lc.maturity_end = lc.growth_end + weeks * spec.maturity_frac * rng.uniform(0.5, 1.5);
    lc.decline_tau = std::max((weeks - lc.maturity_end) / 2.5, 4.0);
    return lc;
  }

  double at(double w) const {
    if (w < growth_end) {
      const double mid = 0.5 * growth_end;
      const double rate = 8.0 / std::max(growth_end, 1.0);
      return level / (1.0 + std::exp(-rate * (w - mid)));
    }
    if (w < maturity_end) return level;
    return level * std::exp(-(w - maturity_end) / decline_tau);
  }

  double phase_code(double w) const {
    if (w < growth_end) return 0.0;
    if (w < maturity_end) return 0.5;
    return 1.0;
  }
};

}  // namespace

void GenSpec::validate() const {
  if (n_series == 0) throw ContractViolation("GenSpec: n_series must be >= 1");
  if (weeks < 2) throw ContractViolation("GenSpec: weeks must be >= 2");
  if (!(occurrence_p > 0.0 && occurrence_p <= 1.0))
    throw ContractViolation("GenSpec: occurrence_p must be in (0, 1]");
  if (intermittent_fraction < 0.0 || intermittent_fraction > 1.0)
    throw ContractViolation("GenSpec: intermittent_fraction must be in [0, 1]");
  if (size_sigma < 0.0) throw ContractViolation("GenSpec: size_sigma must be >= 0");
  if (!(level > 0.0)) throw ContractViolation("GenSpec: level must be > 0");
  if (growth_frac < 0.0 || maturity_frac < 0.0 || growth_frac + maturity_frac > 1.0)
    throw ContractViolation("GenSpec: phase fractions must be nonnegative and sum to <= 1");
  if (noise_rel < 0.0) throw ContractViolation("GenSpec: noise_rel must be >= 0");
  if (seasonal_amplitude < 0.0 || seasonal_amplitude >= 1.0)
    throw ContractViolation("GenSpec: seasonal_amplitude must be in [0, 1)");
}

DemandPanel generate(const GenSpec& spec) {
  spec.validate();
  DemandPanel panel;
  panel.feature_names = {"lag1", "woy_sin", "woy_cos", "phase"};

  const auto n_intermittent =
      static_cast<std::size_t>(std::round(spec.intermittent_fraction *
                                          static_cast<double>(spec.n_series)));
  for (std::size_t s = 0; s < spec.n_series; ++s) {
    // one stream per series so edits to one series never shift another
    Rng rng(spec.seed * 1000003ULL + s);
    const bool intermittent = s < n_intermittent;
    const Lifecycle lc = Lifecycle::draw(spec, rng);

    DemandPanel::Series row;
    row.id = (intermittent ? "i" : "s") + std::to_string(s);
    row.demand.resize(spec.weeks);
    row.features.resize(spec.weeks);

    for (std::size_t w = 0; w < spec.weeks; ++w) {
      double d = 0.0;
      if (intermittent) {
        if (rng.bernoulli(spec.occurrence_p)) {
          d = std::max(1.0, std::round(rng.lognormal(spec.size_mu, spec.size_sigma)));
        }
      } else {
        const double season =
            1.0 + spec.seasonal_amplitude * std::sin(kTwoPi * static_cast<double>(w % 52) / 52.0);
        const double base = lc.at(static_cast<double>(w)) * season;
        d = std::max(0.0, base * (1.0 + spec.noise_rel * rng.normal()));
      }
      row.demand[w] = d;
      row.features[w] = {w > 0 ? row.demand[w - 1] : 0.0,
                         std::sin(kTwoPi * static_cast<double>(w % 52) / 52.0),
                         std::cos(kTwoPi * static_cast<double>(w % 52) / 52.0),
                         lc.phase_code(static_cast<double>(w))};
    }
    panel.series.push_back(std::move(row));
  }
  return panel;
}

void write_csv(const DemandPanel& panel, std::ostream& out) {
  out << "series_id,week,demand";
  for (const std::string& f : panel.feature_names) out << "," << f;
  out << "\n";
  for (const auto& s : panel.series) {
    for (std::size_t w = 0; w < s.demand.size(); ++w) {
      out << s.id << "," << w << "," << fmt_g9(s.demand[w]);
      for (double f : s.features[w]) out << "," << fmt_g9(f);
      out << "\n";
    }
  }
}

DemandPanel read_csv(std::istream& in) {
  DemandPanel panel;
  std::string line;
  if (!std::getline(in, line)) throw ParseError("csv line 1: missing header");
  {
    const std::vector<std::string> head = split(trim(line), ',');
    if (head.size() < 3 || head[0] != "series_id" || head[1] != "week" || head[2] != "demand")
      throw ParseError("csv line 1: header must start with series_id,week,demand");
    panel.feature_names.assign(head.begin() + 3, head.end());
  }
  const std::size_t feat_dim = panel.feature_names.size();

  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string row = trim(line);
    if (row.empty()) continue;
    const std::string ctx = "csv line " + std::to_string(line_no);
    const std::vector<std::string> cells = split(row, ',');
    if (cells.size() != 3 + feat_dim)
      throw ParseError(ctx + ": expected " + std::to_string(3 + feat_dim) + " columns, got " +
                       std::to_string(cells.size()));

    const std::string& id = cells[0];
    const long week = parse_long(cells[1], ctx);
    const double demand = parse_double(cells[2], ctx);
    if (demand < 0.0) throw ParseError(ctx + ": negative demand");

    if (panel.series.empty() || panel.series.back().id != id) {
      for (const auto& s : panel.series) {
        if (s.id == id) throw ParseError(ctx + ": series '" + id + "' rows are not contiguous");
      }
      panel.series.push_back(DemandPanel::Series{id, {}, {}});
    }
    DemandPanel::Series& s = panel.series.back();
    if (week != static_cast<long>(s.demand.size()))
      throw ParseError(ctx + ": expected week " + std::to_string(s.demand.size()) +
                       " for series '" + id + "'");
    s.demand.push_back(demand);
    Vec feats(feat_dim);
    for (std::size_t f = 0; f < feat_dim; ++f) feats[f] = parse_double(cells[3 + f], ctx);
    s.features.push_back(std::move(feats));
  }

  // ragged panels break windowing downstream, reject them here
  for (const auto& s : panel.series) {
    if (s.demand.size() != panel.weeks())
      throw ParseError("csv: series '" + s.id + "' has " + std::to_string(s.demand.size()) +
                       " weeks, expected " + std::to_string(panel.weeks()));
  }
  return panel;
}

void write_csv_file(const DemandPanel& panel, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot open '" + path + "' for writing");
  write_csv(panel, out);
  if (!out) throw ParseError("write failed for '" + path + "'");
}

DemandPanel read_csv_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  return read_csv(in);
}

SplitBatches window_splits(const DemandPanel& panel, std::size_t k, std::size_t g,
                           std::size_t stride) {
  if (k == 0 || g == 0 || stride == 0)
    throw ContractViolation("window_splits: k, g and stride must be positive");
  const std::size_t weeks = panel.weeks();
  if (weeks < k + g) throw ContractViolation("window_splits: panel shorter than k + g weeks");
  const std::size_t feat_dim = panel.feature_names.size();
  if (feat_dim == 0) throw ContractViolation("window_splits: panel has no features");

  // contiguous 8:1:1 time blocks, by target location
  const std::size_t valid_start = (weeks * 8) / 10;
  const std::size_t test_start = (weeks * 9) / 10;

  SplitBatches out;
  for (forecast::SeriesBatch* b : {&out.train, &out.valid, &out.test}) {
    b->k = k;
    b->g = g;
    b->feat_dim = feat_dim;
  }

  for (const auto& s : panel.series) {
    for (std::size_t start = 0; start + k + g <= weeks; start += stride) {
      const std::size_t target_begin = start + k;
      const std::size_t target_end = target_begin + g;  // exclusive

      forecast::SeriesBatch* dest = nullptr;
      if (target_end <= valid_start) {
        dest = &out.train;
      } else if (target_begin >= valid_start && target_end <= test_start) {
        dest = &out.valid;
      } else if (target_begin >= test_start) {
        dest = &out.test;
      } else {
        continue;  // straddles a boundary
      }

      forecast::SeriesBatch::Sample sample;
      sample.features.reserve(k * feat_dim);
      for (std::size_t w = start; w < start + k; ++w) {
        sample.features.insert(sample.features.end(), s.features[w].begin(), s.features[w].end());
      }
      sample.targets.assign(s.demand.begin() + static_cast<std::ptrdiff_t>(target_begin),
                            s.demand.begin() + static_cast<std::ptrdiff_t>(target_end));
      dest->samples.push_back(std::move(sample));
    }
  }
  return out;
}

}  // namespace moo::datagen
