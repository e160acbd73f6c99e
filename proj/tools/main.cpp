// Command-line surface for the multi-objective forecasting toolkit:
//   gen-data   synthesize a weekly demand panel CSV
//   train      one optimization run with fixed preference weights
//   frontier   a-posteriori frontier exploration (adaptive or baselines)
//   prefer     a-priori constraint-driven single solution
// Exit codes: 0 success, 1 usage/config/internal error, 2 constraints not
// satisfied. All outputs are byte-deterministic given flags and seeds.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "moo/baselines.hpp"
#include "moo/datagen.hpp"
#include "moo/posterior.hpp"
#include "moo/prior.hpp"
#include "moo/textio.hpp"
#include "moo/toy.hpp"

namespace {

using nlohmann::json;
using namespace moo;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnsatisfied = 2;

// ---------------------------------------------------------------------------
// shared problem construction

struct ProblemOptions {
  std::string data_path;
  std::string toy_name;
  std::size_t k = 26;
  std::size_t g = 26;
  std::size_t stride = 13;
  std::string model = "linear";
  double quantile = 0.9;

  // training knobs; negative means "use the per-problem default"
  double lr = -1.0;
  int steps = -1;
  int patience = -1;
  double stationarity_tol = -1.0;
  std::uint64_t seed = 1;
  bool warm_start = false;
};

void add_problem_flags(CLI::App* cmd, ProblemOptions& opt) {
  cmd->add_option("--data", opt.data_path,
                  "demand panel CSV (as written by gen-data); relative paths "
                  "also resolve against $MOO_DATA_DIR");
  cmd->add_option("--toy", opt.toy_name, "built-in problem instead of --data: quadratic|concave");
  cmd->add_option("--k", opt.k, "input window length in weeks")->capture_default_str();
  cmd->add_option("--g", opt.g, "forecast horizon in weeks")->capture_default_str();
  cmd->add_option("--stride", opt.stride, "window stride in weeks")->capture_default_str();
  cmd->add_option("--model", opt.model, "forecast model: linear|ff")->capture_default_str();
  cmd->add_option("--quantile", opt.quantile, "pinball loss quantile")->capture_default_str();
  cmd->add_option("--lr", opt.lr, "learning rate (default depends on problem)");
  cmd->add_option("--steps", opt.steps, "max optimization steps per run");
  cmd->add_option("--patience", opt.patience, "steps without metric improvement before stop");
  cmd->add_option("--stat-tol", opt.stationarity_tol, "squared min-norm stationarity threshold");
  cmd->add_option("--seed", opt.seed, "parameter init seed")->capture_default_str();
  cmd->add_flag("--warm-start", opt.warm_start, "chain exploration runs from the last solution");
}

std::string resolve_data_path(const std::string& path) {
  if (std::ifstream(path).good()) return path;
  if (!path.empty() && path.front() != '/') {
    if (const char* dir = std::getenv("MOO_DATA_DIR")) {
      const std::string joined = std::string(dir) + "/" + path;
      if (std::ifstream(joined).good()) return joined;
    }
  }
  return path;  // let the reader produce the error
}

struct BuiltProblem {
  std::unique_ptr<Problem> problem;
  std::vector<std::string> metric_names;
  TrainConfig cfg;  // problem-appropriate defaults with user overrides applied
};

BuiltProblem build_problem(const ProblemOptions& opt, std::vector<std::string>& errors) {
  BuiltProblem built;
  if (opt.data_path.empty() == opt.toy_name.empty()) {
    errors.push_back("exactly one of --data or --toy is required");
    return built;
  }

  if (!opt.toy_name.empty()) {
    if (opt.toy_name == "quadratic") {
      built.problem = std::make_unique<toy::QuadraticToy>(Vec{0.0, 0.0}, Vec{2.0, 0.0});
      built.cfg.learning_rate = 0.25;
      built.cfg.max_steps = 2000;
      built.cfg.patience = 50;
      built.cfg.stationarity_tol = 1e-12;
    } else if (opt.toy_name == "concave") {
      built.problem = std::make_unique<toy::ConcaveFrontierToy>(Vec{-1.0, 0.0}, Vec{1.0, 0.0});
      built.cfg.learning_rate = 0.4;
      built.cfg.max_steps = 3000;
      built.cfg.patience = 60;
      built.cfg.stationarity_tol = 1e-18;
    } else {
      errors.push_back("--toy must be quadratic or concave, got '" + opt.toy_name + "'");
      return built;
    }
    built.metric_names = {"m1", "m2"};
  } else {
    forecast::ModelSpec ms;
    if (opt.model == "linear") {
      ms.kind = forecast::ModelKind::linear;
    } else if (opt.model == "ff") {
      ms.kind = forecast::ModelKind::feedforward;
    } else {
      errors.push_back("--model must be linear or ff, got '" + opt.model + "'");
      return built;
    }
    if (!(opt.quantile > 0.0 && opt.quantile < 1.0)) {
      errors.push_back("--quantile must lie strictly between 0 and 1");
      return built;
    }
    try {
      const datagen::DemandPanel panel = datagen::read_csv_file(resolve_data_path(opt.data_path));
      const datagen::SplitBatches splits = datagen::window_splits(panel, opt.k, opt.g, opt.stride);
      if (splits.train.samples.empty() || splits.valid.samples.empty()) {
        errors.push_back("data yields an empty train or validation split; "
                         "lower --k/--g/--stride or generate more weeks");
        return built;
      }
      forecast::LossMetricBinding binding;
      binding.quantile = opt.quantile;
      built.problem = std::make_unique<forecast::ForecastProblem>(ms, splits.train, splits.valid,
                                                                  binding);
    } catch (const std::exception& e) {
      errors.push_back(e.what());
      return built;
    }
    built.metric_names = forecast::ForecastProblem::metric_names();
    built.cfg.learning_rate = 0.05;
    built.cfg.max_steps = 1500;
    built.cfg.patience = 40;
    built.cfg.stationarity_tol = 1e-12;
  }

  if (opt.lr > 0.0) built.cfg.learning_rate = opt.lr;
  if (opt.steps >= 0) {
    if (opt.steps == 0) {
      errors.push_back("--steps must be >= 1");
    } else {
      built.cfg.max_steps = opt.steps;
    }
  }
  if (opt.patience >= 0) {
    if (opt.patience == 0) {
      errors.push_back("--patience must be >= 1");
    } else {
      built.cfg.patience = opt.patience;
    }
  }
  if (opt.stationarity_tol > 0.0) built.cfg.stationarity_tol = opt.stationarity_tol;
  built.cfg.init_seed = opt.seed;
  built.cfg.warm_start = opt.warm_start;
  return built;
}

int fail_with(const std::vector<std::string>& errors) {
  for (const std::string& e : errors) std::cerr << "error: " << e << "\n";
  return kExitError;
}

std::ofstream open_out(const std::string& path, std::vector<std::string>& errors) {
  if (path.empty()) {
    errors.push_back("missing output path");
    return std::ofstream();
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) errors.push_back("cannot open '" + path + "' for writing");
  return out;
}

// ---------------------------------------------------------------------------
// gen-data

struct GenDataOptions {
  datagen::GenSpec spec;
  std::string klass = "mixed";
  std::string out_path;
};

int run_gen_data(GenDataOptions& opt) {
  std::vector<std::string> errors;
  if (opt.klass == "intermittent") {
    opt.spec.intermittent_fraction = 1.0;
  } else if (opt.klass == "smooth") {
    opt.spec.intermittent_fraction = 0.0;
  } else if (opt.klass != "mixed") {
    errors.push_back("--class must be intermittent, smooth or mixed");
  }
  try {
    opt.spec.validate();
  } catch (const std::exception& e) {
    errors.push_back(e.what());
  }
  if (!errors.empty()) return fail_with(errors);

  try {
    const datagen::DemandPanel panel = datagen::generate(opt.spec);
    datagen::write_csv_file(panel, opt.out_path);
    std::size_t intermittent = 0;
    for (const auto& s : panel.series) {
      if (!s.id.empty() && s.id.front() == 'i') ++intermittent;
    }
    std::cout << "wrote " << opt.out_path << ": " << panel.series.size() << " series x "
              << panel.weeks() << " weeks (" << panel.series.size() * panel.weeks() << " rows), "
              << intermittent << " intermittent / " << (panel.series.size() - intermittent)
              << " smooth\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return fail_with({e.what()});
  }
}

// ---------------------------------------------------------------------------
// train

struct TrainOptions {
  ProblemOptions prob;
  std::string weights = "1,1";
  std::string trace_out;
};

int run_train(TrainOptions& opt) {
  std::vector<std::string> errors;
  BuiltProblem built = build_problem(opt.prob, errors);
  std::optional<PreferenceWeights> w;
  try {
    w = PreferenceWeights(parse_double_list(opt.weights, "--weights"));
  } catch (const std::exception& e) {
    errors.push_back(e.what());
  }
  if (errors.empty() && built.problem && w->size() != built.problem->objective_count())
    errors.push_back("--weights needs " + std::to_string(built.problem->objective_count()) +
                     " comma-separated values");
  std::ofstream out = open_out(opt.trace_out, errors);
  if (!errors.empty()) return fail_with(errors);

  try {
    const OptimizeResult res = optimize(*built.problem, *w, built.cfg);
    const std::size_t t_count = built.problem->objective_count();
    out << "step";
    for (std::size_t t = 0; t < t_count; ++t) out << ",loss_" << (t + 1);
    for (std::size_t m = 0; m < built.metric_names.size(); ++m)
      out << "," << built.metric_names[m];
    for (std::size_t t = 0; t < t_count; ++t) out << ",alpha_" << (t + 1);
    out << ",sq_norm\n";
    for (std::size_t i = 0; i < res.trace.steps.size(); ++i) {
      const StepRecord& s = res.trace.steps[i];
      out << i;
      for (std::size_t t = 0; t < t_count; ++t) out << "," << fmt_g9(s.losses[t]);
      for (std::size_t m = 0; m < s.metrics.size(); ++m) out << "," << fmt_g9(s.metrics[m]);
      for (std::size_t t = 0; t < t_count; ++t) out << "," << fmt_g9(s.alpha[t]);
      out << "," << fmt_g9(s.sq_norm) << "\n";
    }
    std::cout << "ran " << res.trace.steps.size() << " steps; final metrics:";
    for (std::size_t m = 0; m < res.metrics.size(); ++m)
      std::cout << " " << built.metric_names[m] << "=" << fmt_g9(res.metrics[m]);
    std::cout << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return fail_with({e.what()});
  }
}

// ---------------------------------------------------------------------------
// frontier

struct FrontierOptions {
  ProblemOptions prob;
  std::string method = "mgda";
  std::string phi = "0.05,0.05";
  double pace = 2.0;
  std::string bounds = "0,1,0,1";
  int max_rounds = 50;
  std::size_t jobs = 1;
  std::size_t restarts = 1;
  std::string out_path;
  std::string summary_path;
};

int run_frontier(FrontierOptions& opt) {
  std::vector<std::string> errors;
  BuiltProblem built = build_problem(opt.prob, errors);

  std::optional<Vec> phi;
  std::optional<MetricBounds> bounds;
  try {
    phi = parse_double_list(opt.phi, "--phi");
    const Vec b = parse_double_list(opt.bounds, "--bounds");
    if (b.size() % 2 != 0) throw ParseError("--bounds needs lo,hi pairs per metric");
    Vec lo, hi;
    for (std::size_t i = 0; i < b.size(); i += 2) {
      lo.push_back(b[i]);
      hi.push_back(b[i + 1]);
    }
    bounds = MetricBounds(lo, hi);
  } catch (const std::exception& e) {
    errors.push_back(e.what());
  }
  if (opt.method != "mgda" && opt.method != "static" && opt.method != "grid")
    errors.push_back("--method must be mgda, static or grid");
  if (!(opt.pace > 1.0)) errors.push_back("--pace must be > 1");
  if (opt.max_rounds < 1) errors.push_back("--max-rounds must be >= 1");
  if (opt.restarts < 1) errors.push_back("--restarts must be >= 1");
  if (phi && bounds && built.problem) {
    const std::size_t m_count = built.problem->metric_count();
    if (phi->size() != m_count || bounds->size() != m_count) {
      errors.push_back("--phi and --bounds need one entry (pair) per metric");
    } else {
      for (double p : *phi)
        if (!(p > 0.0)) errors.push_back("--phi entries must be > 0");
    }
  }
  std::ofstream out = open_out(opt.out_path, errors);
  if (!errors.empty()) return fail_with(errors);

  try {
    posterior::FrontierArchive archive;
    if (opt.method == "grid") {
      archive = baselines::grid_search(*built.problem, static_cast<std::size_t>(opt.max_rounds),
                                       built.cfg, opt.jobs, opt.restarts);
    } else {
      posterior::ExploreConfig ec{*bounds, *phi, opt.pace, opt.max_rounds};
      const OptimizerKind kind =
          (opt.method == "mgda") ? OptimizerKind::mgda : OptimizerKind::static_scaling;
      archive = posterior::explore_frontier(*built.problem, ec, built.cfg, kind);
    }
    posterior::write_archive_csv(archive, out);

    // summary: achieved granularity, coverage span, dominated-area statistic
    json summary;
    summary["method"] = opt.method;
    summary["runs"] = archive.entries.size();
    Vec gran(bounds->size());
    bool converged = true;
    for (std::size_t t = 0; t < bounds->size(); ++t) {
      Vec pts;
      for (const auto& e : archive.entries) pts.push_back(e.metrics[t]);
      gran[t] = posterior::granularity(pts, bounds->lo()[t], bounds->hi()[t]);
      if (gran[t] > (*phi)[t]) converged = false;
    }
    summary["granularity"] = gran;
    summary["granularity_target"] = *phi;
    summary["coverage_span"] = baselines::coverage_span(archive, *bounds);
    summary["bounds_lo"] = bounds->lo();
    summary["bounds_hi"] = bounds->hi();
    summary["converged"] = converged;
    if (bounds->size() == 2) {
      std::vector<Vec> pts;
      for (const auto& e : archive.entries) pts.push_back(e.metrics);
      summary["hypervolume"] = baselines::hypervolume_2d(pts, bounds->lo());
    }
    const std::string summary_path =
        opt.summary_path.empty() ? opt.out_path + ".summary.json" : opt.summary_path;
    std::ofstream sout(summary_path, std::ios::binary);
    if (!sout) return fail_with({"cannot open '" + summary_path + "' for writing"});
    sout << summary.dump(2) << "\n";
    std::cout << "archived " << archive.entries.size() << " runs to " << opt.out_path
              << "; summary in " << summary_path << "\n";
    return kExitOk;
  } catch (const std::exception& e) {
    return fail_with({e.what()});
  }
}

// ---------------------------------------------------------------------------
// prefer

struct PreferOptions {
  ProblemOptions prob;
  std::string constraints;
  std::string method = "mgda";
  double pace = 1.1;
  int max_rounds = 25;
  double eq_tol = 1e-3;
  std::string out_path;
};

int run_prefer(PreferOptions& opt) {
  std::vector<std::string> errors;
  BuiltProblem built = build_problem(opt.prob, errors);
  std::optional<prior::ConstraintSet> cs;
  if (built.problem) {
    try {
      cs = prior::parse_constraints(opt.constraints, built.metric_names);
      cs->validate(built.problem->metric_count());
    } catch (const std::exception& e) {
      errors.push_back(e.what());
    }
  }
  if (opt.method != "mgda" && opt.method != "static")
    errors.push_back("--method must be mgda or static");
  if (!(opt.pace > 1.0)) errors.push_back("--pace must be > 1");
  if (opt.max_rounds < 1) errors.push_back("--max-rounds must be >= 1");
  if (!(opt.eq_tol > 0.0)) errors.push_back("--eq-tol must be > 0");
  std::ofstream out = open_out(opt.out_path, errors);
  if (!errors.empty()) return fail_with(errors);

  try {
    const OptimizerKind kind =
        (opt.method == "mgda") ? OptimizerKind::mgda : OptimizerKind::static_scaling;
    const prior::PreferredResult res = prior::solve_preferred(
        *built.problem, *cs, opt.pace, opt.max_rounds, built.cfg, kind, opt.eq_tol);

    json record;
    record["constraints"] = opt.constraints;
    record["method"] = opt.method;
    record["satisfied"] = res.satisfied;
    record["metrics"] = res.metrics.values();
    record["metric_names"] = built.metric_names;
    record["weights"] = res.weights;
    record["subset_index"] = res.subset_index;
    record["rounds_used"] = res.rounds_used;
    out << record.dump(2) << "\n";

    std::cout << (res.satisfied ? "satisfied" : "NOT satisfied") << ";";
    for (std::size_t m = 0; m < res.metrics.size(); ++m)
      std::cout << " " << built.metric_names[m] << "=" << fmt_g9(res.metrics[m]);
    std::cout << "\n";
    return res.satisfied ? kExitOk : kExitUnsatisfied;
  } catch (const std::exception& e) {
    return fail_with({e.what()});
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gradient-based multi-objective optimization for demand forecasting"};
  app.require_subcommand(1);

  GenDataOptions gen;
  CLI::App* gen_cmd = app.add_subcommand("gen-data", "generate a synthetic demand panel CSV");
  gen_cmd->add_option("--seed", gen.spec.seed, "generator seed")->capture_default_str();
  gen_cmd->add_option("--series", gen.spec.n_series, "number of series")->capture_default_str();
  gen_cmd->add_option("--weeks", gen.spec.weeks, "weeks per series")->capture_default_str();
  gen_cmd->add_option("--class", gen.klass, "intermittent|smooth|mixed")->capture_default_str();
  gen_cmd->add_option("--level", gen.spec.level, "smooth demand level")->capture_default_str();
  gen_cmd->add_option("--noise", gen.spec.noise_rel, "relative noise")->capture_default_str();
  gen_cmd->add_option("--occurrence-p", gen.spec.occurrence_p, "intermittent hit rate")
      ->capture_default_str();
  gen_cmd->add_option("--size-mu", gen.spec.size_mu, "lognormal size mu")->capture_default_str();
  gen_cmd->add_option("--size-sigma", gen.spec.size_sigma, "lognormal size sigma")
      ->capture_default_str();
  gen_cmd->add_option("--seasonal", gen.spec.seasonal_amplitude, "seasonal amplitude")
      ->capture_default_str();
  gen_cmd->add_option("--out", gen.out_path, "output CSV path")->required();

  TrainOptions train;
  CLI::App* train_cmd = app.add_subcommand("train", "one run with fixed preference weights");
  add_problem_flags(train_cmd, train.prob);
  train_cmd->add_option("--weights", train.weights, "preference weights, comma separated")
      ->capture_default_str();
  train_cmd->add_option("--trace-out", train.trace_out, "per-step trace CSV")->required();

  FrontierOptions frontier;
  CLI::App* frontier_cmd =
      app.add_subcommand("frontier", "explore the metric frontier (a-posteriori)");
  add_problem_flags(frontier_cmd, frontier.prob);
  frontier_cmd->add_option("--method", frontier.method, "mgda|static|grid")
      ->capture_default_str();
  frontier_cmd->add_option("--phi", frontier.phi, "per-metric granularity target, comma separated")
      ->capture_default_str();
  frontier_cmd->add_option("--pace", frontier.pace, "weight scaling pace (> 1)")
      ->capture_default_str();
  frontier_cmd->add_option("--bounds", frontier.bounds, "lo,hi per metric, flattened")
      ->capture_default_str();
  frontier_cmd
      ->add_option("--max-rounds", frontier.max_rounds,
                   "run budget; for --method grid this is the grid resolution")
      ->capture_default_str();
  frontier_cmd->add_option("--jobs", frontier.jobs, "worker threads for grid runs")
      ->capture_default_str();
  frontier_cmd->add_option("--restarts", frontier.restarts, "restarts per grid point")
      ->capture_default_str();
  frontier_cmd->add_option("--out", frontier.out_path, "archive CSV path")->required();
  frontier_cmd->add_option("--summary", frontier.summary_path,
                           "summary JSON path (default: <out>.summary.json)");

  PreferOptions prefer;
  CLI::App* prefer_cmd =
      app.add_subcommand("prefer", "find one solution satisfying hard metric constraints");
  add_problem_flags(prefer_cmd, prefer.prob);
  prefer_cmd
      ->add_option("--constraints", prefer.constraints,
                   "e.g. \"sl>=0.95\" or \"m1>=0.9|m1==0.5 m2<=0.3\"")
      ->required();
  prefer_cmd->add_option("--method", prefer.method, "mgda|static")->capture_default_str();
  prefer_cmd->add_option("--pace", prefer.pace, "weight scaling pace (> 1)")
      ->capture_default_str();
  prefer_cmd->add_option("--max-rounds", prefer.max_rounds, "rounds per feasible subset")
      ->capture_default_str();
  prefer_cmd->add_option("--eq-tol", prefer.eq_tol, "tolerance for equality constraints")
      ->capture_default_str();
  prefer_cmd->add_option("--out", prefer.out_path, "result record JSON path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitError;
  }

  try {
    if (gen_cmd->parsed()) return run_gen_data(gen);
    if (train_cmd->parsed()) return run_train(train);
    if (frontier_cmd->parsed()) return run_frontier(frontier);
    if (prefer_cmd->parsed()) return run_prefer(prefer);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
