#include "cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "prefrules/dataset.hpp"
#include "prefrules/error.hpp"
#include "prefrules/harness.hpp"
#include "prefrules/lrar.hpp"
#include "prefrules/par.hpp"

namespace prefrules::cli {
namespace {

using nlohmann::json;

constexpr const char* kSeedEnv = "PREFRULES_SEED";

struct DataOptions {
  std::string input;
  std::string target = "ranking";
  int bins = 4;
};

struct LrarOptions {
  double minsup = 0.01;
  std::string minconf = "auto";
  double min_coverage = 0.95;
  double step = 0.05;
  double theta = 0.0;
  double min_imp = 0.01;
  double alpha = 0.05;
  std::string base = "tau";
  std::size_t max_antecedent = 0;
};

struct Config {
  DataOptions data;
  LrarOptions lrar;
  std::string output;
  std::string csv_output;
  int jobs = 1;
  std::uint64_t seed = 1;

  // mine-par
  double par_minconf = 0.5;
  double min_lift = 0.0;
  double par_min_imp = 0.01;
  std::size_t max_consequent = 4;

  // predict / evaluate
  std::string model;
  std::string aggregation = "average";
  bool strict = false;
  bool tune_once = false;
  int folds = 10;

  // sweep
  std::string sweep_axis;
  std::string grid;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

/// Writes to `path`, or to `fallback` when no path is set.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : to_file_(!path.empty()) {
    if (to_file_) {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) throw ArgumentError("cannot write '" + path + "'");
    }
    stream_ = to_file_ ? static_cast<std::ostream*>(&file_) : &fallback;
  }
  std::ostream& stream() { return *stream_; }
  bool to_file() const { return to_file_; }

 private:
  bool to_file_;
  std::ofstream file_;
  std::ostream* stream_;
};

void write_text_file(const std::string& path, const std::string& text) {
  Sink sink(path, std::cout);
  sink.stream() << text;
}

Dataset load_dataset(const DataOptions& d) {
  if (d.bins < 2) throw ArgumentError("--bins must be at least 2");
  return equal_width_discretize(parse_csv(read_file(d.input), d.target), d.bins);
}

std::optional<double> parse_minconf(const std::string& text) {
  if (text == "auto") return std::nullopt;
  double v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size() || !(v >= 0 && v <= 1)) {
    throw ArgumentError("--minconf must be a number in [0, 1] or 'auto'");
  }
  return v;
}

LrarParams lrar_params(const Config& c) {
  LrarParams p;
  p.minsup = c.lrar.minsup;
  p.theta = c.lrar.theta;
  p.min_imp = c.lrar.min_imp;
  p.alpha = c.lrar.alpha;
  p.base = similarity_from_string(c.lrar.base);
  p.max_antecedent = c.lrar.max_antecedent;
  p.jobs = c.jobs;
  if (const auto v = parse_minconf(c.lrar.minconf)) p.minconf = *v;
  return p;
}

EvalParams eval_params(const Config& c) {
  EvalParams p;
  p.lrar = lrar_params(c);
  p.step = c.lrar.step;
  p.min_coverage = c.lrar.min_coverage;
  p.predict = {aggregation_from_string(c.aggregation), c.strict};
  if (parse_minconf(c.lrar.minconf)) {
    p.tune = TuneMode::none;
  } else {
    p.tune = c.tune_once ? TuneMode::once : TuneMode::per_fold;
  }
  return p;
}

void add_data_options(CLI::App* cmd, Config& c, bool with_bins = true) {
  cmd->add_option("--input,-i", c.data.input, "CSV file with a header row")->required();
  cmd->add_option("--target", c.data.target, "Name of the ranking column")->capture_default_str();
  if (with_bins) {
    cmd->add_option("--bins", c.data.bins, "Equal-width bins for numeric attributes")->capture_default_str();
  }
}

void add_lrar_options(CLI::App* cmd, Config& c) {
  cmd->add_option("--minsup", c.lrar.minsup, "Minimum sup_lr")->capture_default_str();
  cmd->add_option("--minconf", c.lrar.minconf, "Minimum conf_lr, or 'auto' to tune it")->capture_default_str();
  cmd->add_option("--min-coverage", c.lrar.min_coverage, "Coverage target when tuning minconf")
      ->capture_default_str();
  cmd->add_option("--step", c.lrar.step, "minconf decrement when tuning")->capture_default_str();
  cmd->add_option("--theta", c.lrar.theta, "Similarity threshold")->capture_default_str();
  cmd->add_option("--min-imp", c.lrar.min_imp, "Minimum improvement")->capture_default_str();
  cmd->add_option("--alpha", c.lrar.alpha, "Fisher test significance level")->capture_default_str();
  cmd->add_option("--base", c.lrar.base, "Similarity: tau or normalized-tau")
      ->check(CLI::IsMember({"tau", "normalized-tau"}))
      ->capture_default_str();
  cmd->add_option("--max-antecedent", c.lrar.max_antecedent, "Longest antecedent (0 = unbounded)")
      ->capture_default_str();
}

void add_predict_options(CLI::App* cmd, Config& c) {
  cmd->add_option("--aggregation", c.aggregation, "average, weighted-confidence, weighted-support or best-rule")
      ->check(CLI::IsMember({"average", "weighted-confidence", "weighted-support", "best-rule"}))
      ->capture_default_str();
  cmd->add_flag("--strict", c.strict, "Break ties in predictions by label order");
}

void add_eval_options(CLI::App* cmd, Config& c) {
  cmd->add_option("--folds", c.folds, "Cross-validation folds")->capture_default_str();
  cmd->add_option("--seed", c.seed, "Fold shuffling seed (env " + std::string(kSeedEnv) + ")")
      ->capture_default_str();
  cmd->add_flag("--tune-once", c.tune_once, "Tune minconf once on the whole dataset instead of per fold");
  cmd->add_option("--csv", c.csv_output, "Also write a flat CSV report here");
}

bool given_on_command_line(const std::vector<std::string>& args, std::string_view flag) {
  for (const auto& a : args) {
    if (a == flag || (a.size() > flag.size() && a.compare(0, flag.size(), flag) == 0 && a[flag.size()] == '=')) {
      return true;
    }
  }
  return false;
}

void apply_seed_env(const std::vector<std::string>& args, Config& c) {
  if (given_on_command_line(args, "--seed")) return;
  const char* env = std::getenv(kSeedEnv);
  if (env == nullptr || *env == '\0') return;
  const std::string_view text(env);
  std::uint64_t seed = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), seed);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ArgumentError(std::string(kSeedEnv) + " must be a non-negative integer");
  }
  c.seed = seed;
}

// Commands -------------------------------------------------------------------

int cmd_mine_lrar(const Config& c, std::ostream& out, std::ostream& err) {
  const auto ds = load_dataset(c.data);
  const auto params = lrar_params(c);
  const auto fixed = parse_minconf(c.lrar.minconf);
  const LrarMiner miner(ds, params);
  double minconf = params.minconf;
  if (!fixed) {
    minconf = tune_minconf([&](double v) { return miner.coverage(v); }, c.lrar.step, c.lrar.min_coverage).minconf;
  }
  const auto model = miner.model(minconf);

  Sink sink(c.output, out);
  write_model(sink.stream(), model);
  const json summary = {
      {"n_rules", model.rules.size()},
      {"coverage", miner.coverage(minconf)},
      {"minconf_used", minconf},
      {"tuned", !fixed.has_value()},
      {"default_ranking", to_text(model.default_ranking, model.label_names)},
  };
  (sink.to_file() ? out : err) << summary.dump() << '\n';
  return kSuccess;
}

int cmd_mine_par(const Config& c, std::ostream& out, std::ostream& err) {
  const auto ds = load_dataset(c.data);
  ParParams params;
  params.minsup = c.lrar.minsup;
  params.minconf = c.par_minconf;
  params.min_lift = c.min_lift;
  params.min_imp = c.par_min_imp;
  params.alpha = c.lrar.alpha;
  params.max_consequent = c.max_consequent;
  params.max_antecedent = c.lrar.max_antecedent;
  params.jobs = c.jobs;
  const auto rules = mine_par(ds, params);

  Sink sink(c.output, out);
  std::size_t cyclic = 0;
  for (const auto& r : rules) {
    sink.stream() << par_rule_json(r, ds.attributes(), ds.label_names()) << '\n';
    cyclic += describe_rule(r, ds.label_count(), ds.label_names()).cyclic;
  }
  const json summary = {{"n_rules", rules.size()}, {"n_cyclic", cyclic}};
  (sink.to_file() ? out : err) << summary.dump() << '\n';
  return kSuccess;
}

std::string csv_cell(const std::string& text) {
  if (text.find_first_of(",\"\n") == std::string::npos) return text;
  std::string quoted = "\"";
  for (const char ch : text) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

int cmd_predict(const Config& c, std::ostream& out, std::ostream& err) {
  std::ifstream model_in(c.model, std::ios::binary);
  if (!model_in) throw ArgumentError("cannot open '" + c.model + "'");
  const auto model = read_model(model_in);
  const auto rows = encode_rows(read_file(c.data.input), model.attributes);
  const PredictOptions options{aggregation_from_string(c.aggregation), c.strict};

  Sink sink(c.output, out);
  sink.stream() << "ranking\n";
  std::size_t defaulted = 0;
  for (const auto& x : rows) {
    const bool covered = std::any_of(model.rules.begin(), model.rules.end(),
                                     [&](const LrarRule& r) { return r.covers(x); });
    defaulted += !covered;
    sink.stream() << csv_cell(to_text(predict(model, x, options), model.label_names)) << '\n';
  }
  if (sink.to_file()) out << json{{"n_rows", rows.size()}, {"n_default", defaulted}}.dump() << '\n';
  (void)err;
  return kSuccess;
}

int cmd_evaluate(const Config& c, std::ostream& out) {
  const auto ds = load_dataset(c.data);
  const auto report = evaluate_cv(ds, eval_params(c), c.folds, c.seed);
  Sink sink(c.output, out);
  sink.stream() << to_json(report).dump(2) << '\n';
  if (!c.csv_output.empty()) write_text_file(c.csv_output, to_csv(report));
  return kSuccess;
}

int cmd_sweep(const Config& c, std::ostream& out) {
  const auto ds = load_dataset(c.data);
  const auto axis = sweep_axis_from_string(c.sweep_axis);
  const auto grid = parse_grid(c.grid);
  const auto result = sweep(ds, axis, grid, eval_params(c), c.folds, c.seed);
  Sink sink(c.output, out);
  sink.stream() << to_json(result).dump(2) << '\n';
  if (!c.csv_output.empty()) write_text_file(c.csv_output, to_csv(result));
  return kSuccess;
}

int cmd_stats(const Config& c, std::ostream& out) {
  const auto ds = parse_csv(read_file(c.data.input), c.data.target);
  Sink sink(c.output, out);
  sink.stream() << dataset_stats(ds).dump() << '\n';
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Config c;
  CLI::App app{"Mine label ranking and pairwise association rules from tabular data", "prefrules"};
  app.set_config("--config", "", "TOML/INI file with option defaults (one [section] per command)");
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every command");

  auto* lrar = app.add_subcommand("mine-lrar", "Mine label ranking association rules (JSON lines)");
  add_data_options(lrar, c);
  add_lrar_options(lrar, c);
  lrar->add_option("--output,-o", c.output, "Rule file (default: stdout)");
  lrar->add_option("--jobs,-j", c.jobs, "Worker threads")->capture_default_str();

  auto* par = app.add_subcommand("mine-par", "Mine pairwise association rules (JSON lines)");
  add_data_options(par, c);
  par->add_option("--minsup", c.lrar.minsup, "Minimum support")->capture_default_str();
  par->add_option("--minconf", c.par_minconf, "Minimum confidence")->capture_default_str();
  par->add_option("--min-lift", c.min_lift, "Minimum lift")->capture_default_str();
  par->add_option("--min-imp", c.par_min_imp, "Minimum improvement")->capture_default_str();
  par->add_option("--alpha", c.lrar.alpha, "Fisher test significance level")->capture_default_str();
  par->add_option("--max-consequent", c.max_consequent, "Most pairwise statements per consequent (0 = unbounded)")
      ->capture_default_str();
  par->add_option("--max-antecedent", c.lrar.max_antecedent, "Longest antecedent (0 = unbounded)")
      ->capture_default_str();
  par->add_option("--output,-o", c.output, "Rule file (default: stdout)");
  par->add_option("--jobs,-j", c.jobs, "Worker threads")->capture_default_str();

  auto* pred = app.add_subcommand("predict", "Predict rankings with a saved LRAR model");
  pred->add_option("--model,-m", c.model, "Model file written by mine-lrar")->required();
  pred->add_option("--input,-i", c.data.input, "CSV file with the model's attribute columns")->required();
  add_predict_options(pred, c);
  pred->add_option("--output,-o", c.output, "Predictions CSV (default: stdout)");

  auto* eval = app.add_subcommand("evaluate", "Cross-validated Kendall tau of LRAR prediction");
  add_data_options(eval, c);
  add_lrar_options(eval, c);
  add_predict_options(eval, c);
  add_eval_options(eval, c);
  eval->add_option("--output,-o", c.output, "JSON report (default: stdout)");
  eval->add_option("--jobs,-j", c.jobs, "Worker threads")->capture_default_str();

  auto* sw = app.add_subcommand("sweep", "Cross-validate over a grid of theta or minsup values");
  add_data_options(sw, c);
  add_lrar_options(sw, c);
  add_predict_options(sw, c);
  add_eval_options(sw, c);
  sw->add_option("--sweep", c.sweep_axis, "Parameter to vary: theta or minsup")
      ->check(CLI::IsMember({"theta", "minsup"}))
      ->required();
  sw->add_option("--grid", c.grid, "lo:hi:step or a comma separated list")->required();
  sw->add_option("--output,-o", c.output, "JSON report (default: stdout)");
  sw->add_option("--jobs,-j", c.jobs, "Worker threads")->capture_default_str();

  auto* stats = app.add_subcommand("stats", "Dataset statistics as JSON");
  add_data_options(stats, c, false);
  stats->add_option("--output,-o", c.output, "JSON file (default: stdout)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kConfigError;
  }

  try {
    apply_seed_env(args, c);
    if (c.jobs < 1) throw ArgumentError("--jobs must be at least 1");
    if (*lrar) return cmd_mine_lrar(c, out, err);
    if (*par) return cmd_mine_par(c, out, err);
    if (*pred) return cmd_predict(c, out, err);
    if (*eval) return cmd_evaluate(c, out);
    if (*sw) return cmd_sweep(c, out);
    if (*stats) return cmd_stats(c, out);
    return kConfigError;
  } catch (const ModelMismatchError& e) {
    err << "error: " << e.what() << '\n';
    return kModelMismatch;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const SchemaError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const UnsupportedTargetError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const EmptyInputError& e) {
    err << "error: " << e.what() << '\n';
    return kParseError;
  } catch (const ArgumentError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace prefrules::cli
