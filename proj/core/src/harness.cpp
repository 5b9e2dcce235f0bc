#include "prefrules/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <nlohmann/json.hpp>

#include "prefrules/error.hpp"
#include "prefrules/parallel.hpp"

namespace prefrules {
namespace {

double snap(double x) { return std::round(x * 1e12) / 1e12; }

double parse_number(std::string_view s) {
  while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
  while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
  double v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ArgumentError("'" + std::string(s) + "' is not a number");
  }
  return v;
}

/// Shortest text that reads back to the same double.
std::string number_text(double v) {
  char buffer[32];
  const auto [end, ec] = std::to_chars(buffer, buffer + sizeof buffer, v);
  return std::string(buffer, end);
}

nlohmann::json params_json(const EvalParams& p) {
  const auto tune = p.tune == TuneMode::none ? "none" : p.tune == TuneMode::once ? "once" : "per-fold";
  return {
      {"minsup", p.lrar.minsup},
      {"minconf", p.tune == TuneMode::none ? nlohmann::json(p.lrar.minconf) : nlohmann::json("auto")},
      {"theta", p.lrar.theta},
      {"min_imp", p.lrar.min_imp},
      {"alpha", p.lrar.alpha},
      {"base", to_string(p.lrar.base)},
      {"tune", tune},
      {"step", p.step},
      {"min_coverage", p.min_coverage},
      {"aggregation", to_string(p.predict.aggregation)},
      {"strict", p.predict.strict},
  };
}

}  // namespace

TuneResult tune_minconf(const std::function<double(double)>& coverage_at, double step, double min_coverage) {
  if (!(step > 0 && step <= 1)) throw ArgumentError("step must be in (0, 1]");
  if (!(min_coverage > 0 && min_coverage <= 1)) throw ArgumentError("min_coverage must be in (0, 1]");
  TuneResult result;
  result.minconf = 1.0;
  result.coverage = coverage_at(result.minconf);
  result.runs = 1;
  for (std::size_t i = 1; !meets(result.coverage, min_coverage) && result.minconf > 0; ++i) {
    result.minconf = std::max(0.0, snap(1.0 - static_cast<double>(i) * step));
    result.coverage = coverage_at(result.minconf);
    ++result.runs;
  }
  return result;
}

TuneResult tune_minconf(const Dataset& ds, const LrarParams& params, double step, double min_coverage) {
  const LrarMiner miner(ds, params);
  return tune_minconf([&](double minconf) { return miner.coverage(minconf); }, step, min_coverage);
}

double evaluation_tau(const Ranking& actual, const Ranking& predicted) {
  if (predicted.is_strict_total() && actual.is_strict_total()) return kendall_tau(actual, predicted);
  try {
    return kendall_tau_b(actual, predicted);
  } catch (const UndefinedError&) {
    return 0.0;
  }
}

EvalReport evaluate_cv(const Dataset& ds, const EvalParams& params, int folds, std::uint64_t seed) {
  if (folds < 2) throw ArgumentError("folds must be at least 2");
  const auto splits = kfold_split(ds, folds, seed);

  EvalReport report;
  report.params = params;
  report.seed = seed;

  double shared_minconf = params.lrar.minconf;
  if (params.tune == TuneMode::once) {
    shared_minconf = tune_minconf(ds, params.lrar, params.step, params.min_coverage).minconf;
  }

  // Folds run concurrently; mining inside a fold stays single-threaded.
  LrarParams inner = params.lrar;
  const int jobs = std::max(1, inner.jobs);
  inner.jobs = 1;
  std::vector<FoldReport> fold_reports(splits.size());
  parallel_for(splits.size(), jobs, [&](std::size_t f) {
    const auto& split = splits[f];
    std::vector<char> in_train(ds.size(), 0);
    for (const auto row : split.train) in_train[row] = 1;
    for (const auto row : split.test) {
      if (in_train[row]) throw std::logic_error("fold " + std::to_string(f) + " evaluates on a training row");
    }

    const auto train = ds.subset(split.train);
    const LrarMiner miner(train, inner);
    double minconf = shared_minconf;
    if (params.tune == TuneMode::per_fold) {
      minconf = tune_minconf([&](double c) { return miner.coverage(c); }, params.step, params.min_coverage).minconf;
    }
    const auto model = miner.model(minconf);

    FoldReport& out = fold_reports[f];
    out.train_size = split.train.size();
    out.test_size = split.test.size();
    out.rules = model.rules.size();
    out.coverage = miner.coverage(minconf);
    out.minconf = minconf;
    double total = 0;
    for (const auto row : split.test) {
      total += evaluation_tau(ds.target(row), predict(model, ds.descriptor(row), params.predict));
    }
    out.mean_tau = split.test.empty() ? 0.0 : total / static_cast<double>(split.test.size());
  });

  report.folds = std::move(fold_reports);
  const double nf = static_cast<double>(report.folds.size());
  for (const auto& f : report.folds) {
    report.mean_tau += f.mean_tau / nf;
    report.mean_rules += static_cast<double>(f.rules) / nf;
    report.mean_coverage += f.coverage / nf;
    report.mean_minconf += f.minconf / nf;
  }
  return report;
}

std::string_view to_string(SweepAxis axis) { return axis == SweepAxis::theta ? "theta" : "minsup"; }

SweepAxis sweep_axis_from_string(std::string_view s) {
  if (s == "theta") return SweepAxis::theta;
  if (s == "minsup") return SweepAxis::minsup;
  throw ArgumentError("unknown sweep axis '" + std::string(s) + "' (expected theta or minsup)");
}

SweepResult sweep(const Dataset& ds, SweepAxis axis, const std::vector<double>& grid, const EvalParams& base,
                  int folds, std::uint64_t seed) {
  if (grid.empty()) throw ArgumentError("sweep grid is empty");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) throw ArgumentError("sweep grid must be strictly increasing");
  }
  SweepResult result;
  result.axis = axis;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const double value : grid) {
    EvalParams p = base;
    (axis == SweepAxis::theta ? p.lrar.theta : p.lrar.minsup) = value;
    auto report = evaluate_cv(ds, p, folds, seed);
    lo = std::min(lo, report.mean_tau);
    hi = std::max(hi, report.mean_tau);
    result.points.push_back({value, std::move(report)});
  }
  result.accuracy_range = hi - lo;
  return result;
}

std::vector<double> parse_grid(std::string_view text) {
  std::vector<double> grid;
  if (text.find(':') != std::string_view::npos) {
    std::vector<double> parts;
    std::size_t start = 0;
    while (true) {
      const auto colon = text.find(':', start);
      parts.push_back(parse_number(text.substr(start, colon - start)));
      if (colon == std::string_view::npos) break;
      start = colon + 1;
    }
    if (parts.size() != 3) throw ArgumentError("grid range must be lo:hi:step");
    const double lo = parts[0];
    const double hi = parts[1];
    const double step = parts[2];
    if (!(step > 0) || hi < lo) throw ArgumentError("grid range needs lo <= hi and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) grid.push_back(snap(lo + static_cast<double>(i) * step));
  } else {
    std::size_t start = 0;
    while (true) {
      const auto comma = text.find(',', start);
      grid.push_back(parse_number(text.substr(start, comma - start)));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
  }
  return grid;
}

nlohmann::json to_json(const EvalReport& report) {
  nlohmann::json folds = nlohmann::json::array();
  for (const auto& f : report.folds) {
    folds.push_back({
        {"train_size", f.train_size},
        {"test_size", f.test_size},
        {"mean_tau", f.mean_tau},
        {"rules", f.rules},
        {"coverage", f.coverage},
        {"minconf", f.minconf},
    });
  }
  return {
      {"folds", std::move(folds)},
      {"fold_count", report.folds.size()},
      {"seed", report.seed},
      {"mean_tau", report.mean_tau},
      {"mean_rules", report.mean_rules},
      {"mean_coverage", report.mean_coverage},
      {"mean_minconf", report.mean_minconf},
      {"params", params_json(report.params)},
  };
}

nlohmann::json to_json(const SweepResult& result) {
  nlohmann::json points = nlohmann::json::array();
  for (const auto& p : result.points) points.push_back({{"value", p.value}, {"report", to_json(p.report)}});
  return {{"axis", to_string(result.axis)}, {"points", std::move(points)}, {"accuracy_range", result.accuracy_range}};
}

std::string to_csv(const EvalReport& report) {
  std::string out = "fold,train_size,test_size,mean_tau,rules,coverage,minconf\n";
  for (std::size_t i = 0; i < report.folds.size(); ++i) {
    const auto& f = report.folds[i];
    out += std::to_string(i) + ',' + std::to_string(f.train_size) + ',' + std::to_string(f.test_size) + ',' +
           number_text(f.mean_tau) + ',' + std::to_string(f.rules) + ',' + number_text(f.coverage) + ',' +
           number_text(f.minconf) + '\n';
  }
  return out;
}

std::string to_csv(const SweepResult& result) {
  std::string out = std::string(to_string(result.axis)) + ",mean_tau,mean_rules,mean_coverage,mean_minconf\n";
  for (const auto& p : result.points) {
    out += number_text(p.value) + ',' + number_text(p.report.mean_tau) + ',' + number_text(p.report.mean_rules) +
           ',' + number_text(p.report.mean_coverage) + ',' + number_text(p.report.mean_minconf) + '\n';
  }
  return out;
}

}  // namespace prefrules
