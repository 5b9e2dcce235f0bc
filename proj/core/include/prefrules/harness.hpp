#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "prefrules/dataset.hpp"
#include "prefrules/lrar.hpp"

namespace prefrules {

struct TuneResult {
  double minconf = 1.0;
  /// Training coverage at the returned minconf.
  double coverage = 0;
  /// Number of coverage evaluations (mining runs) performed.
  std::size_t runs = 0;
};

/// Lowers minconf from 1 in steps of `step` until coverage_at(minconf) >=
/// min_coverage, stopping at 0. Performs at most ceil(1/step) + 1 evaluations.
TuneResult tune_minconf(const std::function<double(double)>& coverage_at, double step, double min_coverage);

/// The same search over rules mined once from `ds` (coverage on `ds` itself).
TuneResult tune_minconf(const Dataset& ds, const LrarParams& params, double step, double min_coverage);

enum class TuneMode {
  none,      // use params.lrar.minconf as given
  per_fold,  // tune on each training split
  once,      // tune once on the whole dataset, reuse in every fold
};

struct EvalParams {
  LrarParams lrar;
  TuneMode tune = TuneMode::per_fold;
  double step = 0.05;
  double min_coverage = 0.95;
  PredictOptions predict;
};

struct FoldReport {
  std::size_t train_size = 0;
  std::size_t test_size = 0;
  double mean_tau = 0;
  std::size_t rules = 0;
  /// Model coverage on the training split.
  double coverage = 0;
  double minconf = 0;
};

struct EvalReport {
  std::vector<FoldReport> folds;
  double mean_tau = 0;
  double mean_rules = 0;
  double mean_coverage = 0;
  double mean_minconf = 0;
  EvalParams params;
  std::uint64_t seed = 0;
};

/// k-fold cross-validation of LRAR prediction. Each test ranking is scored
/// with Kendall tau against the prediction (tau-b when the prediction has
/// ties; 0 when it is fully tied).
EvalReport evaluate_cv(const Dataset& ds, const EvalParams& params, int folds, std::uint64_t seed);

/// Score of one prediction against the true ranking, as used by evaluate_cv.
double evaluation_tau(const Ranking& actual, const Ranking& predicted);

enum class SweepAxis { theta, minsup };
std::string_view to_string(SweepAxis axis);
SweepAxis sweep_axis_from_string(std::string_view s);

struct SweepPoint {
  double value = 0;
  EvalReport report;
};

struct SweepResult {
  SweepAxis axis = SweepAxis::theta;
  std::vector<SweepPoint> points;
  /// max - min of the per-point mean tau.
  double accuracy_range = 0;
};

/// evaluate_cv at every grid value of `axis`; the grid must be non-empty and
/// strictly increasing.
SweepResult sweep(const Dataset& ds, SweepAxis axis, const std::vector<double>& grid, const EvalParams& base,
                  int folds, std::uint64_t seed);

/// "lo:hi:step" (inclusive) or a comma separated list.
std::vector<double> parse_grid(std::string_view text);

nlohmann::json to_json(const EvalReport& report);
nlohmann::json to_json(const SweepResult& result);
/// One row per fold.
std::string to_csv(const EvalReport& report);
/// One row per grid point.
std::string to_csv(const SweepResult& result);

}  // namespace prefrules
