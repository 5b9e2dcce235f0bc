#pragma once

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prefrules/bitset.hpp"
#include "prefrules/dataset.hpp"
#include "prefrules/miner.hpp"
#include "prefrules/ranking.hpp"

namespace prefrules {

/// Mining parameters of label ranking association rules.
struct LrarParams {
  double minsup = 0.01;
  double minconf = 0.0;
  /// Similarity threshold; non-negative so that sup_lr stays anti-monotone.
  double theta = 0.0;
  double min_imp = 0.01;
  /// Significance level of the Fisher test against direct generalizations.
  double alpha = 0.05;
  SimilarityKind base = SimilarityKind::kendall_tau;
  /// Longest antecedent searched (0 = unbounded).
  std::size_t max_antecedent = 0;
  int jobs = 1;
};

/// A -> pi with similarity-weighted measures.
struct LrarRule {
  std::vector<Descriptor> antecedent;  // sorted by attribute
  Ranking consequent;
  double sup_lr = 0;
  double conf_lr = 0;
  double lift_lr = 0;
  /// sup(A)
  double coverage = 0;
  /// imp_lr; +inf for the empty antecedent.
  double improvement = std::numeric_limits<double>::infinity();
  /// Training instances matched by the antecedent (empty after import).
  Bitset cover;

  bool covers(std::span<const ValueCode> descriptor) const;
};

/// Rule relevance: conf_lr desc, sup_lr desc, shorter antecedent, then
/// antecedent and consequent lexicographically.
bool more_relevant(const LrarRule& a, const LrarRule& b);

struct LrarModel {
  std::vector<Attribute> attributes;
  std::vector<std::string> label_names;
  std::vector<LrarRule> rules;  // relevance order
  Ranking default_ranking;
  LrarParams params;
};

// Measures, computed directly from the data ---------------------------------

double sup_lr(const Dataset& ds, std::span<const Descriptor> antecedent, const Ranking& pi, double theta,
              SimilarityKind base = SimilarityKind::kendall_tau);
double conf_lr(const Dataset& ds, std::span<const Descriptor> antecedent, const Ranking& pi, double theta,
               SimilarityKind base = SimilarityKind::kendall_tau);
double lift_lr(const Dataset& ds, std::span<const Descriptor> antecedent, const Ranking& pi, double theta,
               SimilarityKind base = SimilarityKind::kendall_tau);

/// Smallest confidence gain of `candidate` over every rule in `sub_rules` whose
/// antecedent is a proper subset of the candidate's and whose consequent has
/// base similarity >= theta to the candidate's. +inf when none qualifies.
double imp_lr(const LrarRule& candidate, std::span<const LrarRule> sub_rules, double theta,
              SimilarityKind base = SimilarityKind::kendall_tau);

/// Mines every rule that passes minsup, improvement and significance once,
/// so that models for several minconf values can be cut from one search.
class LrarMiner {
 public:
  LrarMiner(const Dataset& ds, LrarParams params);
  ~LrarMiner();
  LrarMiner(LrarMiner&&) noexcept;
  LrarMiner& operator=(LrarMiner&&) noexcept;

  /// Rules with conf_lr >= minconf, in relevance order.
  LrarModel model(double minconf) const;
  /// Fraction of training instances matched by a rule with conf_lr >= minconf.
  double coverage(double minconf) const;
  /// Every surviving rule regardless of confidence.
  const std::vector<LrarRule>& candidates() const noexcept;

 private:
  struct State;
  std::unique_ptr<State> state_;
};

/// Requires a categorical dataset whose targets are strict total orders.
LrarModel mine_lrar(const Dataset& ds, const LrarParams& params);

enum class Aggregation { average, weighted_confidence, weighted_support, best_rule };

struct PredictOptions {
  Aggregation aggregation = Aggregation::average;
  /// Break ties in the aggregated ranking by label id.
  bool strict = false;
};

/// Aggregates the consequents of every rule covering `descriptor`, or returns
/// the default ranking when no rule does.
Ranking predict(const LrarModel& model, std::span<const ValueCode> descriptor, PredictOptions options = {});

/// Fraction of instances matched by at least one rule.
double model_coverage(const LrarModel& model, const Dataset& ds);

// Serialization -------------------------------------------------------------

/// JSON lines: a header object {"model": {...}} followed by one rule per line
/// {antecedent, consequent, sup_lr, conf_lr, lift_lr}.
void write_model(std::ostream& out, const LrarModel& model);
LrarModel read_model(std::istream& in);

/// One rule line as written by write_model.
std::string rule_json(const LrarRule& rule, std::span<const Attribute> attributes,
                      std::span<const std::string> label_names);

/// Maps raw CSV rows onto the model's attributes (by column name), binning
/// numbers of discretized attributes. Unknown categories match no rule.
/// Throws ModelMismatchError when a model attribute has no column.
std::vector<std::vector<ValueCode>> encode_rows(std::string_view csv_text, std::span<const Attribute> attributes,
                                                char delimiter = ',');

std::string_view to_string(Aggregation a);
Aggregation aggregation_from_string(std::string_view s);
std::string_view to_string(SimilarityKind k);
SimilarityKind similarity_from_string(std::string_view s);

}  // namespace prefrules
