#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "prefrules/dataset.hpp"
#include "prefrules/miner.hpp"
#include "prefrules/ranking.hpp"

namespace prefrules {

/// Transactions with descriptor items (antecedent side) and one pairwise
/// outcome item per label pair (consequent side).
struct PairwiseTable {
  ItemIndex index;
  std::vector<std::vector<ItemId>> transactions;
  std::size_t label_count = 0;
};

/// Items are numbered descriptors first (attribute order, then value order),
/// then the pairwise outcomes that occur in the data, ordered by (a, b, kind).
PairwiseTable pairwise_expand(const Dataset& ds);

struct ParParams {
  double minsup = 0.01;
  double minconf = 0.5;
  double min_lift = 0.0;
  double min_imp = 0.01;
  double alpha = 0.05;
  /// Most pairwise statements in one consequent (0 = unbounded).
  std::size_t max_consequent = 4;
  std::size_t max_antecedent = 0;
  int jobs = 1;
};

struct ParRule {
  std::vector<Descriptor> antecedent;       // sorted by attribute
  std::vector<PairwiseRelation> consequent;  // sorted, one entry per pair
  double sup = 0;
  double conf = 0;
  double lift = 0;
  double improvement = std::numeric_limits<double>::infinity();
};

/// Rules with descriptor antecedents and pairwise consequents that meet every
/// threshold, sorted by lift (descending, stable over search order). There is
/// no default rule: uncovered cases are abstentions.
std::vector<ParRule> mine_par(const Dataset& ds, const ParParams& params);

struct RuleDescription {
  std::string text;
  /// Present when the consequent is a single chain.
  std::optional<Ranking> subranking;
  bool cyclic = false;
};

RuleDescription describe_rule(const ParRule& rule, std::size_t k, std::span<const std::string> label_names);

std::string_view to_string(PairKind kind);

/// {antecedent, consequent: [{a, b, kind}], consequent_text, subranking?, sup, conf, lift}
std::string par_rule_json(const ParRule& rule, std::span<const Attribute> attributes,
                          std::span<const std::string> label_names);

}  // namespace prefrules
