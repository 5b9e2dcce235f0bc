#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "prefrules/bitset.hpp"
#include "prefrules/dataset.hpp"
#include "prefrules/ranking.hpp"

namespace prefrules {

using ItemId = std::uint32_t;

/// Tolerance used for every threshold comparison (x >= t - kThresholdSlack),
/// so that e.g. 3 rows out of 10 meet minsup = 0.3.
inline constexpr double kThresholdSlack = 1e-12;
inline bool meets(double value, double threshold) noexcept { return value >= threshold - kThresholdSlack; }

/// An <attribute, value> pair.
struct Descriptor {
  std::uint32_t attribute = 0;
  ValueCode value = 0;
  friend bool operator==(const Descriptor&, const Descriptor&) = default;
};

enum class ItemSide { antecedent, consequent };

struct Item {
  std::variant<Descriptor, PairwiseRelation> payload;
  ItemSide side = ItemSide::antecedent;
  /// Items sharing a group can never co-occur in one instance (same attribute,
  /// or same label pair with a different outcome).
  std::uint32_t exclusive_group = 0;
};

/// Item catalogue plus the vertical (cover bitset) representation of the data.
class ItemIndex {
 public:
  ItemIndex() = default;
  ItemIndex(std::vector<Item> items, std::vector<Bitset> covers, std::size_t instances);

  /// One antecedent item per <attribute, value>; requires a categorical dataset.
  static ItemIndex from_descriptors(const Dataset& ds);

  std::size_t size() const noexcept { return items_.size(); }
  std::size_t instance_count() const noexcept { return instances_; }
  const Item& item(ItemId id) const { return items_.at(id); }
  const std::vector<Item>& items() const noexcept { return items_; }
  const Bitset& cover(ItemId id) const { return covers_.at(id); }

  /// Instances containing every listed item (all instances for an empty list).
  Bitset cover_of(std::span<const ItemId> items) const;

 private:
  std::vector<Item> items_;
  std::vector<Bitset> covers_;
  std::size_t instances_ = 0;
};

struct ItemSet {
  std::vector<ItemId> items;  // sorted ascending
  Bitset cover;

  std::size_t count() const noexcept { return cover.count(); }
};

/// Shape limits for the itemsets the search may produce; 0 means unbounded.
struct SearchConstraint {
  std::size_t max_antecedent = 0;
  std::size_t max_consequent = 0;
};

/// Called for every candidate; returning true keeps it and descends into its
/// extensions. Must be anti-monotone for the search to be complete, and
/// thread-safe when jobs > 1.
using ExpandPredicate = std::function<bool(const ItemSet&)>;

/// Depth-first enumeration by cover intersection. Output is in depth-first
/// lexicographic id order regardless of the number of jobs.
std::vector<ItemSet> enumerate_depth_first(const ItemIndex& index, const ExpandPredicate& keep,
                                           const SearchConstraint& constraint = {}, int jobs = 1);

/// Every non-empty itemset with support >= minsup, minsup in (0, 1].
std::vector<ItemSet> enumerate_frequent(const ItemIndex& index, double minsup,
                                        const SearchConstraint& constraint = {}, int jobs = 1);

// Interest measures ---------------------------------------------------------

double support(const ItemSet& s, std::size_t n);
double support(std::size_t count, std::size_t n);
/// sup(A -> C) / sup(A)
double confidence(double rule_support, double antecedent_support);
/// sup(A -> C) / (sup(A) sup(C))
double lift(double rule_support, double antecedent_support, double consequent_support);

/// A -> C with its classical measures.
struct GenericRule {
  ItemSet antecedent;
  ItemSet consequent;
  double sup = 0;
  double conf = 0;
  double lift = 0;
  /// sup(A)
  double coverage = 0;
};

/// Builds A -> C from the index; throws ArgumentError if A and C intersect.
GenericRule make_rule(const ItemIndex& index, std::vector<ItemId> antecedent, std::vector<ItemId> consequent);

// Significance --------------------------------------------------------------

/// One-sided Fisher exact test on the 2x2 table [[a, b], [c, d]]: the
/// probability of at least `a` in the top-left cell given the margins.
double fisher_exact_p(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d);

/// Fisher p-value of a rule against one of its generalizations A' -> C with
/// A' a subset of A. Counts are instance counts: covers of A u C, A, A' u C, A'.
double generalization_p(std::uint64_t rule_hits, std::uint64_t rule_cover, std::uint64_t general_hits,
                        std::uint64_t general_cover);

}  // namespace prefrules
