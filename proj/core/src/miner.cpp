#include "prefrules/miner.hpp"

#include <algorithm>
#include <cmath>

#include "prefrules/error.hpp"
#include "prefrules/parallel.hpp"

namespace prefrules {
namespace {

class DepthFirstSearch {
 public:
  DepthFirstSearch(const ItemIndex& index, const ExpandPredicate& keep, const SearchConstraint& constraint)
      : index_(index), keep_(keep), constraint_(constraint) {
    std::uint32_t groups = 0;
    for (const auto& item : index.items()) groups = std::max(groups, item.exclusive_group + 1);
    group_used_.assign(groups, 0);
  }

  /// All accepted itemsets whose smallest item is `first`.
  std::vector<ItemSet> subtree(ItemId first) {
    std::vector<ItemSet> out;
    ItemSet root;
    root.cover = Bitset(index_.instance_count(), true);
    extend_with(root, first, out);
    return out;
  }

 private:
  bool fits(const Item& item) const {
    if (group_used_[item.exclusive_group]) return false;
    if (item.side == ItemSide::antecedent) {
      return constraint_.max_antecedent == 0 || antecedents_ < constraint_.max_antecedent;
    }
    return constraint_.max_consequent == 0 || consequents_ < constraint_.max_consequent;
  }

  void extend_with(const ItemSet& prefix, ItemId id, std::vector<ItemSet>& out) {
    const auto& item = index_.item(id);
    if (!fits(item)) return;
    ItemSet candidate;
    candidate.items = prefix.items;
    candidate.items.push_back(id);
    candidate.cover = prefix.cover & index_.cover(id);
    if (!keep_(candidate)) return;

    group_used_[item.exclusive_group] = 1;
    auto& side_count = item.side == ItemSide::antecedent ? antecedents_ : consequents_;
    ++side_count;
    out.push_back(candidate);
    for (ItemId next = id + 1; next < index_.size(); ++next) extend_with(candidate, next, out);
    --side_count;
    group_used_[item.exclusive_group] = 0;
  }

  const ItemIndex& index_;
  const ExpandPredicate& keep_;
  SearchConstraint constraint_;
  std::vector<char> group_used_;
  std::size_t antecedents_ = 0;
  std::size_t consequents_ = 0;
};

}  // namespace

ItemIndex::ItemIndex(std::vector<Item> items, std::vector<Bitset> covers, std::size_t instances)
    : items_(std::move(items)), covers_(std::move(covers)), instances_(instances) {
  if (items_.size() != covers_.size()) throw DimensionError("one cover per item expected");
  for (const auto& c : covers_) {
    if (c.size() != instances_) throw DimensionError("cover bitset does not match the instance count");
  }
}

ItemIndex ItemIndex::from_descriptors(const Dataset& ds) {
  std::vector<Item> items;
  std::vector<Bitset> covers;
  for (std::uint32_t a = 0; a < ds.attribute_count(); ++a) {
    const auto& attr = ds.attribute(a);
    if (attr.kind != AttributeKind::categorical) {
      throw ArgumentError("attribute '" + attr.name + "' is numeric; discretize first");
    }
    const auto first = covers.size();
    for (ValueCode v = 0; v < attr.values.size(); ++v) {
      items.push_back({Descriptor{a, v}, ItemSide::antecedent, a});
      covers.emplace_back(ds.size());
    }
    const auto& column = ds.codes(a);
    for (std::size_t row = 0; row < ds.size(); ++row) covers[first + column[row]].set(row);
  }
  return ItemIndex(std::move(items), std::move(covers), ds.size());
}

Bitset ItemIndex::cover_of(std::span<const ItemId> items) const {
  Bitset cover(instances_, true);
  for (const auto id : items) cover &= covers_.at(id);
  return cover;
}

std::vector<ItemSet> enumerate_depth_first(const ItemIndex& index, const ExpandPredicate& keep,
                                           const SearchConstraint& constraint, int jobs) {
  std::vector<std::vector<ItemSet>> subtrees(index.size());
  parallel_for(index.size(), jobs, [&](std::size_t first) {
    DepthFirstSearch search(index, keep, constraint);
    subtrees[first] = search.subtree(static_cast<ItemId>(first));
  });
  std::vector<ItemSet> out;
  for (auto& s : subtrees) {
    std::move(s.begin(), s.end(), std::back_inserter(out));
  }
  return out;
}

std::vector<ItemSet> enumerate_frequent(const ItemIndex& index, double minsup, const SearchConstraint& constraint,
                                        int jobs) {
  if (!(minsup > 0 && minsup <= 1)) throw ArgumentError("minsup must be in (0, 1]");
  const auto n = index.instance_count();
  return enumerate_depth_first(
      index, [&](const ItemSet& s) { return n > 0 && meets(support(s.count(), n), minsup); }, constraint, jobs);
}

double support(const ItemSet& s, std::size_t n) { return support(s.count(), n); }

double support(std::size_t count, std::size_t n) {
  if (n == 0) throw EmptyInputError("support over zero instances");
  return static_cast<double>(count) / static_cast<double>(n);
}

double confidence(double rule_support, double antecedent_support) {
  if (!(antecedent_support > 0)) throw UndefinedError("confidence is undefined: antecedent has zero support");
  return rule_support / antecedent_support;
}

double lift(double rule_support, double antecedent_support, double consequent_support) {
  if (!(antecedent_support > 0) || !(consequent_support > 0)) {
    throw UndefinedError("lift is undefined: zero antecedent or consequent support");
  }
  return rule_support / (antecedent_support * consequent_support);
}

GenericRule make_rule(const ItemIndex& index, std::vector<ItemId> antecedent, std::vector<ItemId> consequent) {
  std::sort(antecedent.begin(), antecedent.end());
  std::sort(consequent.begin(), consequent.end());
  std::vector<ItemId> common;
  std::set_intersection(antecedent.begin(), antecedent.end(), consequent.begin(), consequent.end(),
                        std::back_inserter(common));
  if (!common.empty()) throw ArgumentError("antecedent and consequent must be disjoint");

  GenericRule rule;
  const auto n = index.instance_count();
  rule.antecedent.cover = index.cover_of(antecedent);
  rule.consequent.cover = index.cover_of(consequent);
  rule.antecedent.items = std::move(antecedent);
  rule.consequent.items = std::move(consequent);
  const double sup_a = support(rule.antecedent, n);
  const double sup_c = support(rule.consequent, n);
  rule.sup = support(rule.antecedent.cover.count_and(rule.consequent.cover), n);
  rule.coverage = sup_a;
  rule.conf = confidence(rule.sup, sup_a);
  rule.lift = lift(rule.sup, sup_a, sup_c);
  return rule;
}

}  // namespace prefrules
