#include "prefrules/par.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include <nlohmann/json.hpp>

#include "prefrules/error.hpp"

namespace prefrules {
namespace {

std::uint32_t pair_index(LabelId a, LabelId b, std::size_t k) {
  // Row-major index of (a, b), a < b, in the strict upper triangle.
  const auto kk = static_cast<std::uint32_t>(k);
  return a * kk - a * (a + 1) / 2 + (b - a - 1);
}

}  // namespace

PairwiseTable pairwise_expand(const Dataset& ds) {
  PairwiseTable table;
  table.label_count = ds.label_count();
  const auto descriptors = ItemIndex::from_descriptors(ds);
  const auto m = static_cast<std::uint32_t>(ds.attribute_count());

  std::vector<std::vector<PairwiseRelation>> decomposed;
  decomposed.reserve(ds.size());
  std::map<PairwiseRelation, ItemId> pair_items;
  for (const auto& target : ds.targets()) {
    decomposed.push_back(decompose_pairwise(target));
    for (const auto& rel : decomposed.back()) pair_items.emplace(rel, 0);
  }

  std::vector<Item> items = descriptors.items();
  std::vector<Bitset> covers;
  covers.reserve(items.size() + pair_items.size());
  for (ItemId id = 0; id < descriptors.size(); ++id) covers.push_back(descriptors.cover(id));
  for (auto& [rel, id] : pair_items) {
    id = static_cast<ItemId>(items.size());
    items.push_back({rel, ItemSide::consequent, m + pair_index(rel.a, rel.b, ds.label_count())});
    covers.emplace_back(ds.size());
  }

  table.transactions.resize(ds.size());
  for (std::size_t row = 0; row < ds.size(); ++row) {
    auto& t = table.transactions[row];
    for (std::uint32_t a = 0; a < m; ++a) {
      ItemId id = 0;
      for (std::uint32_t prev = 0; prev < a; ++prev) id += static_cast<ItemId>(ds.attribute(prev).values.size());
      t.push_back(id + ds.code(row, a));
    }
    for (const auto& rel : decomposed[row]) {
      const auto id = pair_items.at(rel);
      t.push_back(id);
      covers[id].set(row);
    }
  }
  table.index = ItemIndex(std::move(items), std::move(covers), ds.size());
  return table;
}

std::vector<ParRule> mine_par(const Dataset& ds, const ParParams& params) {
  if (ds.empty()) throw EmptyInputError("cannot mine rules from an empty dataset");
  if (!(params.minsup > 0 && params.minsup <= 1)) throw ArgumentError("minsup must be in (0, 1]");
  if (!(params.minconf >= 0 && params.minconf <= 1)) throw ArgumentError("minconf must be in [0, 1]");
  if (!(params.alpha >= 0 && params.alpha <= 1)) throw ArgumentError("alpha must be in [0, 1]");
  if (params.min_lift < 0) throw ArgumentError("min_lift must be non-negative");

  const auto table = pairwise_expand(ds);
  const auto& index = table.index;
  const std::size_t n = ds.size();
  const double nd = static_cast<double>(n);

  const auto itemsets =
      enumerate_frequent(index, params.minsup, {params.max_antecedent, params.max_consequent}, params.jobs);

  std::vector<ParRule> rules;
  for (const auto& s : itemsets) {
    std::vector<ItemId> antecedent;
    std::vector<ItemId> consequent;
    for (const auto id : s.items) {
      (index.item(id).side == ItemSide::antecedent ? antecedent : consequent).push_back(id);
    }
    if (consequent.empty()) continue;

    const auto hits = s.count();
    const auto cover_a = index.cover_of(antecedent);
    const auto cover_c = index.cover_of(consequent);
    const auto count_a = cover_a.count();
    const double sup = static_cast<double>(hits) / nd;
    const double conf = confidence(sup, static_cast<double>(count_a) / nd);
    const double lift_value = lift(sup, static_cast<double>(count_a) / nd, static_cast<double>(cover_c.count()) / nd);
    if (!meets(conf, params.minconf) || !meets(lift_value, params.min_lift)) continue;

    double improvement = std::numeric_limits<double>::infinity();
    bool significant = true;
    if (!antecedent.empty()) {
      // Every proper subset A' of A, as a bitmask over A's items.
      const std::size_t subsets = std::size_t{1} << antecedent.size();
      for (std::size_t mask = 0; mask + 1 < subsets; ++mask) {
        Bitset cover(n, true);
        for (std::size_t i = 0; i < antecedent.size(); ++i) {
          if (mask >> i & 1u) cover &= index.cover(antecedent[i]);
        }
        const auto count_sub = cover.count();
        const auto hits_sub = cover.count_and(cover_c);
        improvement = std::min(improvement, conf - static_cast<double>(hits_sub) / static_cast<double>(count_sub));

        // Direct generalizations: the empty antecedent and A minus one item.
        const bool direct = mask == 0 || static_cast<std::size_t>(std::popcount(mask)) + 1 == antecedent.size();
        if (direct && significant &&
            generalization_p(hits, count_a, hits_sub, count_sub) > params.alpha + kThresholdSlack) {
          significant = false;
        }
      }
      if (!meets(improvement, params.min_imp) || !significant) continue;
    }

    ParRule rule;
    for (const auto id : antecedent) rule.antecedent.push_back(std::get<Descriptor>(index.item(id).payload));
    for (const auto id : consequent) rule.consequent.push_back(std::get<PairwiseRelation>(index.item(id).payload));
    std::sort(rule.consequent.begin(), rule.consequent.end());
    rule.sup = sup;
    rule.conf = conf;
    rule.lift = lift_value;
    rule.improvement = improvement;
    rules.push_back(std::move(rule));
  }
  std::stable_sort(rules.begin(), rules.end(), [](const ParRule& a, const ParRule& b) { return a.lift > b.lift; });
  return rules;
}

RuleDescription describe_rule(const ParRule& rule, std::size_t k, std::span<const std::string> label_names) {
  RuleDescription out;
  try {
    const auto c = consolidate_pairwise(rule.consequent, k);
    out.text = to_text(c, label_names);
    out.subranking = c.subranking;
  } catch (const CycleError&) {
    out.cyclic = true;
    for (std::size_t i = 0; i < rule.consequent.size(); ++i) {
      if (i) out.text += " ∧ ";
      out.text += to_text(rule.consequent[i], label_names);
    }
  }
  return out;
}

std::string_view to_string(PairKind kind) {
  switch (kind) {
    case PairKind::a_precedes: return "a_precedes";
    case PairKind::b_precedes: return "b_precedes";
    case PairKind::tie: return "tie";
    case PairKind::incomparable: return "incomparable";
  }
  return "incomparable";
}

std::string par_rule_json(const ParRule& rule, std::span<const Attribute> attributes,
                          std::span<const std::string> label_names) {
  using nlohmann::json;
  json antecedent = json::array();
  for (const auto& d : rule.antecedent) antecedent.push_back(descriptor_text(attributes[d.attribute], d.value));
  json consequent = json::array();
  for (const auto& rel : rule.consequent) {
    consequent.push_back({{"a", label_names[rel.a]}, {"b", label_names[rel.b]}, {"kind", to_string(rel.kind)}});
  }
  const auto description = describe_rule(rule, label_names.size(), label_names);
  json j = {
      {"antecedent", std::move(antecedent)},
      {"consequent", std::move(consequent)},
      {"consequent_text", description.text},
      {"sup", rule.sup},
      {"conf", rule.conf},
      {"lift", rule.lift},
  };
  if (description.subranking) j["subranking"] = to_vector_text(*description.subranking);
  if (description.cyclic) j["cyclic"] = true;
  return j.dump();
}

}  // namespace prefrules
