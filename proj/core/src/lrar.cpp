#include "prefrules/lrar.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <set>

#include "prefrules/error.hpp"
#include "prefrules/parallel.hpp"

namespace prefrules {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool row_matches(const Dataset& ds, std::size_t row, std::span<const Descriptor> antecedent) {
  return std::all_of(antecedent.begin(), antecedent.end(),
                     [&](const Descriptor& d) { return ds.code(row, d.attribute) == d.value; });
}

void check_antecedent(const Dataset& ds, std::span<const Descriptor> antecedent) {
  for (const auto& d : antecedent) {
    if (d.attribute >= ds.attribute_count() || ds.attribute(d.attribute).kind != AttributeKind::categorical ||
        d.value >= ds.attribute(d.attribute).values.size()) {
      throw ArgumentError("descriptor does not refer to a categorical value of the dataset");
    }
  }
}

std::size_t antecedent_count(const Dataset& ds, std::span<const Descriptor> antecedent) {
  std::size_t count = 0;
  for (std::size_t row = 0; row < ds.size(); ++row) count += row_matches(ds, row, antecedent);
  return count;
}

bool is_proper_subset(std::span<const Descriptor> small, std::span<const Descriptor> big) {
  if (small.size() >= big.size()) return false;
  return std::all_of(small.begin(), small.end(), [&](const Descriptor& d) {
    return std::find(big.begin(), big.end(), d) != big.end();
  });
}

/// floor(x + 1/2), tolerant to accumulated rounding in x.
std::uint64_t round_half_up(double x) { return static_cast<std::uint64_t>(std::floor(x + 0.5 + 1e-9)); }

void validate(const Dataset& ds, const LrarParams& p) {
  if (ds.empty()) throw EmptyInputError("cannot mine rules from an empty dataset");
  if (!ds.all_categorical()) throw ArgumentError("LRAR mining needs a discretized (categorical) dataset");
  if (ds.label_count() < 2) throw UnsupportedTargetError("LRAR mining needs at least two labels");
  for (std::size_t row = 0; row < ds.size(); ++row) {
    if (!ds.target(row).is_strict_total()) {
      throw UnsupportedTargetError("LRAR mining needs strict total orders as targets (row " +
                                   std::to_string(row + 1) + ")");
    }
  }
  if (!(p.minsup > 0 && p.minsup <= 1)) throw ArgumentError("minsup must be in (0, 1]");
  if (!(p.minconf >= 0 && p.minconf <= 1)) throw ArgumentError("minconf must be in [0, 1]");
  if (!(p.theta >= 0 && p.theta <= 1)) throw ArgumentError("theta must be in [0, 1]");
  if (!(p.alpha >= 0 && p.alpha <= 1)) throw ArgumentError("alpha must be in [0, 1]");
  if (std::isnan(p.min_imp)) throw ArgumentError("min_imp must be a number");
}

}  // namespace

bool LrarRule::covers(std::span<const ValueCode> descriptor) const {
  return std::all_of(antecedent.begin(), antecedent.end(), [&](const Descriptor& d) {
    return d.attribute < descriptor.size() && descriptor[d.attribute] == d.value;
  });
}

bool more_relevant(const LrarRule& a, const LrarRule& b) {
  if (a.conf_lr != b.conf_lr) return a.conf_lr > b.conf_lr;
  if (a.sup_lr != b.sup_lr) return a.sup_lr > b.sup_lr;
  if (a.antecedent.size() != b.antecedent.size()) return a.antecedent.size() < b.antecedent.size();
  const auto key = [](const LrarRule& r) {
    std::vector<std::pair<std::uint32_t, ValueCode>> k;
    for (const auto& d : r.antecedent) k.emplace_back(d.attribute, d.value);
    return k;
  };
  const auto ka = key(a);
  const auto kb = key(b);
  if (ka != kb) return ka < kb;
  return a.consequent < b.consequent;
}

double sup_lr(const Dataset& ds, std::span<const Descriptor> antecedent, const Ranking& pi, double theta,
              SimilarityKind base) {
  if (ds.empty()) throw EmptyInputError("sup_lr over an empty dataset");
  if (theta < 0) throw ArgumentError("theta must be non-negative");
  check_antecedent(ds, antecedent);
  double total = 0;
  for (std::size_t row = 0; row < ds.size(); ++row) {
    if (row_matches(ds, row, antecedent)) total += censored_similarity(ds.target(row), pi, theta, base);
  }
  return total / static_cast<double>(ds.size());
}

double conf_lr(const Dataset& ds, std::span<const Descriptor> antecedent, const Ranking& pi, double theta,
               SimilarityKind base) {
  const double s = sup_lr(ds, antecedent, pi, theta, base);
  return confidence(s, support(antecedent_count(ds, antecedent), ds.size()));
}

double lift_lr(const Dataset& ds, std::span<const Descriptor> antecedent, const Ranking& pi, double theta,
               SimilarityKind base) {
  const double s = sup_lr(ds, antecedent, pi, theta, base);
  const double prior = sup_lr(ds, {}, pi, theta, base);
  return lift(s, support(antecedent_count(ds, antecedent), ds.size()), prior);
}

double imp_lr(const LrarRule& candidate, std::span<const LrarRule> sub_rules, double theta, SimilarityKind base) {
  double best = kInf;
  for (const auto& r : sub_rules) {
    if (!is_proper_subset(r.antecedent, candidate.antecedent)) continue;
    if (!meets(base_similarity(r.consequent, candidate.consequent, base), theta)) continue;
    best = std::min(best, candidate.conf_lr - r.conf_lr);
  }
  return best;
}

// ---------------------------------------------------------------------------

struct LrarMiner::State {
  std::vector<Attribute> attributes;
  std::vector<std::string> label_names;
  Ranking default_ranking;
  LrarParams params;
  std::size_t n = 0;
  std::vector<LrarRule> pool;
};

LrarMiner::LrarMiner(const Dataset& ds, LrarParams params) : state_(std::make_unique<State>()) {
  validate(ds, params);
  auto& st = *state_;
  st.attributes = ds.attributes();
  st.label_names = ds.label_names();
  st.params = params;
  st.n = ds.size();
  st.default_ranking = average_ranking(ds.targets());
  const std::size_t n = ds.size();

  // Candidate consequents are the distinct training rankings.
  const std::set<Ranking> distinct(ds.targets().begin(), ds.targets().end());
  const std::vector<Ranking> consequents(distinct.begin(), distinct.end());
  const std::size_t nc = consequents.size();
  std::vector<std::size_t> target_id(n);
  for (std::size_t row = 0; row < n; ++row) {
    target_id[row] = static_cast<std::size_t>(
        std::lower_bound(consequents.begin(), consequents.end(), ds.target(row)) - consequents.begin());
  }

  // weight[d][c]: censored similarity of target d to consequent c.
  std::vector<std::vector<double>> weight(nc, std::vector<double>(nc));
  // similar[c]: consequents c' with s'(c', c) >= theta, for improvement.
  std::vector<std::vector<std::size_t>> similar(nc);
  for (std::size_t d = 0; d < nc; ++d) {
    for (std::size_t c = 0; c < nc; ++c) {
      const double s = base_similarity(consequents[d], consequents[c], params.base);
      weight[d][c] = meets(s, params.theta) ? s : 0.0;
      if (meets(s, params.theta)) similar[c].push_back(d);
    }
  }

  // Similarity-weighted hit counts n * sup_lr(A -> c) for every c.
  const auto weighted_hits = [&](const Bitset& cover) {
    std::vector<std::size_t> per_target(nc, 0);
    cover.for_each([&](std::size_t row) { ++per_target[target_id[row]]; });
    std::vector<double> hits(nc, 0.0);
    for (std::size_t d = 0; d < nc; ++d) {
      if (per_target[d] == 0) continue;
      const auto count = static_cast<double>(per_target[d]);
      for (std::size_t c = 0; c < nc; ++c) hits[c] += count * weight[d][c];
    }
    return hits;
  };

  const auto index = ItemIndex::from_descriptors(ds);
  const double nd = static_cast<double>(n);
  // max_c sup_lr(A -> c) is anti-monotone in A since all weights are >= 0.
  const ExpandPredicate frequent = [&](const ItemSet& s) {
    const auto count = s.count();
    if (!meets(static_cast<double>(count) / nd, params.minsup)) return false;
    const auto hits = weighted_hits(s.cover);
    return meets(*std::max_element(hits.begin(), hits.end()) / nd, params.minsup);
  };
  SearchConstraint constraint;
  constraint.max_antecedent = params.max_antecedent;

  std::vector<ItemSet> antecedents;
  antecedents.push_back({{}, Bitset(n, true)});
  for (auto& s : enumerate_depth_first(index, frequent, constraint, params.jobs)) antecedents.push_back(std::move(s));
  const std::size_t na = antecedents.size();

  std::map<std::vector<ItemId>, std::size_t> position;
  for (std::size_t t = 0; t < na; ++t) position.emplace(antecedents[t].items, t);

  std::vector<std::size_t> count(na);
  std::vector<std::vector<double>> hits(na);
  std::vector<std::vector<double>> conf(na);
  {
    std::vector<std::vector<double>> h(na);
    parallel_for(na, params.jobs, [&](std::size_t t) { h[t] = weighted_hits(antecedents[t].cover); });
    hits = std::move(h);
  }
  for (std::size_t t = 0; t < na; ++t) {
    count[t] = antecedents[t].count();
    conf[t].resize(nc);
    for (std::size_t c = 0; c < nc; ++c) conf[t][c] = hits[t][c] / static_cast<double>(count[t]);
  }

  // Direct generalizations A \ {a} of every antecedent.
  std::vector<std::vector<std::size_t>> parents(na);
  for (std::size_t t = 1; t < na; ++t) {
    const auto& items = antecedents[t].items;
    for (std::size_t drop = 0; drop < items.size(); ++drop) {
      auto sub = items;
      sub.erase(sub.begin() + static_cast<std::ptrdiff_t>(drop));
      parents[t].push_back(position.at(sub));
    }
  }

  // best_sub[t][c] = max conf(A' -> c) over proper subsets A' of A.
  std::vector<std::size_t> by_size(na);
  std::iota(by_size.begin(), by_size.end(), std::size_t{0});
  std::stable_sort(by_size.begin(), by_size.end(), [&](std::size_t x, std::size_t y) {
    return antecedents[x].items.size() < antecedents[y].items.size();
  });
  std::vector<std::vector<double>> best_sub(na, std::vector<double>(nc, -kInf));
  for (const auto t : by_size) {
    for (const auto p : parents[t]) {
      for (std::size_t c = 0; c < nc; ++c) {
        best_sub[t][c] = std::max({best_sub[t][c], conf[p][c], best_sub[p][c]});
      }
    }
  }

  for (std::size_t t = 0; t < na; ++t) {
    const bool empty = antecedents[t].items.empty();
    for (std::size_t c = 0; c < nc; ++c) {
      const double s = hits[t][c] / nd;
      if (!meets(s, params.minsup)) continue;

      double improvement = kInf;
      if (!empty) {
        double baseline = -kInf;
        for (const auto other : similar[c]) baseline = std::max(baseline, best_sub[t][other]);
        improvement = conf[t][c] - baseline;
        if (!meets(improvement, params.min_imp)) continue;

        const auto rule_hits = round_half_up(hits[t][c]);
        bool significant = true;
        std::vector<std::size_t> generalizations = parents[t];
        generalizations.push_back(0);
        for (const auto g : generalizations) {
          const double p = generalization_p(rule_hits, count[t], std::max(round_half_up(hits[g][c]), rule_hits),
                                            count[g]);
          if (p > params.alpha + kThresholdSlack) {
            significant = false;
            break;
          }
        }
        if (!significant) continue;
      }

      LrarRule rule;
      for (const auto id : antecedents[t].items) rule.antecedent.push_back(std::get<Descriptor>(index.item(id).payload));
      rule.consequent = consequents[c];
      rule.sup_lr = s;
      rule.coverage = static_cast<double>(count[t]) / nd;
      rule.conf_lr = conf[t][c];
      rule.lift_lr = lift(s, rule.coverage, hits[0][c] / nd);
      rule.improvement = improvement;
      rule.cover = antecedents[t].cover;
      st.pool.push_back(std::move(rule));
    }
  }
  std::sort(st.pool.begin(), st.pool.end(), more_relevant);
}

LrarMiner::~LrarMiner() = default;
LrarMiner::LrarMiner(LrarMiner&&) noexcept = default;
LrarMiner& LrarMiner::operator=(LrarMiner&&) noexcept = default;

const std::vector<LrarRule>& LrarMiner::candidates() const noexcept { return state_->pool; }

LrarModel LrarMiner::model(double minconf) const {
  const auto& st = *state_;
  LrarModel m;
  m.attributes = st.attributes;
  m.label_names = st.label_names;
  m.default_ranking = st.default_ranking;
  m.params = st.params;
  m.params.minconf = minconf;
  for (const auto& r : st.pool) {
    if (meets(r.conf_lr, minconf)) m.rules.push_back(r);
  }
  return m;
}

double LrarMiner::coverage(double minconf) const {
  const auto& st = *state_;
  Bitset covered(st.n);
  for (const auto& r : st.pool) {
    if (meets(r.conf_lr, minconf)) covered |= r.cover;
  }
  return static_cast<double>(covered.count()) / static_cast<double>(st.n);
}

LrarModel mine_lrar(const Dataset& ds, const LrarParams& params) {
  return LrarMiner(ds, params).model(params.minconf);
}

Ranking predict(const LrarModel& model, std::span<const ValueCode> descriptor, PredictOptions options) {
  std::vector<const LrarRule*> matching;
  for (const auto& r : model.rules) {
    if (r.covers(descriptor)) matching.push_back(&r);
  }
  const AverageOptions avg{options.strict};
  if (matching.empty()) {
    const Ranking fallback[] = {model.default_ranking};
    return options.strict ? average_ranking(fallback, {}, avg) : model.default_ranking;
  }
  if (options.aggregation == Aggregation::best_rule) return matching.front()->consequent;

  std::vector<Ranking> rankings;
  std::vector<double> weights;
  for (const auto* r : matching) {
    rankings.push_back(r->consequent);
    if (options.aggregation == Aggregation::weighted_confidence) weights.push_back(r->conf_lr);
    if (options.aggregation == Aggregation::weighted_support) weights.push_back(r->sup_lr);
  }
  if (!weights.empty() && std::accumulate(weights.begin(), weights.end(), 0.0) <= 0) weights.clear();
  return average_ranking(rankings, weights, avg);
}

double model_coverage(const LrarModel& model, const Dataset& ds) {
  if (ds.empty()) throw EmptyInputError("model coverage over an empty dataset");
  if (ds.attribute_count() != model.attributes.size()) {
    throw ModelMismatchError("dataset has " + std::to_string(ds.attribute_count()) + " attributes, model expects " +
                             std::to_string(model.attributes.size()));
  }
  std::size_t covered = 0;
  for (std::size_t row = 0; row < ds.size(); ++row) {
    const auto x = ds.descriptor(row);
    covered += std::any_of(model.rules.begin(), model.rules.end(), [&](const LrarRule& r) { return r.covers(x); });
  }
  return static_cast<double>(covered) / static_cast<double>(ds.size());
}

std::string_view to_string(Aggregation a) {
  switch (a) {
    case Aggregation::average: return "average";
    case Aggregation::weighted_confidence: return "weighted-confidence";
    case Aggregation::weighted_support: return "weighted-support";
    case Aggregation::best_rule: return "best-rule";
  }
  return "average";
}

Aggregation aggregation_from_string(std::string_view s) {
  for (const auto a : {Aggregation::average, Aggregation::weighted_confidence, Aggregation::weighted_support,
                       Aggregation::best_rule}) {
    if (to_string(a) == s) return a;
  }
  throw ArgumentError("unknown aggregation '" + std::string(s) + "'");
}

std::string_view to_string(SimilarityKind k) {
  return k == SimilarityKind::kendall_tau ? "tau" : "normalized-tau";
}

SimilarityKind similarity_from_string(std::string_view s) {
  if (s == "tau") return SimilarityKind::kendall_tau;
  if (s == "normalized-tau") return SimilarityKind::normalized_kendall_tau;
  throw ArgumentError("unknown similarity '" + std::string(s) + "'");
}

}  // namespace prefrules
