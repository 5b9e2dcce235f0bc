// Slow, independent reference implementations used to cross-check the library.
// They work on plain vectors and share no code with the production paths.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <tuple>
#include <vector>

namespace oracle {

inline constexpr double kSlack = 1e-12;
inline bool at_least(double x, double t) { return x >= t - kSlack; }

// Hypergeometric tail -------------------------------------------------------

inline std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;  // exact: r * (n-k+i) divisible by i
  return r;
}

/// Binomial coefficient as a long double product (no lgamma).
inline long double choose_ld(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  long double r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
  return r;
}

/// P(X >= a) for the 2x2 table [[a, b], [c, d]] with fixed margins, by
/// enumerating every table with the same margins.
inline double fisher_tail(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  const std::uint64_t row = a + b;  // first row total
  const std::uint64_t col = a + c;  // first column total
  const std::uint64_t n = a + b + c + d;
  long double hit = 0;
  long double all = 0;
  for (std::uint64_t x = 0; x <= std::min(row, col); ++x) {
    if (row - x > n - col) continue;
    const auto ways = choose_ld(col, x) * choose_ld(n - col, row - x);
    all += ways;
    if (x >= a) hit += ways;
  }
  return static_cast<double>(hit / all);
}

// Rankings ------------------------------------------------------------------

using Ranks = std::vector<int>;

/// Kendall tau of two strict total orders by direct pair enumeration.
inline double tau(const Ranks& p, const Ranks& q) {
  int c = 0;
  int d = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      const long s = static_cast<long>(p[i] - p[j]) * (q[i] - q[j]);
      if (s > 0) ++c;
      if (s < 0) ++d;
    }
  }
  const double h = static_cast<double>(p.size() * (p.size() - 1) / 2);
  return (c - d) / h;
}

/// Rank vector minimizing sum_i sum_j (pi(j) - pi_i(j))^2 over all strict orders.
inline Ranks squared_distance_argmin(const std::vector<Ranks>& rankings) {
  const std::size_t k = rankings.front().size();
  Ranks perm(k);
  std::iota(perm.begin(), perm.end(), 1);
  Ranks best;
  long best_cost = std::numeric_limits<long>::max();
  do {
    long cost = 0;
    for (const auto& r : rankings) {
      for (std::size_t j = 0; j < k; ++j) cost += static_cast<long>(perm[j] - r[j]) * (perm[j] - r[j]);
    }
    if (cost < best_cost) {
      best_cost = cost;
      best = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Frequent itemsets ---------------------------------------------------------

struct Constraint {
  std::vector<bool> consequent_side;  // per item
  std::size_t max_antecedent = 0;
  std::size_t max_consequent = 0;
};

inline bool shape_ok(const std::vector<int>& set, const Constraint& c) {
  std::size_t ant = 0;
  std::size_t cons = 0;
  for (const int i : set) (c.consequent_side.empty() || !c.consequent_side[i] ? ant : cons)++;
  return (c.max_antecedent == 0 || ant <= c.max_antecedent) && (c.max_consequent == 0 || cons <= c.max_consequent);
}

/// Level-wise APRIORI: candidate join of (k-1)-itemsets sharing a prefix,
/// subset pruning, then one pass over the transactions per level.
/// Returns itemset -> containment count.
inline std::map<std::vector<int>, std::size_t> apriori(const std::vector<std::set<int>>& transactions, int items,
                                                       double minsup, const Constraint& constraint = {}) {
  std::map<std::vector<int>, std::size_t> out;
  const double n = static_cast<double>(transactions.size());
  if (transactions.empty()) return out;
  const auto count = [&](const std::vector<int>& s) {
    std::size_t c = 0;
    for (const auto& t : transactions) {
      c += std::all_of(s.begin(), s.end(), [&](int i) { return t.count(i) > 0; });
    }
    return c;
  };

  std::vector<std::vector<int>> level;
  for (int i = 0; i < items; ++i) {
    const std::vector<int> s{i};
    if (!shape_ok(s, constraint)) continue;
    const auto c = count(s);
    if (at_least(static_cast<double>(c) / n, minsup)) {
      out[s] = c;
      level.push_back(s);
    }
  }
  while (!level.empty()) {
    std::set<std::vector<int>> frequent(level.begin(), level.end());
    std::vector<std::vector<int>> next;
    for (std::size_t x = 0; x < level.size(); ++x) {
      for (std::size_t y = x + 1; y < level.size(); ++y) {
        const auto& a = level[x];
        const auto& b = level[y];
        if (!std::equal(a.begin(), a.end() - 1, b.begin())) continue;
        auto cand = a;
        cand.push_back(b.back());
        std::sort(cand.begin(), cand.end());
        if (!shape_ok(cand, constraint)) continue;
        bool all_subsets = true;
        for (std::size_t drop = 0; drop < cand.size() && all_subsets; ++drop) {
          auto sub = cand;
          sub.erase(sub.begin() + static_cast<long>(drop));
          all_subsets = frequent.count(sub) > 0;
        }
        if (!all_subsets) continue;
        const auto c = count(cand);
        if (at_least(static_cast<double>(c) / n, minsup)) {
          out[cand] = c;
          next.push_back(cand);
        }
      }
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    level = std::move(next);
  }
  return out;
}

// Rule references -----------------------------------------------------------

/// Descriptor rows: row[a] = value code of attribute a.
using Rows = std::vector<std::vector<int>>;
/// Antecedent as (attribute, value) pairs sorted by attribute.
using Antecedent = std::vector<std::pair<int, int>>;

inline bool matches(const std::vector<int>& row, const Antecedent& a) {
  return std::all_of(a.begin(), a.end(), [&](const auto& d) { return row[d.first] == d.second; });
}

/// Every antecedent over the attributes (each attribute absent or fixed to one value).
inline std::vector<Antecedent> all_antecedents(const std::vector<int>& cardinality) {
  std::vector<Antecedent> out{{}};
  for (int a = 0; a < static_cast<int>(cardinality.size()); ++a) {
    const auto size = out.size();
    for (std::size_t i = 0; i < size; ++i) {
      for (int v = 0; v < cardinality[a]; ++v) {
        auto ext = out[i];
        ext.emplace_back(a, v);
        out.push_back(ext);
      }
    }
  }
  return out;
}

inline std::vector<Antecedent> proper_subsets(const Antecedent& a) {
  std::vector<Antecedent> out;
  const std::size_t total = std::size_t{1} << a.size();
  for (std::size_t mask = 0; mask + 1 < total; ++mask) {
    Antecedent sub;
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (mask >> i & 1u) sub.push_back(a[i]);
    }
    out.push_back(sub);
  }
  return out;
}

struct ClassRule {
  Antecedent antecedent;
  Ranks consequent;
  double sup = 0;
  double conf = 0;
  double lift = 0;
  auto key() const { return std::tie(antecedent, consequent); }
};

struct Thresholds {
  double minsup = 0.01;
  double minconf = 0;
  double min_imp = 0.01;
  double alpha = 0.05;
};

/// Class association rules with the ranking as class: classical sup/conf,
/// improvement over every proper antecedent subset with the same class, and
/// the Fisher test against the empty antecedent and every A minus one item.
inline std::vector<ClassRule> car_rules(const Rows& rows, const std::vector<int>& cardinality,
                                        const std::vector<Ranks>& targets, const Thresholds& t) {
  const double n = static_cast<double>(rows.size());
  const std::set<Ranks> classes(targets.begin(), targets.end());
  const auto counts = [&](const Antecedent& a, const Ranks& cls) {
    std::size_t cover = 0;
    std::size_t hits = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!matches(rows[r], a)) continue;
      ++cover;
      hits += targets[r] == cls;
    }
    return std::pair{cover, hits};
  };
  std::vector<ClassRule> out;
  for (const auto& a : all_antecedents(cardinality)) {
    for (const auto& cls : classes) {
      const auto [cover, hits] = counts(a, cls);
      if (cover == 0) continue;
      const double sup = static_cast<double>(hits) / n;
      const double conf = static_cast<double>(hits) / static_cast<double>(cover);
      if (!at_least(sup, t.minsup) || !at_least(conf, t.minconf)) continue;
      if (!a.empty()) {
        double imp = std::numeric_limits<double>::infinity();
        for (const auto& sub : proper_subsets(a)) {
          const auto [sc, sh] = counts(sub, cls);
          imp = std::min(imp, conf - static_cast<double>(sh) / static_cast<double>(sc));
        }
        if (!at_least(imp, t.min_imp)) continue;
        bool significant = true;
        std::vector<Antecedent> generals{Antecedent{}};
        for (std::size_t drop = 0; drop < a.size(); ++drop) {
          auto g = a;
          g.erase(g.begin() + static_cast<long>(drop));
          generals.push_back(g);
        }
        for (const auto& g : generals) {
          const auto [gc, gh] = counts(g, cls);
          const double p = fisher_tail(hits, cover - hits, gh - hits, (gc - cover) - (gh - hits));
          if (p > t.alpha + kSlack) significant = false;
        }
        if (!significant) continue;
      }
      const auto [all, prior] = counts({}, cls);
      (void)all;
      out.push_back({a, cls, sup, conf, sup / (static_cast<double>(cover) / n * (static_cast<double>(prior) / n))});
    }
  }
  return out;
}

/// Pairwise outcome of labels i < j: 0 = i first, 1 = j first, 2 = tie, 3 = incomparable.
inline int pair_outcome(const Ranks& r, int i, int j) {
  if (r[i] == 0 || r[j] == 0) return 3;
  if (r[i] == r[j]) return 2;
  return r[i] < r[j] ? 0 : 1;
}

struct PairRule {
  Antecedent antecedent;
  std::vector<std::tuple<int, int, int>> consequent;  // (i, j, outcome), sorted
  double sup = 0;
  double conf = 0;
  double lift = 0;
  auto key() const { return std::tie(antecedent, consequent); }
};

struct PairThresholds {
  double minsup = 0.01;
  double minconf = 0.5;
  double min_lift = 0;
  double min_imp = 0.01;
  double alpha = 0.05;
  std::size_t max_consequent = 4;
};

/// Brute force over every antecedent and every consistent set of pairwise
/// statements (one outcome per chosen pair).
inline std::vector<PairRule> pair_rules(const Rows& rows, const std::vector<int>& cardinality,
                                        const std::vector<Ranks>& targets, int k, const PairThresholds& t) {
  const double n = static_cast<double>(rows.size());
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < k; ++i) {
    for (int j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
  }
  // Every consequent: a subset of pairs with an outcome each.
  std::vector<std::vector<std::tuple<int, int, int>>> consequents;
  const std::size_t h = pairs.size();
  for (std::size_t mask = 1; mask < (std::size_t{1} << h); ++mask) {
    std::vector<std::size_t> chosen;
    for (std::size_t p = 0; p < h; ++p) {
      if (mask >> p & 1u) chosen.push_back(p);
    }
    if (t.max_consequent != 0 && chosen.size() > t.max_consequent) continue;
    std::size_t combos = 1;
    for (std::size_t i = 0; i < chosen.size(); ++i) combos *= 4;
    for (std::size_t code = 0; code < combos; ++code) {
      std::vector<std::tuple<int, int, int>> c;
      std::size_t rest = code;
      for (const auto p : chosen) {
        c.emplace_back(pairs[p].first, pairs[p].second, static_cast<int>(rest % 4));
        rest /= 4;
      }
      consequents.push_back(c);
    }
  }
  const auto holds = [&](std::size_t r, const std::vector<std::tuple<int, int, int>>& c) {
    return std::all_of(c.begin(), c.end(), [&](const auto& s) {
      return pair_outcome(targets[r], std::get<0>(s), std::get<1>(s)) == std::get<2>(s);
    });
  };
  std::vector<PairRule> out;
  for (const auto& c : consequents) {
    std::vector<char> hold(rows.size());
    std::size_t c_count = 0;
    for (std::size_t r = 0; r < rows.size(); ++r) c_count += (hold[r] = holds(r, c));
    if (c_count == 0) continue;
    const auto counts = [&](const Antecedent& a) {
      std::size_t cover = 0;
      std::size_t hits = 0;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!matches(rows[r], a)) continue;
        ++cover;
        hits += hold[r];
      }
      return std::pair{cover, hits};
    };
    for (const auto& a : all_antecedents(cardinality)) {
      const auto [cover, hits] = counts(a);
      if (cover == 0) continue;
      const double sup = static_cast<double>(hits) / n;
      const double conf = static_cast<double>(hits) / static_cast<double>(cover);
      const double lift = sup / ((static_cast<double>(cover) / n) * (static_cast<double>(c_count) / n));
      if (!at_least(sup, t.minsup) || !at_least(conf, t.minconf) || !at_least(lift, t.min_lift)) continue;
      if (!a.empty()) {
        double imp = std::numeric_limits<double>::infinity();
        for (const auto& sub : proper_subsets(a)) {
          const auto [sc, sh] = counts(sub);
          imp = std::min(imp, conf - static_cast<double>(sh) / static_cast<double>(sc));
        }
        if (!at_least(imp, t.min_imp)) continue;
        bool significant = true;
        std::vector<Antecedent> generals{Antecedent{}};
        for (std::size_t drop = 0; drop < a.size(); ++drop) {
          auto g = a;
          g.erase(g.begin() + static_cast<long>(drop));
          generals.push_back(g);
        }
        for (const auto& g : generals) {
          const auto [gc, gh] = counts(g);
          if (fisher_tail(hits, cover - hits, gh - hits, (gc - cover) - (gh - hits)) > t.alpha + kSlack) {
            significant = false;
          }
        }
        if (!significant) continue;
      }
      out.push_back({a, c, sup, conf, lift});
    }
  }
  return out;
}

}  // namespace oracle
