// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "oracles.hpp"
#include "prefrules/harness.hpp"
#include "prefrules/lrar.hpp"
#include "prefrules/miner.hpp"
#include "prefrules/par.hpp"
#include "prefrules/ranking.hpp"
#include "synthetic.hpp"

using namespace prefrules;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool condition, const std::string& what) {
    if (!condition && ok) {
      ok = false;
      detail = what;
    }
  }
};

struct Criterion {
  int id;
  std::string title;
  double budget_seconds;
  std::function<Outcome()> check;
};

std::string fmt(const char* format, double a, double b = 0, double c = 0) {
  char buffer[256];
  std::snprintf(buffer, sizeof buffer, format, a, b, c);
  return buffer;
}

std::vector<synth::Ranks> all_permutations(int k) {
  synth::Ranks p(static_cast<std::size_t>(k));
  std::iota(p.begin(), p.end(), 1);
  std::vector<synth::Ranks> out;
  do out.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  return out;
}

// 1 -------------------------------------------------------------------------

Outcome three_row_example() {
  Outcome o;
  // Row i is ranked like column 4 - i, so the diagonal runs top-right to bottom-left.
  const std::vector<synth::Ranks> columns{{1, 3, 2}, {2, 1, 3}, {2, 3, 1}};
  const std::vector<synth::Ranks> rows{columns[2], columns[1], columns[0]};
  const double expected[3][3] = {{0.33, 0.00, 1.00}, {0.00, 1.00, 0.00}, {1.00, 0.00, 0.33}};
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      const double s = censored_similarity(Ranking(rows[r]), Ranking(columns[c]), 0.0);
      o.require(std::round(s * 100) / 100 == expected[r][c], fmt("cell (%g,%g) = %.4f", r + 1.0, c + 1.0, s));
    }
  }
  const auto ds = synth::make_dataset({1}, {{0}, {0}, {0}}, rows);
  const Descriptor a[] = {{0, 0}};
  const double sup = sup_lr(ds, a, Ranking(columns[2]), 0.0);
  o.require(std::abs(sup - (1.0 + 1.0 / 3.0) / 3.0) <= 1e-9, fmt("sup_lr = %.12f", sup));
  if (o.ok) o.detail = fmt("matrix matches; sup_lr = %.6f", sup);
  return o;
}

// 2 -------------------------------------------------------------------------

Outcome coefficient_suite() {
  Outcome o;
  std::size_t checked = 0;
  for (int k = 2; k <= 5; ++k) {
    for (const auto& p : all_permutations(k)) {
      const Ranking r(p);
      o.require(kendall_tau(r, r) == 1.0, "tau(p, p) != 1");
      o.require(kendall_tau(r, r.reversed()) == -1.0, "tau(p, reverse p) != -1");
      ++checked;
    }
  }
  std::size_t pairs = 0;
  for (int k = 2; k <= 4; ++k) {
    const auto perms = all_permutations(k);
    for (const auto& p : perms) {
      for (const auto& q : perms) {
        const double t = kendall_tau(Ranking(p), Ranking(q));
        o.require(std::abs(gamma(Ranking(p), Ranking(q)) - t) <= 1e-12, "gamma != tau on a strict pair");
        o.require(std::abs(t - oracle::tau(p, q)) <= 1e-12, "tau disagrees with pair enumeration");
        ++pairs;
      }
    }
  }
  if (o.ok) o.detail = std::to_string(checked) + " orders, " + std::to_string(pairs) + " pairs";
  return o;
}

// 3 -------------------------------------------------------------------------

Outcome miner_oracle_equivalence() {
  Outcome o;
  std::mt19937_64 seeds(3);
  for (int trial = 0; trial < 50 && o.ok; ++trial) {
    const std::size_t n = 1 + seeds() % 32;
    const int items = 1 + static_cast<int>(seeds() % 12);
    const double density = 0.2 + 0.6 * static_cast<double>(seeds() % 100) / 100.0;
    const double minsup = 0.05 + 0.4 * static_cast<double>(seeds() % 100) / 100.0;
    std::mt19937_64 rng(seeds());
    std::bernoulli_distribution present(density);
    std::vector<std::set<int>> transactions(n);
    std::vector<Item> catalogue;
    std::vector<Bitset> covers(static_cast<std::size_t>(items), Bitset(n));
    for (int i = 0; i < items; ++i) {
      catalogue.push_back({Descriptor{static_cast<std::uint32_t>(i), 0}, ItemSide::antecedent,
                           static_cast<std::uint32_t>(i)});
    }
    for (std::size_t r = 0; r < n; ++r) {
      for (int i = 0; i < items; ++i) {
        if (present(rng)) {
          transactions[r].insert(i);
          covers[static_cast<std::size_t>(i)].set(r);
        }
      }
    }
    const ItemIndex index(std::move(catalogue), std::move(covers), n);
    std::map<std::vector<int>, std::size_t> got;
    for (const auto& s : enumerate_frequent(index, minsup)) {
      got[std::vector<int>(s.items.begin(), s.items.end())] = s.count();
    }
    o.require(got == oracle::apriori(transactions, items, minsup), "itemset mismatch on dataset " + std::to_string(trial));
  }

  for (std::uint64_t seed = 1; seed <= 20 && o.ok; ++seed) {
    const std::vector<int> cardinality{2, 3, 2};
    const int k = 3 + static_cast<int>(seed % 2);
    const auto t = synth::random_table(16 + seed % 16, cardinality, static_cast<std::size_t>(k), 3, seed, seed % 3 == 0);
    oracle::PairThresholds th;
    th.minsup = 0.1;
    th.minconf = 0.4;
    th.alpha = seed % 2 ? 1.0 : 0.05;
    th.max_consequent = 3;
    ParParams p;
    p.minsup = th.minsup;
    p.minconf = th.minconf;
    p.alpha = th.alpha;
    p.max_consequent = th.max_consequent;
    using Key = std::pair<oracle::Antecedent, std::vector<std::tuple<int, int, int>>>;
    std::map<Key, std::pair<double, double>> got;
    for (const auto& r : mine_par(t.dataset(), p)) {
      Key key;
      for (const auto& d : r.antecedent) key.first.emplace_back(d.attribute, d.value);
      for (const auto& c : r.consequent) key.second.emplace_back(c.a, c.b, static_cast<int>(c.kind));
      got[key] = {r.sup, r.conf};
    }
    const auto expected = oracle::pair_rules(t.rows, cardinality, t.targets, k, th);
    o.require(got.size() == expected.size(), "PAR rule count mismatch on dataset " + std::to_string(seed));
    for (const auto& e : expected) {
      const auto it = got.find({e.antecedent, e.consequent});
      o.require(it != got.end() && std::abs(it->second.first - e.sup) <= 1e-12 &&
                    std::abs(it->second.second - e.conf) <= 1e-12,
                "PAR rule missing or off on dataset " + std::to_string(seed));
    }
  }
  if (o.ok) o.detail = "50 itemset datasets, 20 PAR datasets";
  return o;
}

// 4 -------------------------------------------------------------------------

Outcome theta_one_degeneracy() {
  Outcome o;
  std::size_t rules = 0;
  for (std::uint64_t seed = 101; seed <= 110 && o.ok; ++seed) {
    const std::vector<int> cardinality{2, 3, 2};
    const auto t = synth::random_table(20, cardinality, 3, 3, seed);
    oracle::Thresholds th;
    th.minsup = 0.1;
    th.alpha = seed % 2 ? 1.0 : 0.05;
    LrarParams p;
    p.theta = 1.0;
    p.minsup = th.minsup;
    p.alpha = th.alpha;
    const auto model = mine_lrar(t.dataset(), p);
    const auto expected = oracle::car_rules(t.rows, cardinality, t.targets, th);
    std::map<std::pair<oracle::Antecedent, synth::Ranks>, const LrarRule*> got;
    for (const auto& r : model.rules) {
      oracle::Antecedent a;
      for (const auto& d : r.antecedent) a.emplace_back(d.attribute, d.value);
      const auto ranks = r.consequent.ranks();
      got[{a, synth::Ranks(ranks.begin(), ranks.end())}] = &r;
    }
    o.require(got.size() == expected.size(), "rule count differs on fixture " + std::to_string(seed));
    for (const auto& e : expected) {
      const auto it = got.find({e.antecedent, e.consequent});
      o.require(it != got.end(), "rule missing on fixture " + std::to_string(seed));
      if (it == got.end()) break;
      o.require(std::abs(it->second->sup_lr - e.sup) <= 1e-12 && std::abs(it->second->conf_lr - e.conf) <= 1e-12 &&
                    std::abs(it->second->lift_lr - e.lift) <= 1e-12,
                "metrics differ on fixture " + std::to_string(seed));
    }
    rules += expected.size();
  }
  if (o.ok) o.detail = std::to_string(rules) + " rules over 10 fixtures";
  return o;
}

// 5 -------------------------------------------------------------------------

Outcome average_ranking_optimality() {
  Outcome o;
  std::mt19937_64 rng(5);
  int cases = 0;
  int agree = 0;
  while (cases < 200) {
    const std::size_t k = 2 + rng() % 4;
    const std::size_t count = 1 + rng() % 6;
    std::vector<synth::Ranks> raw;
    std::vector<Ranking> rankings;
    for (std::size_t i = 0; i < count; ++i) {
      raw.push_back(synth::random_permutation(k, rng));
      rankings.emplace_back(raw.back());
    }
    std::vector<int> sums(k, 0);
    for (const auto& r : raw) {
      for (std::size_t j = 0; j < k; ++j) sums[j] += r[j];
    }
    if (std::set<int>(sums.begin(), sums.end()).size() != k) continue;  // tied means
    ++cases;
    agree += average_ranking(rankings) == Ranking(oracle::squared_distance_argmin(raw));
  }
  o.require(agree == cases, std::to_string(agree) + "/" + std::to_string(cases) + " cases agree");
  if (o.ok) o.detail = std::to_string(agree) + "/" + std::to_string(cases) + " cases agree";
  return o;
}

// 6 -------------------------------------------------------------------------

Outcome fisher_exact() {
  Outcome o;
  std::size_t tables = 0;
  double worst = 0;
  for (std::uint64_t n = 1; n <= 40; ++n) {
    for (std::uint64_t a = 0; a <= n; ++a) {
      for (std::uint64_t b = 0; a + b <= n; ++b) {
        for (std::uint64_t c = 0; a + b + c <= n; ++c) {
          const auto d = n - a - b - c;
          worst = std::max(worst, std::abs(fisher_exact_p(a, b, c, d) - oracle::fisher_tail(a, b, c, d)));
          ++tables;
        }
      }
    }
  }
  o.require(worst <= 1e-10, fmt("max error %.3g", worst));
  if (o.ok) o.detail = std::to_string(tables) + " tables, max error " + fmt("%.2g", worst);
  return o;
}

// 7 -------------------------------------------------------------------------

Outcome tuning_contract() {
  Outcome o;
  // Fixed examples.
  {
    const auto r = tune_minconf([](double) { return 1.0; }, 0.05, 0.95);
    o.require(r.minconf == 1.0 && r.runs == 1, "full coverage at 1.0 should stop immediately");
  }
  {
    const auto r = tune_minconf([](double m) { return m <= 0.85 + 1e-9 ? 0.96 : 0.5; }, 0.05, 0.95);
    o.require(std::abs(r.minconf - 0.85) <= 1e-12, fmt("third decrement gave %.4f", r.minconf));
  }
  {
    const auto r = tune_minconf([](double) { return 0.0; }, 0.05, 0.95);
    o.require(r.minconf == 0.0 && r.runs == 21, "unreachable coverage should floor at 0 after 21 runs");
  }
  // Scripted monotone curves.
  std::mt19937_64 rng(7);
  std::size_t scripts = 0;
  for (; scripts < 1000; ++scripts) {
    const double step = 0.01 + static_cast<double>(rng() % 100) / 101.0;
    const double min_m = 0.01 + static_cast<double>(rng() % 100) / 101.0;
    std::vector<double> knots(5);
    for (auto& x : knots) x = static_cast<double>(rng() % 1000) / 1000.0;
    std::sort(knots.begin(), knots.end());
    // Coverage as a step function, rising as minconf falls.
    const auto curve = [&](double m) {
      double c = 0;
      for (const double x : knots) c += m <= x ? 0.2 : 0.0;
      return c;
    };
    std::size_t calls = 0;
    const auto r = tune_minconf([&](double m) { ++calls; return curve(m); }, step, min_m);
    const auto bound = static_cast<std::size_t>(std::ceil(1.0 / step)) + 1;
    o.require(curve(r.minconf) >= min_m || r.minconf == 0.0, "returned minconf misses the coverage target");
    o.require(calls <= bound && r.runs == calls, "too many mining runs");
  }
  if (o.ok) o.detail = "3 examples, " + std::to_string(scripts) + " scripted curves";
  return o;
}

// 8 -------------------------------------------------------------------------

Outcome theta_trend() {
  Outcome o;
  // 3 noisy prototypes over 5 labels; 8 attributes with 3 values, two of them informative.
  const auto ds = synth::prototype_table(500, 5, 3, 8, 3, 5, 0.9, 1).dataset();
  EvalParams p;
  p.lrar.theta = 0.5;
  const auto half = evaluate_cv(ds, p, 10, 1);
  p.lrar.theta = 1.0;
  const auto one = evaluate_cv(ds, p, 10, 1);
  o.require(half.mean_tau > one.mean_tau, fmt("tau(0.5) = %.4f, tau(1.0) = %.4f", half.mean_tau, one.mean_tau));
  if (o.ok) {
    o.detail = fmt("tau(0.5) = %.4f > tau(1.0) = %.4f, U_pi = %.2f", half.mean_tau, one.mean_tau,
                   unique_ranking_proportion(ds));
  }
  return o;
}

// 9 -------------------------------------------------------------------------

Outcome monotonicity() {
  Outcome o;
  const std::vector<Dataset> fixtures{synth::prototype_table(300, 5, 3, 5, 3, 3, 0.8, 9).dataset(),
                                      synth::random_table(200, {3, 3, 2, 2}, 4, 6, 9).dataset()};
  const auto grid = parse_grid("0.001:0.1:0.001");
  for (std::size_t f = 0; f < fixtures.size(); ++f) {
    const LrarParams base;
    std::size_t previous = std::numeric_limits<std::size_t>::max();
    for (const double minsup : grid) {
      auto p = base;
      p.minsup = minsup;
      const auto count = mine_lrar(fixtures[f], p).rules.size();
      o.require(count <= previous, fmt("fixture %g: rule count rises at minsup %.3f", static_cast<double>(f), minsup));
      previous = count;
    }
  }

  const auto& ds = fixtures[0];
  std::mt19937_64 rng(99);
  for (int probe = 0; probe < 1000; ++probe) {
    std::vector<Descriptor> a;
    for (std::uint32_t attr = 0; attr < ds.attribute_count(); ++attr) {
      if (rng() % 3 == 0) a.push_back({attr, static_cast<ValueCode>(rng() % 3)});
    }
    const Ranking pi(synth::random_permutation(5, rng));
    double previous = std::numeric_limits<double>::infinity();
    for (int step = 0; step <= 10; ++step) {
      const double s = sup_lr(ds, a, pi, step / 10.0);
      o.require(s <= previous, "sup_lr rises with theta on probe " + std::to_string(probe));
      previous = s;
    }
  }
  if (o.ok) o.detail = std::to_string(grid.size()) + "-point minsup grid on 2 fixtures, 1000 probes";
  return o;
}

// 10 ------------------------------------------------------------------------

Outcome consolidation() {
  Outcome o;
  const PairwiseRelation rels[] = {PairwiseRelation::precedes(0, 6), PairwiseRelation::precedes(6, 2)};
  const auto c = consolidate_pairwise(rels, 7);
  const auto names = default_label_names(7);
  o.require(c.subranking.has_value(), "not recognized as a chain");
  if (c.subranking) {
    o.require(to_vector_text(*c.subranking) == "(1,0,3,0,0,0,2)", "vector " + to_vector_text(*c.subranking));
  }
  o.require(to_text(c, names) == "L1>L7>L3", "text " + to_text(c, names));
  ParRule rule;
  rule.consequent.assign(std::begin(rels), std::end(rels));
  const auto d = describe_rule(rule, 7, names);
  o.require(d.subranking && *d.subranking == Ranking({1, 0, 3, 0, 0, 0, 2}), "describe_rule subranking differs");
  if (o.ok) o.detail = "L1>L7>L3 = (1,0,3,0,0,0,2)";
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "three-row similarity example", 1, three_row_example},
      {2, "coefficient suite", 60, coefficient_suite},
      {3, "miner oracle equivalence", 60, miner_oracle_equivalence},
      {4, "theta = 1 matches class association rules", 60, theta_one_degeneracy},
      {5, "average ranking optimality", 60, average_ranking_optimality},
      {6, "Fisher exact test", 60, fisher_exact},
      {7, "minconf tuning contract", 60, tuning_contract},
      {8, "accuracy trend theta 0.5 vs 1.0", 300, theta_trend},
      {9, "monotonicity sweeps", 120, monotonicity},
      {10, "pairwise consolidation", 1, consolidation},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o.ok = false;
      o.detail = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.ok && seconds > c.budget_seconds) {
      o.ok = false;
      o.detail += fmt(" (over budget: %.2fs > %.0fs)", seconds, c.budget_seconds);
    }
    failures += !o.ok;
    std::printf("%s criterion %d: %s: %s [%.2fs]\n", o.ok ? "PASS" : "FAIL", c.id, c.title.c_str(), o.detail.c_str(),
                seconds);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
