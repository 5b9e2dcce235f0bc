#include "prefrules/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "prefrules/error.hpp"

namespace prefrules {

Ranking::Ranking(std::vector<int> ranks) : ranks_(std::move(ranks)) {
  std::vector<char> seen(ranks_.size() + 1, 0);
  int top = 0;
  for (const int r : ranks_) {
    if (r < 0 || static_cast<std::size_t>(r) > ranks_.size()) {
      throw InvalidOrderError("rank " + std::to_string(r) + " out of range");
    }
    seen[static_cast<std::size_t>(r)] = 1;
    top = std::max(top, r);
  }
  for (int r = 1; r <= top; ++r) {
    if (!seen[static_cast<std::size_t>(r)]) {
      throw InvalidOrderError("ranks are not dense: rank " + std::to_string(r) + " missing");
    }
  }
}

Ranking Ranking::identity(std::size_t k) {
  std::vector<int> ranks(k);
  std::iota(ranks.begin(), ranks.end(), 1);
  return Ranking(std::move(ranks));
}

int Ranking::depth() const noexcept {
  return ranks_.empty() ? 0 : *std::max_element(ranks_.begin(), ranks_.end());
}

bool Ranking::is_total() const noexcept {
  return std::all_of(ranks_.begin(), ranks_.end(), [](int r) { return r > 0; });
}

bool Ranking::is_strict_total() const noexcept {
  return is_total() && static_cast<std::size_t>(depth()) == ranks_.size();
}

bool Ranking::has_ties() const noexcept {
  std::vector<int> positive;
  for (const int r : ranks_) {
    if (r > 0) positive.push_back(r);
  }
  return static_cast<std::size_t>(depth()) != positive.size();
}

Ranking Ranking::reversed() const {
  const int top = depth();
  std::vector<int> out(ranks_.size());
  std::transform(ranks_.begin(), ranks_.end(), out.begin(),
                 [top](int r) { return r == 0 ? 0 : top + 1 - r; });
  return Ranking(std::move(out));
}

PairwiseRelation PairwiseRelation::precedes(LabelId winner, LabelId loser) {
  return make(winner, loser, PairKind::a_precedes);
}

PairwiseRelation PairwiseRelation::make(LabelId x, LabelId y, PairKind kind) {
  if (x == y) throw ArgumentError("a pairwise relation needs two distinct labels");
  if (x < y) return {x, y, kind};
  if (kind == PairKind::a_precedes) return {y, x, PairKind::b_precedes};
  if (kind == PairKind::b_precedes) return {y, x, PairKind::a_precedes};
  return {y, x, kind};
}

PairCounts pair_counts(const Ranking& p, const Ranking& q) {
  if (p.size() != q.size()) {
    throw DimensionError("rankings over " + std::to_string(p.size()) + " and " +
                         std::to_string(q.size()) + " labels");
  }
  PairCounts counts;
  const auto k = static_cast<LabelId>(p.size());
  for (LabelId a = 0; a < k; ++a) {
    for (LabelId b = a + 1; b < k; ++b) {
      if (p[a] == 0 || p[b] == 0 || q[a] == 0 || q[b] == 0) {
        ++counts.incomparable;
        continue;
      }
      const int dp = p[a] - p[b];
      const int dq = q[a] - q[b];
      if (dp == 0 && dq == 0) {
        ++counts.ties_both;
      } else if (dp == 0) {
        ++counts.ties_left;
      } else if (dq == 0) {
        ++counts.ties_right;
      } else if ((dp < 0) == (dq < 0)) {
        ++counts.concordant;
      } else {
        ++counts.discordant;
      }
    }
  }
  return counts;
}

double kendall_tau(const Ranking& p, const Ranking& q) {
  if (p.size() != q.size()) throw DimensionError("ranking length mismatch");
  if (!p.is_strict_total() || !q.is_strict_total()) {
    throw InvalidOrderError("kendall_tau needs strict total orders; use kendall_tau_b or gamma");
  }
  const auto c = pair_counts(p, q);
  const double pairs = static_cast<double>(c.total());
  if (pairs == 0) throw UndefinedError("kendall_tau is undefined for fewer than two labels");
  return (static_cast<double>(c.concordant) - static_cast<double>(c.discordant)) / pairs;
}

double kendall_tau_b(const Ranking& p, const Ranking& q) {
  if (p.size() != q.size()) throw DimensionError("ranking length mismatch");
  if (!p.is_total() || !q.is_total()) {
    throw InvalidOrderError("kendall_tau_b needs total orders without absent labels");
  }
  const auto c = pair_counts(p, q);
  const double untied = static_cast<double>(c.concordant + c.discordant);
  const double left = untied + static_cast<double>(c.ties_left);
  const double right = untied + static_cast<double>(c.ties_right);
  if (left == 0 || right == 0) throw UndefinedError("kendall_tau_b is undefined: a ranking is fully tied");
  return (static_cast<double>(c.concordant) - static_cast<double>(c.discordant)) /
         std::sqrt(left * right);
}

double gamma(const Ranking& p, const Ranking& q) {
  const auto c = pair_counts(p, q);
  const auto untied = c.concordant + c.discordant;
  if (untied == 0) throw UndefinedError("gamma is undefined: no pair is ordered in both rankings");
  return (static_cast<double>(c.concordant) - static_cast<double>(c.discordant)) /
         static_cast<double>(untied);
}

double base_similarity(const Ranking& p, const Ranking& q, SimilarityKind base) {
  const double tau = kendall_tau(p, q);
  return base == SimilarityKind::kendall_tau ? tau : (tau + 1.0) / 2.0;
}

double censored_similarity(const Ranking& p, const Ranking& q, double theta, SimilarityKind base) {
  const double s = base_similarity(p, q, base);
  // Slack absorbs rounding in the normalized form, e.g. (0.2 + 1) / 2 vs 0.6.
  return s >= theta - 1e-12 ? s : 0.0;
}

Ranking average_ranking(std::span<const Ranking> rankings, std::span<const double> weights,
                        AverageOptions options) {
  if (rankings.empty()) throw EmptyInputError("average_ranking of an empty set");
  const std::size_t k = rankings.front().size();
  for (const auto& r : rankings) {
    if (r.size() != k) throw DimensionError("average_ranking over rankings of different length");
    if (!r.is_total()) throw InvalidOrderError("average_ranking needs total orders");
  }
  const bool weighted = !weights.empty();
  if (weighted) {
    if (weights.size() != rankings.size()) throw ArgumentError("one weight per ranking expected");
    double total = 0;
    for (const double w : weights) {
      if (!(w >= 0) || !std::isfinite(w)) throw ArgumentError("weights must be finite and non-negative");
      total += w;
    }
    if (!(total > 0)) throw ArgumentError("weights must have a positive sum");
  }

  // Unweighted sums stay integral so equal means compare exactly.
  std::vector<double> mean(k, 0.0);
  for (std::size_t i = 0; i < rankings.size(); ++i) {
    const double w = weighted ? weights[i] : 1.0;
    for (LabelId j = 0; j < k; ++j) mean[j] += w * rankings[i][j];
  }
  const auto same = [weighted](double x, double y) {
    if (!weighted) return x == y;
    return std::abs(x - y) <= 1e-12 * std::max({1.0, std::abs(x), std::abs(y)});
  };

  std::vector<LabelId> order(k);
  std::iota(order.begin(), order.end(), LabelId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](LabelId a, LabelId b) { return mean[a] < mean[b] && !same(mean[a], mean[b]); });

  std::vector<int> ranks(k, 0);
  int rank = 0;
  double group_mean = 0;
  for (std::size_t pos = 0; pos < k; ++pos) {
    const LabelId label = order[pos];
    if (options.strict || pos == 0 || !same(mean[label], group_mean)) {
      ++rank;
      group_mean = mean[label];
    }
    ranks[label] = rank;
  }
  return Ranking(std::move(ranks));
}

std::vector<PairwiseRelation> decompose_pairwise(const Ranking& p) {
  std::vector<PairwiseRelation> out;
  const auto k = static_cast<LabelId>(p.size());
  out.reserve(k * (k - (k > 0 ? 1 : 0)) / 2);
  for (LabelId a = 0; a < k; ++a) {
    for (LabelId b = a + 1; b < k; ++b) {
      PairKind kind;
      if (p[a] == 0 || p[b] == 0) {
        kind = PairKind::incomparable;
      } else if (p[a] == p[b]) {
        kind = PairKind::tie;
      } else {
        kind = p[a] < p[b] ? PairKind::a_precedes : PairKind::b_precedes;
      }
      out.push_back({a, b, kind});
    }
  }
  return out;
}

}  // namespace prefrules
