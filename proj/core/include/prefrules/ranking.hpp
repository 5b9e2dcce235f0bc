#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace prefrules {

using LabelId = std::uint32_t;

/// Dense rank vector over k labels.
///
/// Index is the label id, value is its rank: 1 is most preferred, equal values
/// are ties and 0 marks a label that is absent (incomparable to all others).
/// Positive ranks are dense, i.e. they cover exactly {1, ..., r}.
class Ranking {
 public:
  Ranking() = default;

  /// Validates density; throws InvalidOrderError otherwise.
  explicit Ranking(std::vector<int> ranks);

  /// The identity ranking (1, 2, ..., k).
  static Ranking identity(std::size_t k);

  std::size_t size() const noexcept { return ranks_.size(); }
  int operator[](LabelId label) const { return ranks_[label]; }
  std::span<const int> ranks() const noexcept { return ranks_; }

  /// Highest rank used (0 for an empty subranking).
  int depth() const noexcept;

  bool is_strict_total() const noexcept;
  /// All labels ranked; ties allowed.
  bool is_total() const noexcept;
  bool has_ties() const noexcept;

  /// Mirror image: rank r becomes depth()+1-r, absent labels stay absent.
  Ranking reversed() const;

  friend bool operator==(const Ranking&, const Ranking&) = default;
  friend auto operator<=>(const Ranking&, const Ranking&) = default;

 private:
  std::vector<int> ranks_;
};

enum class PairKind : std::uint8_t { a_precedes, b_precedes, tie, incomparable };

/// Outcome of comparing labels a and b, stored canonically with a < b.
struct PairwiseRelation {
  LabelId a = 0;
  LabelId b = 1;
  PairKind kind = PairKind::a_precedes;

  /// Builds "winner precedes loser" in canonical form.
  static PairwiseRelation precedes(LabelId winner, LabelId loser);
  static PairwiseRelation make(LabelId x, LabelId y, PairKind kind);

  friend bool operator==(const PairwiseRelation&, const PairwiseRelation&) = default;
  friend auto operator<=>(const PairwiseRelation&, const PairwiseRelation&) = default;
};

struct PairCounts {
  std::size_t concordant = 0;
  std::size_t discordant = 0;
  std::size_t ties_left = 0;   // tied in the first ranking only
  std::size_t ties_right = 0;  // tied in the second ranking only
  std::size_t ties_both = 0;
  std::size_t incomparable = 0;

  std::size_t total() const noexcept {
    return concordant + discordant + ties_left + ties_right + ties_both + incomparable;
  }
  friend bool operator==(const PairCounts&, const PairCounts&) = default;
};

PairCounts pair_counts(const Ranking& p, const Ranking& q);

/// (C - D) / (k(k-1)/2). Both arguments must be strict total orders.
double kendall_tau(const Ranking& p, const Ranking& q);

/// Tie-corrected tau: (C - D) / sqrt((C + D + Tp)(C + D + Tq)).
/// Requires total orders (no absent labels).
double kendall_tau_b(const Ranking& p, const Ranking& q);

/// Goodman-Kruskal gamma over the pairs ranked in both arguments.
double gamma(const Ranking& p, const Ranking& q);

enum class SimilarityKind {
  kendall_tau,             ///< raw tau in [-1, 1]
  normalized_kendall_tau,  ///< (tau + 1) / 2 in [0, 1]
};

/// Base coefficient used inside the censored similarity.
double base_similarity(const Ranking& p, const Ranking& q, SimilarityKind base);

/// Base similarity if it reaches theta, else 0.
double censored_similarity(const Ranking& p, const Ranking& q, double theta,
                           SimilarityKind base = SimilarityKind::kendall_tau);

struct AverageOptions {
  /// Break equal means by lowest label id instead of producing a tie.
  bool strict = false;
};

/// Ranks labels by their (weighted) mean rank. Equal means become ties unless
/// options.strict is set.
Ranking average_ranking(std::span<const Ranking> rankings,
                        std::span<const double> weights = {},
                        AverageOptions options = {});

/// All k(k-1)/2 pairwise outcomes of p, ordered by (a, b).
std::vector<PairwiseRelation> decompose_pairwise(const Ranking& p);

/// Result of folding a set of pairwise statements into an order.
struct Consolidation {
  /// Set when the non-incomparable relations form one chain of tie groups.
  std::optional<Ranking> subranking;
  /// Transitive reduction covered by maximal paths, longest first. Each step
  /// of a path is a group of tied labels.
  std::vector<std::vector<std::vector<LabelId>>> paths;
  /// Incomparability statements, passed through untouched.
  std::vector<PairwiseRelation> incomparable;

  bool is_chain() const noexcept { return subranking.has_value(); }
};

/// Throws CycleError if the precedence statements are contradictory.
Consolidation consolidate_pairwise(std::span<const PairwiseRelation> relations, std::size_t k);

// Text form -----------------------------------------------------------------

/// L1, L2, ..., Lk
std::vector<std::string> default_label_names(std::size_t k);

/// `L1>L2=L3>L4`; absent labels are omitted.
std::string to_text(const Ranking& r, std::span<const std::string> names);
/// `(1,2,0,3)`
std::string to_vector_text(const Ranking& r);
/// `L1>L2`, `L1=L2` or `L1⊥L2`.
std::string to_text(const PairwiseRelation& rel, std::span<const std::string> names);
/// Chain text when possible, else the reduction as `P1 ∧ P2 ...`.
std::string to_text(const Consolidation& c, std::span<const std::string> names);

/// Syntax-level view of a ranking cell before labels are resolved.
struct RankingSyntax {
  /// Rank-vector form `(1,2,0,3)`.
  std::optional<std::vector<int>> ranks;
  /// Text form: groups in order of preference, labels within a group tied.
  std::vector<std::vector<std::string>> groups;
};

/// Splits a ranking cell; throws ParseError on empty labels or duplicates.
RankingSyntax parse_ranking_syntax(std::string_view text);

/// Parses either form against a fixed label universe.
Ranking parse_ranking(std::string_view text, std::span<const std::string> names);

}  // namespace prefrules
