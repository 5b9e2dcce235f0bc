#include <algorithm>
#include <cmath>

#include "prefrules/error.hpp"
#include "prefrules/miner.hpp"

namespace prefrules {
namespace {

double log_factorial(std::uint64_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

double log_choose(std::uint64_t n, std::uint64_t k) {
  return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

}  // namespace

double fisher_exact_p(std::uint64_t a, std::uint64_t b, std::uint64_t c, std::uint64_t d) {
  const std::uint64_t total = a + b + c + d;
  if (total == 0) throw UndefinedError("Fisher exact test on an empty table");
  const std::uint64_t row = a + b;  // rule fires
  const std::uint64_t col = a + c;  // consequent holds
  const std::uint64_t hi = std::min(row, col);

  // P(X = x) = C(col, x) C(total - col, row - x) / C(total, row)
  const double log_denominator = log_choose(total, row);
  double p = 0;
  for (std::uint64_t x = a; x <= hi; ++x) {
    if (row - x > total - col) continue;
    p += std::exp(log_choose(col, x) + log_choose(total - col, row - x) - log_denominator);
  }
  return std::clamp(p, 0.0, 1.0);
}

double generalization_p(std::uint64_t rule_hits, std::uint64_t rule_cover, std::uint64_t general_hits,
                        std::uint64_t general_cover) {
  if (rule_hits > rule_cover || general_hits < rule_hits || general_cover < rule_cover) {
    throw ArgumentError("inconsistent counts for a rule and its generalization");
  }
  const std::uint64_t a = rule_hits;
  const std::uint64_t b = rule_cover - rule_hits;
  const std::uint64_t outside = general_cover - rule_cover;
  const std::uint64_t c = std::min(general_hits - rule_hits, outside);
  const std::uint64_t d = outside - c;
  return fisher_exact_p(a, b, c, d);
}

}  // namespace prefrules
