#include "prefrules/bitset.hpp"

#include <algorithm>

namespace prefrules {

Bitset::Bitset(std::size_t bits, bool value)
    : bits_(bits), words_((bits + kWordBits - 1) / kWordBits, value ? ~Word{0} : Word{0}) {
  if (value && bits % kWordBits != 0) words_.back() &= (Word{1} << (bits % kWordBits)) - 1;
}

std::size_t Bitset::count() const noexcept {
  std::size_t total = 0;
  for (const auto w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::size_t Bitset::count_and(const Bitset& other) const noexcept {
  std::size_t total = 0;
  const auto n = std::min(words_.size(), other.words_.size());
  for (std::size_t i = 0; i < n; ++i) total += static_cast<std::size_t>(std::popcount(words_[i] & other.words_[i]));
  return total;
}

bool Bitset::is_subset_of(const Bitset& other) const noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    const Word theirs = i < other.words_.size() ? other.words_[i] : 0;
    if (words_[i] & ~theirs) return false;
  }
  return true;
}

Bitset& Bitset::operator&=(const Bitset& other) noexcept {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= i < other.words_.size() ? other.words_[i] : 0;
  return *this;
}

Bitset& Bitset::operator|=(const Bitset& other) noexcept {
  const auto n = std::min(words_.size(), other.words_.size());
  for (std::size_t i = 0; i < n; ++i) words_[i] |= other.words_[i];
  return *this;
}

}  // namespace prefrules
