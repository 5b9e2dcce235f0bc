#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace prefrules {

/// Fixed-size bitset over instance indices, stored in 64-bit words.
class Bitset {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  Bitset() = default;
  explicit Bitset(std::size_t bits, bool value = false);

  std::size_t size() const noexcept { return bits_; }
  std::span<const Word> words() const noexcept { return words_; }

  bool test(std::size_t i) const noexcept { return (words_[i / kWordBits] >> (i % kWordBits)) & 1u; }
  void set(std::size_t i) noexcept { words_[i / kWordBits] |= Word{1} << (i % kWordBits); }
  void reset(std::size_t i) noexcept { words_[i / kWordBits] &= ~(Word{1} << (i % kWordBits)); }

  std::size_t count() const noexcept;
  /// |this & other| without materializing the intersection.
  std::size_t count_and(const Bitset& other) const noexcept;
  bool is_subset_of(const Bitset& other) const noexcept;

  Bitset& operator&=(const Bitset& other) noexcept;
  Bitset& operator|=(const Bitset& other) noexcept;
  friend Bitset operator&(Bitset lhs, const Bitset& rhs) noexcept { return lhs &= rhs; }
  friend Bitset operator|(Bitset lhs, const Bitset& rhs) noexcept { return lhs |= rhs; }

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word word = words_[w];
      while (word) {
        const auto bit = static_cast<std::size_t>(std::countr_zero(word));
        f(w * kWordBits + bit);
        word &= word - 1;
      }
    }
  }

  friend bool operator==(const Bitset&, const Bitset&) = default;

 private:
  std::size_t bits_ = 0;
  std::vector<Word> words_;
};

}  // namespace prefrules
