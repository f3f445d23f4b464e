#pragma once

// Word-parallel helpers over characteristic tables.

#include <bit>
#include <cstdint>
#include <span>

namespace votekit::detail {

// Positions p in a 64-bit word whose bit b (b < 6) is clear.
inline constexpr std::uint64_t kBitClear[6] = {
    0x5555555555555555ULL, 0x3333333333333333ULL, 0x0F0F0F0F0F0F0F0FULL,
    0x00FF00FF00FF00FFULL, 0x0000FFFF0000FFFFULL, 0x00000000FFFFFFFFULL,
};

// Positions p in 0..63 with popcount(p) == k.
inline constexpr std::uint64_t low_size_mask(int k) {
  std::uint64_t m = 0;
  for (int p = 0; p < 64; ++p)
    if (std::popcount(static_cast<unsigned>(p)) == k) m |= std::uint64_t{1} << p;
  return m;
}

inline constexpr std::uint64_t kLowSizeMask[7] = {
    low_size_mask(0), low_size_mask(1), low_size_mask(2), low_size_mask(3),
    low_size_mask(4), low_size_mask(5), low_size_mask(6),
};

// Calls f(word_index, lo, hi) for the coalitions S that exclude voter bit b:
// lo holds v(S) and hi holds v(S + voter), both aligned at S's position.
template <class F>
void for_each_pair_word(std::span<const std::uint64_t> table, int n, int b, F&& f) {
  if (b < 6) {
    const std::uint64_t clear = kBitClear[b];
    const int stride = 1 << b;
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
      const std::uint64_t w = table[idx];
      f(idx, w & clear, (w >> stride) & clear);
    }
  } else {
    const std::size_t offset = std::size_t{1} << (b - 6);
    for (std::size_t idx = 0; idx < table.size(); ++idx) {
      if (idx & offset) continue;
      f(idx, table[idx], table[idx + offset]);
    }
  }
  (void)n;
}

}  // namespace votekit::detail
