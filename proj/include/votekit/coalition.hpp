#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace votekit {

inline constexpr int kMaxVoters = 64;

// A set of voters. Voter i (1-based) maps to bit i-1, so the coalition's
// table index is the sum of 2^(i-1) over its members.
class Coalition {
 public:
  constexpr Coalition() = default;
  constexpr explicit Coalition(std::uint64_t bits) : bits_(bits) {}

  static Coalition of(std::initializer_list<int> voters) {
    Coalition c;
    for (int v : voters) c = c.with(v);
    return c;
  }
  static constexpr Coalition all(int n) {
    return Coalition(n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr int size() const { return std::popcount(bits_); }
  constexpr bool contains(int voter) const { return (bits_ >> (voter - 1)) & 1U; }
  constexpr Coalition with(int voter) const {
    return Coalition(bits_ | (std::uint64_t{1} << (voter - 1)));
  }
  constexpr Coalition without(int voter) const {
    return Coalition(bits_ & ~(std::uint64_t{1} << (voter - 1)));
  }
  constexpr bool subset_of(Coalition other) const { return (bits_ & ~other.bits_) == 0; }

  // Members in increasing order, 1-based.
  std::vector<int> members() const {
    std::vector<int> out;
    for (std::uint64_t b = bits_; b != 0; b &= b - 1) out.push_back(std::countr_zero(b) + 1);
    return out;
  }

  friend constexpr auto operator<=>(Coalition, Coalition) = default;

 private:
  std::uint64_t bits_ = 0;
};

// True when `stronger` is reachable from `weaker` by adding voters and by
// replacing members with lower-numbered (more desirable) voters. Equivalent
// to a prefix-count comparison on {1..k} for every k.
constexpr bool shift_dominates(Coalition stronger, Coalition weaker, int n) {
  for (int k = 1; k <= n; ++k) {
    const std::uint64_t prefix = Coalition::all(k).bits();
    if (std::popcount(stronger.bits() & prefix) < std::popcount(weaker.bits() & prefix)) {
      return false;
    }
  }
  return true;
}

// "{1,2,4}"; the empty coalition renders as "{}".
std::string to_string(Coalition c);

}  // namespace votekit
