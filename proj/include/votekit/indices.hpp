#pragma once

#include "votekit/games.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace votekit {

enum class IndexKind { kShapleyShubik, kBanzhaf };

std::string_view to_string(IndexKind kind);
IndexKind parse_index_kind(std::string_view text);  // "ssi" | "pbi"

/// Exact power distribution: entry i is numerators()[i] / denominator().
/// Shapley-Shubik vectors keep the denominator n!; Banzhaf vectors keep the
/// raw swing counts over their total. Equality compares values.
class PowerVector {
 public:
  PowerVector(IndexKind kind, std::vector<BigInt> numerators, BigInt denominator);

  IndexKind kind() const { return kind_; }
  int size() const { return static_cast<int>(numerators_.size()); }
  const std::vector<BigInt>& numerators() const { return numerators_; }
  const BigInt& denominator() const { return denominator_; }

  Rational operator[](int i) const { return Rational(numerators_[i], denominator_); }
  std::vector<Rational> entries() const;
  std::vector<double> to_doubles() const;

  friend bool operator==(const PowerVector& a, const PowerVector& b);

 private:
  IndexKind kind_;
  std::vector<BigInt> numerators_;
  BigInt denominator_;
};

/// Raw swing counts eta_i = #{S not containing i : v(S) = 0, v(S + i) = 1}.
struct SwingCounts {
  std::vector<BigInt> per_voter;
  BigInt total;
};

/// Swings of each voter split by the size of the coalition joined:
/// by_size[i][k] counts swings of voter i+1 into coalitions with k members.
struct SwingProfile {
  int n = 0;
  std::vector<std::vector<std::uint64_t>> by_size;
};

SwingProfile swing_profile(const ExplicitGame& g);

PowerVector ssi_from_profile(const SwingProfile& p);
PowerVector pbi_from_profile(const SwingProfile& p);

// Direct engine: full coalition enumeration (n <= 24).
PowerVector ssi(const Game& g);
PowerVector pbi(const Game& g, SwingCounts* raw = nullptr);

struct DpOptions {
  std::uint64_t max_states = 1'000'000;
};

// Counting engine over (coalition size, clamped leaf weight sums) for
// weighted games and Boolean combinations of them. Leaves whose weights are
// all equal add no dimension since their sum is determined by the size.
// Throws Error(kUnsupported) for other representations and Error(kTooLarge)
// when the state space exceeds the cap.
PowerVector ssi_dp(const Game& g, const DpOptions& options = {});
PowerVector pbi_dp(const Game& g, const DpOptions& options = {});

enum class Engine { kAuto, kDirect, kDp };

// kAuto: DP for weighted games and combinations (falling back to direct
// enumeration when the DP cap is hit and n permits), direct otherwise.
PowerVector power(const Game& g, IndexKind kind, Engine engine = Engine::kAuto);

}  // namespace votekit
