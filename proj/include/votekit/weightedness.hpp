#pragma once

#include "votekit/games.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace votekit {

/// Integer weighted representation [quota; weights].
struct IntegerRepresentation {
  std::int64_t quota = 0;
  std::vector<std::int64_t> weights;

  WeightedGame to_game() const;
  friend bool operator==(const IntegerRepresentation&, const IntegerRepresentation&) = default;
};

// Exact weightedness test. Returns an integer certificate when one exists.
// Feasibility of w >= 0, q with w(S) >= q on minimal winning coalitions and
// w(T) <= q - 1 on maximal losing ones, solved by an integer-preserving
// simplex (no rounding anywhere).
std::optional<IntegerRepresentation> weighted_certificate(const ExplicitGame& g);

// Same test for a game already sorted 1 >= 2 >= ... >= n. Only shift-minimal
// winning and shift-maximal losing coalitions are constrained, plus
// w_1 >= ... >= w_n, which keeps the system small.
std::optional<IntegerRepresentation> weighted_certificate_sorted(const ExplicitGame& g);

inline std::optional<WeightedGame> is_weighted(const ExplicitGame& g) {
  if (auto rep = weighted_certificate(g)) return rep->to_game();
  return std::nullopt;
}

// Smallest quota, then smallest weight sum, among non-increasing integer
// representations with weights <= quota. Brute force; meant for n <= 4.
std::optional<IntegerRepresentation> minimal_representation(const ExplicitGame& sorted_game,
                                                            std::int64_t max_quota = 12);

// True iff the representation reproduces g on every coalition.
bool represents(const IntegerRepresentation& rep, const ExplicitGame& g);

}  // namespace votekit
