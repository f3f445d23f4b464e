#pragma once

#include "votekit/coalition.hpp"
#include "votekit/rational.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace votekit {

// Largest voter count for which a full characteristic table is built.
inline constexpr int kMaxExplicitVoters = 24;

/// Characteristic function v : 2^N -> {0,1} stored as a bit table indexed by
/// coalition bits. Always monotone with v(empty) = 0 and v(N) = 1.
class ExplicitGame {
 public:
  // Validates the table (monotone and surjective); throws Error(kNotSimple).
  ExplicitGame(int n, std::vector<std::uint64_t> table);

  // Skips validation. For generators that produce simple games by construction.
  static ExplicitGame unchecked(int n, std::vector<std::uint64_t> table);

  // Up-closure of a family of winning coalitions under inclusion.
  static ExplicitGame from_minimal_winning(int n, std::span<const Coalition> family);

  int voters() const { return n_; }
  std::uint64_t table_size() const { return std::uint64_t{1} << n_; }
  bool winning(Coalition s) const {
    const std::uint64_t i = s.bits();
    return (table_[i >> 6] >> (i & 63)) & 1U;
  }
  std::span<const std::uint64_t> words() const { return table_; }

  friend bool operator==(const ExplicitGame&, const ExplicitGame&) = default;

 private:
  ExplicitGame() = default;
  int n_ = 0;
  std::vector<std::uint64_t> table_;
};

std::size_t table_words(int n);

/// [q; w_1, ..., w_n] with exact non-negative rational weights and q > 0.
class WeightedGame {
 public:
  WeightedGame(Rational quota, std::vector<Rational> weights);

  int voters() const { return static_cast<int>(weights_.size()); }
  const Rational& quota() const { return quota_; }
  const std::vector<Rational>& weights() const { return weights_; }

  // Denominators cleared: v(S) = 1 iff sum of scaled weights >= scaled quota.
  const std::vector<std::int64_t>& scaled_weights() const { return scaled_weights_; }
  std::int64_t scaled_quota() const { return scaled_quota_; }

  bool winning(Coalition s) const;

  friend bool operator==(const WeightedGame& a, const WeightedGame& b) {
    return a.quota_ == b.quota_ && a.weights_ == b.weights_;
  }

 private:
  Rational quota_;
  std::vector<Rational> weights_;
  std::vector<std::int64_t> scaled_weights_;
  std::int64_t scaled_quota_ = 0;
};

/// Complete simple game under the fixed order 1 >= 2 >= ... >= n, stored by
/// its shift-minimal winning coalitions. The family is kept sorted by member
/// list, which makes equality structural.
class CompleteGame {
 public:
  CompleteGame(int n, std::vector<Coalition> shift_minimal_winning);

  int voters() const { return n_; }
  const std::vector<Coalition>& shift_minimal_winning() const { return family_; }
  bool winning(Coalition s) const;

  friend bool operator==(const CompleteGame&, const CompleteGame&) = default;
  // Lexicographic on voter count, then on the sorted family.
  friend bool operator<(const CompleteGame& a, const CompleteGame& b);

 private:
  int n_;
  std::vector<Coalition> family_;
};

enum class ComboOp { kLeaf, kAnd, kOr };

struct ComboNode {
  ComboOp op = ComboOp::kLeaf;
  std::size_t leaf = 0;
  std::vector<ComboNode> operands;
};

/// Boolean combination of weighted games over one voter set.
class BoolCombo {
 public:
  BoolCombo(std::vector<WeightedGame> leaves, ComboNode root);

  int voters() const { return leaves_.front().voters(); }
  const std::vector<WeightedGame>& leaves() const { return leaves_; }
  const ComboNode& root() const { return root_; }
  bool winning(Coalition s) const;

  // Evaluates the tree given each leaf's outcome.
  template <class LeafValue>
  bool evaluate_tree(LeafValue&& leaf_value) const {
    return evaluate_node(root_, leaf_value);
  }

  template <class LeafValue>
  static bool evaluate_node(const ComboNode& node, LeafValue&& leaf_value) {
    switch (node.op) {
      case ComboOp::kLeaf:
        return leaf_value(node.leaf);
      case ComboOp::kAnd:
        for (const auto& c : node.operands)
          if (!evaluate_node(c, leaf_value)) return false;
        return true;
      case ComboOp::kOr:
        for (const auto& c : node.operands)
          if (evaluate_node(c, leaf_value)) return true;
        return false;
    }
    return false;
  }

 private:
  std::vector<WeightedGame> leaves_;
  ComboNode root_;
};

class Game {
 public:
  using Repr = std::variant<WeightedGame, BoolCombo, CompleteGame, ExplicitGame>;

  Game(WeightedGame g) : repr_(std::move(g)) {}
  Game(BoolCombo g) : repr_(std::move(g)) {}
  Game(CompleteGame g) : repr_(std::move(g)) {}
  Game(ExplicitGame g) : repr_(std::move(g)) {}

  int voters() const;
  bool winning(Coalition s) const;
  const Repr& repr() const { return repr_; }
  template <class T>
  const T* get_if() const {
    return std::get_if<T>(&repr_);
  }

 private:
  Repr repr_;
};

enum class Desirability { kGreater, kLess, kEqual, kIncomparable };

Game parse_game(std::string_view text);

std::string to_string(const Game& g);
std::string to_string(const WeightedGame& g);
std::string to_string(const CompleteGame& g);
std::string to_string(const ExplicitGame& g);
std::string to_string(const BoolCombo& g);

// v(S); throws Error(kInvalidArgument) if S has members outside 1..n.
bool evaluate(const Game& g, Coalition s);

// Throws Error(kTooLarge) above kMaxExplicitVoters.
ExplicitGame to_explicit(const Game& g);

// Isbell desirability between voters i and j (1-based, i != j).
Desirability desirability(const ExplicitGame& g, int i, int j);

// When complete, the voters sorted by desirability (most desirable first,
// ties by index): entry k is the original voter placed at position k+1.
std::optional<std::vector<int>> is_complete(const ExplicitGame& g);

// New game whose voter k+1 is the original voter order[k].
ExplicitGame permute(const ExplicitGame& g, std::span<const int> order);

// Requires 1 >= 2 >= ... >= n to hold in g; throws Error(kInvalidArgument).
CompleteGame shift_minimal_winning(const ExplicitGame& g);

std::vector<Coalition> shift_maximal_losing(const ExplicitGame& g);
std::vector<Coalition> minimal_winning(const ExplicitGame& g);
std::vector<Coalition> maximal_losing(const ExplicitGame& g);

bool is_null_voter(const ExplicitGame& g, int voter);
int null_voter_count(const ExplicitGame& g);

Game add_null_voters(const Game& g, int k);

Game conjunction(const Game& a, const Game& b);
Game disjunction(const Game& a, const Game& b);

// Complete games: sorted by desirability. Otherwise the lexicographically
// smallest table over all voter permutations (n <= 7 only).
ExplicitGame canonical(const ExplicitGame& g);

}  // namespace votekit
