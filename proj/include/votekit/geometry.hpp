#pragma once

#include "votekit/enumeration.hpp"
#include "votekit/indices.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace votekit {

enum class Metric { kL1, kLinf };

std::string_view to_string(Metric m);  // "l1" | "linf"
Metric parse_metric(std::string_view text);

// Exact distances. Throws Error(kInvalidArgument) on a length mismatch.
Rational distance(std::span<const Rational> x, std::span<const Rational> y, Metric m);
Rational distance(const PowerVector& x, const PowerVector& y, Metric m);

std::size_t count_distinct(std::span<const PowerVector> vectors);
std::size_t count_distinct(const GameCatalog& catalog, IndexKind kind);

/// Deduplicated power vectors with exact nearest-neighbour queries.
///
/// Entries are integer numerators over a per-vector denominator (reduced),
/// so membership is exact. The k-d tree is keyed on a fixed-point image of
/// the coordinates (value * 2^32, floored); box bounds are widened by one
/// unit, which keeps pruning conservative. Candidate distances are exact.
class VectorStore {
 public:
  VectorStore(int n, IndexKind kind, std::span<const PowerVector> vectors);
  // Raw form: numerators holds n entries per vector. Denominators must not
  // exceed 2^31 and each row must sum to its denominator.
  // `origins` defaults to input positions.
  VectorStore(int n, IndexKind kind, std::vector<std::int64_t> numerators,
              std::vector<std::int64_t> denominators, std::vector<std::size_t> origins = {});

  int voters() const { return n_; }
  IndexKind kind() const { return kind_; }
  std::size_t size() const { return den_.size(); }

  PowerVector vector(std::size_t i) const;
  // Origin of the first input vector deduplicated into entry i.
  std::size_t origin(std::size_t i) const { return origin_[i]; }
  std::optional<std::size_t> find(const PowerVector& v) const;

  struct Neighbor {
    std::size_t index;
    Rational distance;
  };

  // True minimiser; ties go to the lexicographically smallest vector.
  // Throws Error(kInvalidArgument) on an empty store or length mismatch.
  Neighbor nearest(std::span<const Rational> query, Metric m) const;
  Neighbor nearest(const PowerVector& query, Metric m) const;
  // Same contract, by linear scan. Reference implementation.
  Neighbor nearest_linear(std::span<const Rational> query, Metric m) const;

 private:
  struct Query;
  struct Node {
    std::uint32_t begin, end;
    std::int32_t left = -1, right = -1;
  };
  struct Best;

  void build();
  std::int32_t build_node(std::uint32_t begin, std::uint32_t end);
  Query make_query(std::span<const Rational> q) const;
  void consider(const Query& q, std::uint32_t point, Metric m, Best& best) const;
  void search(const Query& q, std::int32_t node, Metric m, Best& best) const;
  Neighbor finish(const Query& q, const Best& best) const;

  int n_;
  IndexKind kind_;
  std::vector<std::int64_t> num_;     // n per entry
  std::vector<std::int64_t> den_;
  std::vector<std::int64_t> fixed_;   // n per entry
  std::vector<std::size_t> origin_;
  std::vector<std::uint32_t> order_;  // tree leaves index into this
  std::vector<Node> nodes_;
  std::vector<std::int64_t> box_;     // lo then hi per node, n each
};

VectorStore build_store(const GameCatalog& catalog, IndexKind kind);

/// Worst-case distance between a complete game's power vector and the
/// nearest weighted game's.
struct GapReport {
  int n = 0;
  IndexKind kind = IndexKind::kShapleyShubik;
  Metric metric = Metric::kL1;
  Rational omega;
  // Complete games attaining omega, ascending; only the first 1000 are kept.
  std::vector<CompleteGame> attaining;
  std::uint64_t attaining_count = 0;
  std::optional<WeightedGame> nearest_weighted;  // nearest to attaining.front()
  std::optional<PowerVector> complete_vector;
  std::optional<PowerVector> weighted_vector;

  const CompleteGame& argmax() const { return attaining.front(); }
};

// Replays the same complete games that were fed to a Survey.
using GameReplay = std::function<void(const GameVisitor&)>;

/// Single pass over the complete games of one voter count collecting the
/// distinct power vectors of both classes (n <= 8). Memory holds packed
/// keys only, so the n = 8 run never materialises a catalog.
class Survey {
 public:
  Survey(int n, std::vector<IndexKind> kinds);

  // Feed each complete game once.
  void add(const GameView& game, bool weighted);

  int voters() const { return n_; }
  std::uint64_t games(GameClass c) const;
  std::size_t distinct(GameClass c, IndexKind kind);

  // The distinct weighted vectors; origins count weighted games in the
  // order they were added.
  VectorStore weighted_store(IndexKind kind);
  CompleteGame weighted_game(std::size_t origin) const;

  GapReport gap(IndexKind kind, Metric m, const GameReplay& replay);

 private:
  using Key = std::array<std::uint16_t, kMaxEnumerationVoters>;
  struct KindState {
    IndexKind kind;
    std::vector<Key> complete;
    std::size_t complete_sorted = 0;
    std::vector<std::pair<Key, std::uint32_t>> weighted;
    std::size_t weighted_sorted = 0;
  };

  KindState& state(IndexKind kind);
  void compact(KindState& s);
  Key key_of(const SwingProfile& p, IndexKind kind) const;
  PowerVector vector_of(const Key& k, IndexKind kind) const;

  int n_;
  std::vector<KindState> states_;
  std::uint64_t complete_games_ = 0;
  std::uint64_t weighted_games_ = 0;
  std::vector<std::uint32_t> weighted_offsets_{0};
  std::vector<std::uint32_t> weighted_masks_;  // shift-minimal families, flat
};

// Survey of every complete game on n voters, weightedness decided per game.
Survey run_survey(int n, std::vector<IndexKind> kinds);

// Same survey fed from catalogs; `weighted` must be a subset of `complete`.
Survey survey_from_catalogs(const GameCatalog& complete, const GameCatalog& weighted,
                            std::vector<IndexKind> kinds);

// Replays a catalog's games in order.
GameReplay replay_catalog(const GameCatalog& catalog);

// omega over the full catalogs of n <= 8 voters.
GapReport omega(int n, IndexKind kind, Metric m);

}  // namespace votekit
