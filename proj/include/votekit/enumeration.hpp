#pragma once

#include "votekit/games.hpp"
#include "votekit/indices.hpp"
#include "votekit/weightedness.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace votekit {

inline constexpr int kMaxEnumerationVoters = 8;

enum class GameClass : std::uint8_t { kWeighted = 1, kComplete = 2, kSimple = 3 };

std::string_view to_string(GameClass c);           // "wg" | "cg" | "sg"
GameClass parse_game_class(std::string_view text);

/// One generated game. `family` holds the shift-minimal winning coalitions
/// (complete classes) or the minimal winning coalitions (simple class);
/// `table` is the characteristic function, one bit per coalition index.
struct GameView {
  int n = 0;
  std::span<const Coalition> family;
  std::span<const std::uint64_t> table;

  ExplicitGame to_explicit() const;
};

using GameVisitor = std::function<void(const GameView&)>;

// Every complete simple game with 1 >= 2 >= ... >= n, each exactly once.
// These are the nonempty antichains of the shift poset on nonempty
// coalitions; distinct antichains give non-isomorphic games.
void for_each_complete_game(int n, const GameVisitor& visit);

// Every monotone surjective function on n <= 5 voters (not deduplicated).
void for_each_simple_game(int n, const GameVisitor& visit);

/// Games of one class on a fixed voter count, stored flat.
class GameCatalog {
 public:
  GameCatalog(int n, GameClass game_class);

  int voters() const { return n_; }
  GameClass game_class() const { return class_; }
  std::size_t size() const { return offsets_.size() - 1; }

  void add(std::span<const Coalition> family);
  void add(std::span<const Coalition> family, const IntegerRepresentation& certificate);

  std::span<const Coalition> family(std::size_t i) const;
  Game game(std::size_t i) const;
  ExplicitGame table(std::size_t i) const;

  // Weighted catalogs: the stored certificate, or one computed on demand.
  IntegerRepresentation certificate(std::size_t i) const;
  bool has_certificates() const { return !certificates_.empty(); }

  void attach(IndexKind kind, std::vector<PowerVector> vectors);
  // Null when no vectors of this kind are attached.
  const std::vector<PowerVector>* vectors(IndexKind kind) const;

 private:
  int n_;
  GameClass class_;
  std::vector<std::size_t> offsets_{0};
  std::vector<Coalition> coalitions_;
  std::vector<std::int64_t> certificates_;  // (quota, w_1..w_n) per game
  std::optional<std::vector<PowerVector>> ssi_;
  std::optional<std::vector<PowerVector>> pbi_;
};

// Throw Error(kInvalidArgument) unless 1 <= n <= kMaxEnumerationVoters.
GameCatalog enumerate_complete(int n);
// Complete games passing the weightedness test, with integer certificates.
// Certificates are minimal (smallest quota, then smallest sum) for n <= 4.
GameCatalog enumerate_weighted(int n);
// All simple games on n <= 5 voters up to isomorphism.
GameCatalog enumerate_simple(int n);
inline GameCatalog enumerate_simple4() { return enumerate_simple(4); }

void attach_power_vectors(GameCatalog& catalog, IndexKind kind);

// Attached vectors if present, otherwise computed.
std::vector<PowerVector> power_vectors(const GameCatalog& catalog, IndexKind kind);

/// Binary cache formats (little-endian). The library reads and writes
/// streams only; opening files is the caller's business.
void write_catalog(std::ostream& out, const GameCatalog& catalog);
GameCatalog read_catalog(std::istream& in);  // throws Error(kCorrupt)

void write_vectors(std::ostream& out, int n, IndexKind kind, std::span<const PowerVector> vectors);
std::vector<PowerVector> read_vectors(std::istream& in, int n, IndexKind kind);

/// Streaming catalog writer for runs too large to hold in memory. The
/// header count is patched by finish(), so the stream must be seekable.
class CatalogWriter {
 public:
  CatalogWriter(std::ostream& out, int n, GameClass game_class);
  void add(std::span<const Coalition> family);
  std::uint64_t finish();

 private:
  std::ostream& out_;
  std::streamoff count_pos_;
  std::uint64_t count_ = 0;
};

// Reads a catalog one game at a time without materializing it.
std::uint64_t stream_catalog(std::istream& in, int expected_n, GameClass expected_class,
                             const GameVisitor& visit);

}  // namespace votekit
