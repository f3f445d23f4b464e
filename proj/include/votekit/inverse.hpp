#pragma once

#include "votekit/enumeration.hpp"
#include "votekit/geometry.hpp"
#include "votekit/indices.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace votekit {

/// Desired power distribution. Decimal inputs carry a declared precision:
/// the entries must sum to 1 within `tolerance`.
struct Target {
  int n = 0;
  IndexKind kind = IndexKind::kShapleyShubik;
  std::vector<Rational> values;
  Rational tolerance = 0;
};

// "n=<n> index=<ssi|pbi>" on the first line, n rationals or decimals on the
// second. The tolerance is half a unit in the last decimal place given.
Target parse_target(std::string_view text);
Target make_target(const PowerVector& v);
// (2, ..., 2, 1) / (2n - 1).
Target beta_target(int n, IndexKind kind);

enum class InverseMode { kExactMin, kHeuristicUpperBound };
std::string_view to_string(InverseMode mode);  // "EXACT_MIN" | "HEURISTIC_UPPER_BOUND"

struct InverseResult {
  WeightedGame game;
  PowerVector vector;
  Rational distance;
  InverseMode mode;
  std::uint64_t seed = 0;
  std::uint64_t evaluations = 0;
};

// True minimiser over all weighted games on t.n voters.
InverseResult inverse_exact(const Target& t, Metric m, const GameCatalog& weighted);
// Same, over a survey of n <= 8 voters.
InverseResult inverse_exact(const Target& t, Metric m, Survey& survey);

struct HeuristicOptions {
  std::uint64_t budget = 100000;  // weight vectors scored
  std::uint64_t seed = 0;
  std::int64_t scale = 100;      // integer weight sum of the proportional start
  std::optional<std::vector<std::int64_t>> start;
};

// Local search over integer weight vectors; every quota is scored for each
// vector. The result is an upper bound on the true minimum, never a
// certified value.
InverseResult inverse_heuristic(const Target& t, Metric m, const HeuristicOptions& options = {});

struct PaddedOptions {
  HeuristicOptions heuristic;
  const GameCatalog* weighted = nullptr;  // exact search when it matches n
  Survey* survey = nullptr;              // exact search when it matches n
};

// Pads `base` with null voters and solves the inverse problem for its power
// vector. Only kExactMin distances are lower bounds on the worst case.
InverseResult inverse_padded(const CompleteGame& base, int pads, IndexKind kind, Metric m,
                             const PaddedOptions& options = {});

/// Council-style rule: ([0.55 n; 1..1] & [0.65 P; p]) | [n-3; 1..1]
/// where p are (possibly quantized) populations and P their total.
struct Population {
  std::string name;
  std::int64_t people;
};

// Lines "name,population"; blank lines and lines starting with '#' skipped.
std::vector<Population> parse_populations(std::string_view text);

// resolution > 0 rounds each share to an integer number of 1/resolution
// units (half up) so the counting engine stays small; 0 keeps exact shares.
BoolCombo council_game(const std::vector<Population>& members, std::int64_t resolution = 1000);

}  // namespace votekit
