#include <doctest.h>

#include "votekit/error.hpp"
#include "votekit/games.hpp"
#include "votekit/indices.hpp"

#include <random>

using namespace votekit;

namespace {

std::vector<Rational> fractions(std::initializer_list<std::pair<int, int>> v) {
  std::vector<Rational> out;
  for (auto [p, q] : v) out.emplace_back(p, q);
  return out;
}

Game random_weighted(std::mt19937_64& rng, int n, int max_weight) {
  std::vector<Rational> w;
  std::int64_t total = 0;
  for (int i = 0; i < n; ++i) {
    w.emplace_back(static_cast<std::int64_t>(rng() % (max_weight + 1)));
    total += static_cast<std::int64_t>(w.back());
  }
  if (total == 0) {
    w[0] = 1;
    total = 1;
  }
  return Game(WeightedGame(Rational(1 + static_cast<std::int64_t>(rng() % total)), w));
}

}  // namespace

TEST_CASE("worked example: [3;3,2,1,1]") {
  const Game g = parse_game("[3;3,2,1,1]");
  CHECK(ssi(g).entries() == fractions({{7, 12}, {1, 4}, {1, 12}, {1, 12}}));
  CHECK(pbi(g).entries() == fractions({{1, 2}, {3, 10}, {1, 10}, {1, 10}}));
  SwingCounts raw;
  pbi(g, &raw);
  CHECK(raw.per_voter == std::vector<BigInt>{5, 3, 1, 1});
  CHECK(raw.total == 10);
}

TEST_CASE("equal power in the parents and kids rule") {
  const Game g = parse_game("[2;1,1,0,0] | [2;0,0,1,1]");
  CHECK(ssi(g).entries() == std::vector<Rational>(4, Rational(1, 4)));
  CHECK(pbi(g).entries() == std::vector<Rational>(4, Rational(1, 4)));
  CHECK(ssi_dp(g).entries() == ssi(g).entries());
}

TEST_CASE("SSI keeps the n! denominator; PBI the swing total") {
  const PowerVector v = ssi(parse_game("[3;3,2,1,1]"));
  CHECK(v.denominator() == 24);
  CHECK(v.numerators() == std::vector<BigInt>{14, 6, 2, 2});
  CHECK(v == PowerVector(IndexKind::kShapleyShubik, {7, 3, 1, 1}, 12));
}

TEST_CASE("dictator and null voters") {
  const Game g = parse_game("[1;1,0,0]");
  CHECK(ssi(g).entries() == fractions({{1, 1}, {0, 1}, {0, 1}}));
  CHECK(pbi(g).entries() == fractions({{1, 1}, {0, 1}, {0, 1}}));
}

TEST_CASE("DP and direct engines agree on random weighted games") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 9);
    const Game g = random_weighted(rng, n, 12);
    CAPTURE(to_string(g));
    CHECK(ssi_dp(g) == ssi(g));
    CHECK(pbi_dp(g) == pbi(g));
  }
}

TEST_CASE("DP and direct engines agree on random combinations") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 7);
    const Game a = random_weighted(rng, n, 6);
    const Game b = random_weighted(rng, n, 6);
    const Game c = random_weighted(rng, n, 6);
    const Game g = rng() % 2 ? disjunction(conjunction(a, b), c) : conjunction(disjunction(a, b), c);
    CAPTURE(to_string(g));
    const ExplicitGame t = to_explicit(g);
    bool simple = true;
    try {
      ExplicitGame check(n, std::vector<std::uint64_t>(t.words().begin(), t.words().end()));
    } catch (const Error&) {
      simple = false;
    }
    if (!simple) continue;
    CHECK(ssi_dp(g) == ssi(g));
    CHECK(pbi_dp(g) == pbi(g));
  }
}

TEST_CASE("profiles reproduce both indices") {
  const ExplicitGame t = to_explicit(parse_game("n=5; shiftminwin={1,2},{2,3,4}"));
  const SwingProfile p = swing_profile(t);
  CHECK(ssi_from_profile(p) == ssi(Game(t)));
  CHECK(pbi_from_profile(p) == pbi(Game(t)));
}

TEST_CASE("the DP engine rejects what it cannot count") {
  CHECK_THROWS_AS(ssi_dp(parse_game("n=4; minwin={1,2},{3,4}")), Error);
  DpOptions tiny;
  tiny.max_states = 4;
  CHECK_THROWS_AS(ssi_dp(parse_game("[50;13,11,9,7,5,3,2,1,1,17,23,29]"), tiny), Error);
}

TEST_CASE("large weighted games go through the DP engine") {
  // 40 equal voters plus a heavy one: symmetric voters share power equally.
  std::vector<Rational> w(41, Rational(1));
  w[0] = 20;
  const Game g{WeightedGame(Rational(31), w)};
  const PowerVector v = power(g, IndexKind::kShapleyShubik);
  Rational sum = 0;
  for (const auto& x : v.entries()) sum += x;
  CHECK(sum == 1);
  for (int i = 2; i < 41; ++i) CHECK(v[i] == v[1]);
  CHECK(v[0] > v[1]);
  CHECK_THROWS_AS(power(g, IndexKind::kShapleyShubik, Engine::kDirect), Error);
}
