#include <doctest.h>

#include "votekit/enumeration.hpp"
#include "votekit/error.hpp"
#include "votekit/inverse.hpp"

#include <fstream>
#include <random>
#include <sstream>

using namespace votekit;

namespace {

std::string read(const std::string& name) {
  std::ifstream in(std::string(VOTEKIT_TEST_DATA) + "/" + name);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("target files") {
  const Target t = parse_target("n=4 index=ssi\n7/12 1/4 1/12 1/12\n");
  CHECK(t.n == 4);
  CHECK(t.kind == IndexKind::kShapleyShubik);
  CHECK(t.values[0] == Rational(7, 12));
  CHECK(t.tolerance == 0);

  const Target d = parse_target("n=3 index=pbi\n0.333 0.333 0.333\n");
  CHECK(d.tolerance == Rational(3, 2000));
  CHECK(d.kind == IndexKind::kBanzhaf);

  CHECK_THROWS_AS(parse_target("n=3 index=ssi\n1/2 1/2 1/2\n"), Error);
  CHECK_THROWS_AS(parse_target("n=3 index=ssi\n1/2 1/2\n"), Error);
  CHECK_THROWS_AS(parse_target("n=3 index=xyz\n1/3 1/3 1/3\n"), Error);
  CHECK_THROWS_AS(parse_target("index=ssi\n1/3 1/3 1/3\n"), Error);
  CHECK_THROWS_AS(parse_target("n=3 index=ssi"), Error);
  CHECK_THROWS_AS(parse_target("n=2 index=ssi\n-1/2 3/2\n"), Error);
}

TEST_CASE("beta targets") {
  const Target t = beta_target(9, IndexKind::kShapleyShubik);
  CHECK(t.values.size() == 9);
  CHECK(t.values.front() == Rational(2, 17));
  CHECK(t.values.back() == Rational(1, 17));
}

TEST_CASE("exact inverse search finds attainable targets") {
  const GameCatalog wg = enumerate_weighted(4);
  const Target t = parse_target(read("ssi_3_3_2_1_1.target"));
  const InverseResult r = inverse_exact(t, Metric::kL1, wg);
  CHECK(r.distance == 0);
  CHECK(r.mode == InverseMode::kExactMin);
  CHECK(to_explicit(Game(r.game)) == to_explicit(parse_game("[3;3,2,1,1]")));
  CHECK_THROWS_AS(inverse_exact(beta_target(5, IndexKind::kShapleyShubik), Metric::kL1, wg), Error);
}

TEST_CASE("exact search is zero exactly on stored vectors") {
  const GameCatalog cg = enumerate_complete(6);
  const GameCatalog wg = enumerate_weighted(6);
  const VectorStore store = build_store(wg, IndexKind::kBanzhaf);
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t i = rng() % cg.size();
    const PowerVector v = power(Game(cg.table(i)), IndexKind::kBanzhaf);
    const InverseResult r = inverse_exact(make_target(v), Metric::kL1, wg);
    CHECK((r.distance == 0) == store.find(v).has_value());
  }
}

TEST_CASE("the heuristic never beats the exact minimum") {
  const GameCatalog cg = enumerate_complete(5);
  const GameCatalog wg = enumerate_weighted(5);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const Target t = beta_target(5, trial % 2 ? IndexKind::kBanzhaf : IndexKind::kShapleyShubik);
    const Metric m = trial % 3 ? Metric::kL1 : Metric::kLinf;
    HeuristicOptions o;
    o.budget = 300;
    o.seed = rng();
    const InverseResult h = inverse_heuristic(t, m, o);
    const InverseResult e = inverse_exact(t, m, wg);
    CHECK(h.mode == InverseMode::kHeuristicUpperBound);
    CHECK(e.distance <= h.distance);
    CHECK(h.distance == distance(power(Game(h.game), t.kind).entries(), t.values, m));
  }
}

TEST_CASE("heuristic fixed point and determinism") {
  const Game g = parse_game("[5;3,2,2,1,1]");
  HeuristicOptions o;
  o.budget = 50;
  o.start = std::vector<std::int64_t>{3, 2, 2, 1, 1};
  const InverseResult r = inverse_heuristic(make_target(power(g, IndexKind::kBanzhaf)), Metric::kL1, o);
  CHECK(r.distance == 0);
  CHECK(r.evaluations == 1);

  HeuristicOptions a;
  a.budget = 400;
  a.seed = 9;
  const Target t = beta_target(7, IndexKind::kShapleyShubik);
  const InverseResult x = inverse_heuristic(t, Metric::kL1, a);
  const InverseResult y = inverse_heuristic(t, Metric::kL1, a);
  CHECK(x.distance == y.distance);
  CHECK(x.game == y.game);
  CHECK(x.seed == 9);
}

TEST_CASE("the best heuristic distance does not grow with the budget") {
  const Target t = beta_target(8, IndexKind::kBanzhaf);
  Rational previous = 2;
  for (std::uint64_t budget : {50, 200, 800, 3200}) {
    HeuristicOptions o;
    o.budget = budget;
    const InverseResult r = inverse_heuristic(t, Metric::kL1, o);
    CHECK(r.distance <= previous);
    previous = r.distance;
  }
}

TEST_CASE("scaling a representation leaves the game unchanged") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 5);
    std::vector<Rational> w, scaled;
    std::int64_t total = 0;
    const std::int64_t k = 2 + static_cast<std::int64_t>(rng() % 5);
    for (int i = 0; i < n; ++i) {
      const std::int64_t x = 1 + static_cast<std::int64_t>(rng() % 10);
      w.emplace_back(x);
      scaled.emplace_back(k * x);
      total += x;
    }
    const std::int64_t q = 1 + static_cast<std::int64_t>(rng() % total);
    const Game a{WeightedGame(Rational(q), w)};
    const Game b{WeightedGame(Rational(k * q), scaled)};
    CHECK(to_explicit(a) == to_explicit(b));
    const Target t = beta_target(n, IndexKind::kShapleyShubik);
    CHECK(distance(power(a, t.kind).entries(), t.values, Metric::kL1) ==
          distance(power(b, t.kind).entries(), t.values, Metric::kL1));
  }
}

TEST_CASE("padding with zero voters reproduces the base target") {
  const GameCatalog wg = enumerate_weighted(5);
  const CompleteGame base(5, {Coalition::of({1, 2}), Coalition::of({2, 3, 4})});
  PaddedOptions o;
  o.weighted = &wg;
  const InverseResult r = inverse_padded(base, 0, IndexKind::kShapleyShubik, Metric::kL1, o);
  CHECK(r.mode == InverseMode::kExactMin);
  CHECK(r.distance == 0);
  const GameCatalog wg6 = enumerate_weighted(6);
  o.weighted = &wg6;
  const InverseResult padded = inverse_padded(base, 1, IndexKind::kShapleyShubik, Metric::kL1, o);
  CHECK(padded.distance == 0);
  CHECK(padded.vector.size() == 6);
  CHECK(padded.vector[5] == 0);
  CHECK_THROWS_AS(inverse_padded(base, -1, IndexKind::kShapleyShubik, Metric::kL1, o), Error);
}

TEST_CASE("council rule from a populations file") {
  const auto members = parse_populations(read("populations.csv"));
  REQUIRE(members.size() == 12);
  CHECK(members.front().name == "Member01");
  const BoolCombo council = council_game(members);
  CHECK(council.voters() == 12);
  const Game g{council};
  CHECK(power(g, IndexKind::kShapleyShubik, Engine::kDp) == power(g, IndexKind::kShapleyShubik, Engine::kDirect));
  CHECK(power(g, IndexKind::kBanzhaf, Engine::kDp) == power(g, IndexKind::kBanzhaf, Engine::kDirect));
  // Any n - 3 members win through the blocking clause.
  CHECK(evaluate(g, Coalition::all(9)));
  CHECK_FALSE(evaluate(g, Coalition::of({1})));
  const BoolCombo exact = council_game(members, 0);
  CHECK(power(Game(exact), IndexKind::kShapleyShubik) == power(Game(exact), IndexKind::kShapleyShubik, Engine::kDirect));
  CHECK_THROWS_AS(parse_populations("A,10\nB\n"), Error);
  CHECK_THROWS_AS(parse_populations("A,-4\n"), Error);
  CHECK_THROWS_AS(council_game(std::vector<Population>(3, Population{"x", 1})), Error);
}
