#include <doctest.h>

#include "votekit/enumeration.hpp"
#include "votekit/error.hpp"
#include "votekit/geometry.hpp"

#include <random>

using namespace votekit;

namespace {

std::vector<Rational> random_distribution(std::mt19937_64& rng, int n, int den) {
  std::vector<std::int64_t> cuts{0, den};
  for (int i = 0; i < n - 1; ++i) cuts.push_back(static_cast<std::int64_t>(rng() % (den + 1)));
  std::sort(cuts.begin(), cuts.end());
  std::vector<Rational> out;
  for (int i = 0; i < n; ++i) out.emplace_back(cuts[i + 1] - cuts[i], den);
  return out;
}

}  // namespace

TEST_CASE("distances between the worked-example vectors") {
  const Game g = parse_game("[3;3,2,1,1]");
  const PowerVector s = power(g, IndexKind::kShapleyShubik);
  const PowerVector p = power(g, IndexKind::kBanzhaf);
  CHECK(distance(s, p, Metric::kL1) == Rational(1, 6));
  CHECK(distance(s, p, Metric::kLinf) == Rational(1, 12));
  const std::vector<Rational> a(3, Rational(1, 3)), b(4, Rational(1, 4));
  CHECK_THROWS_AS(distance(a, b, Metric::kL1), Error);
}

TEST_CASE("metric axioms on random triples") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const auto x = random_distribution(rng, n, 1 + static_cast<int>(rng() % 720));
    const auto y = random_distribution(rng, n, 1 + static_cast<int>(rng() % 720));
    const auto z = random_distribution(rng, n, 1 + static_cast<int>(rng() % 720));
    for (Metric m : {Metric::kL1, Metric::kLinf}) {
      CHECK(distance(x, y, m) == distance(y, x, m));
      CHECK(distance(x, z, m) <= distance(x, y, m) + distance(y, z, m));
      CHECK(distance(x, x, m) == 0);
    }
    const Rational d1 = distance(x, y, Metric::kL1);
    const Rational dinf = distance(x, y, Metric::kLinf);
    CHECK(dinf <= d1);
    CHECK(d1 <= n * dinf);
  }
}

TEST_CASE("distinct vector counts for small n") {
  const std::size_t ssi[] = {0, 1, 2, 4, 11, 53, 536};
  const std::size_t pbi[] = {0, 1, 2, 4, 12, 57, 555};
  for (int n = 3; n <= 6; ++n) {
    CAPTURE(n);
    const GameCatalog wg = enumerate_weighted(n);
    const GameCatalog cg = enumerate_complete(n);
    CHECK(count_distinct(wg, IndexKind::kShapleyShubik) == ssi[n]);
    CHECK(count_distinct(wg, IndexKind::kBanzhaf) == pbi[n]);
    CHECK(count_distinct(cg, IndexKind::kShapleyShubik) == ssi[n]);
    CHECK(count_distinct(cg, IndexKind::kBanzhaf) == pbi[n]);
  }
}

TEST_CASE("nearest neighbour equals the linear scan") {
  for (IndexKind kind : {IndexKind::kShapleyShubik, IndexKind::kBanzhaf}) {
    const VectorStore store = build_store(enumerate_weighted(6), kind);
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 300; ++trial) {
      const auto q = random_distribution(rng, 6, 1 + static_cast<int>(rng() % 5000));
      for (Metric m : {Metric::kL1, Metric::kLinf}) {
        const auto fast = store.nearest(q, m);
        const auto slow = store.nearest_linear(q, m);
        CHECK(fast.distance == slow.distance);
        CHECK(fast.index == slow.index);
      }
    }
  }
}

TEST_CASE("stored vectors are found exactly, others are not") {
  const GameCatalog wg = enumerate_weighted(5);
  const auto vectors = power_vectors(wg, IndexKind::kBanzhaf);
  const VectorStore store(5, IndexKind::kBanzhaf, vectors);
  CHECK(store.size() == 57);
  for (const auto& v : vectors) {
    const auto hit = store.find(v);
    REQUIRE(hit.has_value());
    CHECK(store.vector(*hit) == v);
    CHECK(store.nearest(v, Metric::kL1).distance == 0);
  }
  const PowerVector odd(IndexKind::kBanzhaf, {1, 1, 1, 1, 3}, 7);
  CHECK_FALSE(store.find(odd).has_value());
  CHECK(store.nearest(odd, Metric::kLinf).distance > 0);
}

TEST_CASE("raw stores validate their rows") {
  CHECK_THROWS_AS(VectorStore(2, IndexKind::kShapleyShubik, {1, 2}, {2}), Error);
  CHECK_THROWS_AS(VectorStore(2, IndexKind::kShapleyShubik, {}, {}).nearest(std::vector<Rational>{1, 0}, Metric::kL1),
                  Error);
  const VectorStore store(2, IndexKind::kShapleyShubik, {1, 1, 2, 2, 2, 0}, {2, 4, 2}, {10, 11, 12});
  CHECK(store.size() == 2);
  CHECK(store.origin(0) + store.origin(1) == 22);
}

TEST_CASE("omega vanishes up to six voters") {
  for (int n = 1; n <= 6; ++n) {
    for (IndexKind kind : {IndexKind::kShapleyShubik, IndexKind::kBanzhaf}) {
      for (Metric m : {Metric::kL1, Metric::kLinf}) {
        CAPTURE(n);
        const GapReport r = omega(n, kind, m);
        CHECK(r.omega == 0);
        CHECK(r.attaining_count == enumerate_complete(n).size());
      }
    }
  }
}

TEST_CASE("survey counts and gap reports agree with catalogs at six voters") {
  Survey s = run_survey(6, {IndexKind::kShapleyShubik, IndexKind::kBanzhaf});
  CHECK(s.games(GameClass::kComplete) == 1171);
  CHECK(s.games(GameClass::kWeighted) == 1111);
  CHECK(s.distinct(GameClass::kComplete, IndexKind::kShapleyShubik) == 536);
  CHECK(s.distinct(GameClass::kWeighted, IndexKind::kBanzhaf) == 555);
  const GameCatalog cg = enumerate_complete(6);
  const GameCatalog wg = enumerate_weighted(6);
  Survey t = survey_from_catalogs(cg, wg, {IndexKind::kShapleyShubik});
  CHECK(t.distinct(GameClass::kWeighted, IndexKind::kShapleyShubik) == 536);
  const GapReport r = t.gap(IndexKind::kShapleyShubik, Metric::kL1, replay_catalog(cg));
  CHECK(r.omega == 0);
  REQUIRE(r.nearest_weighted.has_value());
  const PowerVector c = power(Game(r.argmax()), IndexKind::kShapleyShubik);
  const PowerVector w = power(Game(*r.nearest_weighted), IndexKind::kShapleyShubik);
  CHECK(distance(c, w, Metric::kL1) == r.omega);
}
