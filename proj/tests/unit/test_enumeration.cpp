#include <doctest.h>

#include "votekit/enumeration.hpp"
#include "votekit/error.hpp"
#include "votekit/weightedness.hpp"

#include <set>
#include <sstream>

using namespace votekit;

namespace {

std::string bytes_of(const GameCatalog& c) {
  std::ostringstream out(std::ios::binary);
  write_catalog(out, c);
  return out.str();
}

GameCatalog from_bytes(const std::string& bytes) {
  std::istringstream in(bytes, std::ios::binary);
  return read_catalog(in);
}

}  // namespace

TEST_CASE("complete and weighted game counts for small n") {
  const std::uint64_t complete[] = {0, 1, 3, 8, 25, 117, 1171};
  const std::uint64_t weighted[] = {0, 1, 3, 8, 25, 117, 1111};
  for (int n = 1; n <= 6; ++n) {
    CAPTURE(n);
    CHECK(enumerate_complete(n).size() == complete[n]);
    CHECK(enumerate_weighted(n).size() == weighted[n]);
  }
}

TEST_CASE("voter counts outside 1..8 are rejected") {
  CHECK_THROWS_AS(enumerate_complete(0), Error);
  CHECK_THROWS_AS(enumerate_complete(9), Error);
  CHECK_THROWS_AS(enumerate_weighted(9), Error);
  CHECK_THROWS_AS(enumerate_simple(6), Error);
}

TEST_CASE("the eight weighted games on three voters") {
  const GameCatalog wg = enumerate_weighted(3);
  std::set<std::string> got;
  for (std::size_t i = 0; i < wg.size(); ++i) got.insert(to_string(wg.certificate(i).to_game()));
  const std::set<std::string> expected = {"[1;1,0,0]", "[1;1,1,0]", "[2;1,1,0]", "[1;1,1,1]",
                                          "[2;1,1,1]", "[3;1,1,1]", "[2;2,1,1]", "[3;2,1,1]"};
  CHECK(got == expected);
}

TEST_CASE("simple games on four voters") {
  const GameCatalog sg = enumerate_simple4();
  REQUIRE(sg.size() == 28);
  std::set<std::string> non_weighted;
  for (std::size_t i = 0; i < sg.size(); ++i) {
    if (!weighted_certificate(sg.table(i))) non_weighted.insert(to_string(Game(sg.table(i))));
  }
  CHECK(non_weighted.size() == 3);
  // Canonical forms of the three stated families.
  std::set<std::string> expected;
  for (const char* text : {"n=4; minwin={1,2},{3,4}", "n=4; minwin={1,2},{1,4},{3,4}",
                           "n=4; minwin={1,2},{1,4},{2,3},{3,4}"}) {
    expected.insert(to_string(Game(canonical(to_explicit(parse_game(text))))));
  }
  std::set<std::string> got;
  for (const auto& text : non_weighted) got.insert(to_string(Game(canonical(to_explicit(parse_game(text))))));
  CHECK(got == expected);
}

TEST_CASE("simple games on five voters agree with brute force") {
  CHECK(enumerate_simple(5).size() == 208);
  // Every complete game is a simple game; five voters add non-complete ones.
  CHECK(enumerate_complete(5).size() < 208);
}

TEST_CASE("generated complete games are shift up-sets and non-isomorphic") {
  for (int n = 1; n <= 5; ++n) {
    const GameCatalog cg = enumerate_complete(n);
    std::set<std::vector<std::uint64_t>> seen;
    for (std::size_t i = 0; i < cg.size(); ++i) {
      const ExplicitGame t = cg.table(i);
      const auto order = is_complete(t);
      REQUIRE(order.has_value());
      for (int k = 0; k < n; ++k) CHECK((*order)[k] == k + 1);
      const ExplicitGame c = canonical(t);
      CHECK(seen.insert(std::vector<std::uint64_t>(c.words().begin(), c.words().end())).second);
    }
  }
}

TEST_CASE("weighted games are the weighted subset of the complete games") {
  const GameCatalog cg = enumerate_complete(5);
  const GameCatalog wg = enumerate_weighted(5);
  std::size_t weighted = 0;
  for (std::size_t i = 0; i < cg.size(); ++i) weighted += weighted_certificate(cg.table(i)).has_value();
  CHECK(weighted == wg.size());
  for (std::size_t i = 0; i < wg.size(); ++i) CHECK(represents(wg.certificate(i), wg.table(i)));
}

TEST_CASE("the streaming walk matches the catalog") {
  std::uint64_t count = 0;
  for_each_complete_game(6, [&](const GameView& g) {
    CHECK(g.to_explicit() == to_explicit(Game(CompleteGame(6, std::vector<Coalition>(g.family.begin(), g.family.end())))));
    ++count;
  });
  CHECK(count == 1171);
}

TEST_CASE("catalog cache round trip") {
  const GameCatalog wg = enumerate_weighted(5);
  const std::string bytes = bytes_of(wg);
  CHECK(bytes.substr(0, 6) == "VKCAT1");
  const GameCatalog back = from_bytes(bytes);
  CHECK(back.voters() == 5);
  CHECK(back.game_class() == GameClass::kWeighted);
  REQUIRE(back.size() == wg.size());
  for (std::size_t i = 0; i < wg.size(); ++i) {
    CHECK(back.table(i) == wg.table(i));
    CHECK(represents(back.certificate(i), back.table(i)));
  }
}

TEST_CASE("corrupt catalog caches are detected") {
  const std::string good = bytes_of(enumerate_complete(4));
  std::string bad_magic = good;
  bad_magic[0] = 'X';
  CHECK_THROWS_AS(from_bytes(bad_magic), Error);
  CHECK_THROWS_AS(from_bytes(good.substr(0, good.size() - 3)), Error);
  CHECK_THROWS_AS(from_bytes(good + "x"), Error);
  std::string bad_count = good;
  bad_count[8] = static_cast<char>(bad_count[8] + 1);
  CHECK_THROWS_AS(from_bytes(bad_count), Error);
  try {
    from_bytes(bad_magic);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kCorrupt);
  }
}

TEST_CASE("vector cache round trip and validation") {
  const GameCatalog wg = enumerate_weighted(4);
  for (IndexKind kind : {IndexKind::kShapleyShubik, IndexKind::kBanzhaf}) {
    const auto vectors = power_vectors(wg, kind);
    std::ostringstream out(std::ios::binary);
    write_vectors(out, 4, kind, vectors);
    const std::string bytes = out.str();
    CHECK(bytes.substr(0, 6) == "VKVEC1");
    std::istringstream in(bytes, std::ios::binary);
    CHECK(read_vectors(in, 4, kind) == vectors);
    std::istringstream wrong(bytes, std::ios::binary);
    CHECK_THROWS_AS(read_vectors(wrong, 5, kind), Error);
    std::string broken = bytes;
    broken[broken.size() - 9] ^= 1;  // a numerator of the last vector
    std::istringstream in2(broken, std::ios::binary);
    CHECK_THROWS_AS(read_vectors(in2, 4, kind), Error);
  }
}

TEST_CASE("streamed catalog writer and reader") {
  std::stringstream file(std::ios::in | std::ios::out | std::ios::binary);
  CatalogWriter writer(file, 5, GameClass::kComplete);
  for_each_complete_game(5, [&](const GameView& g) { writer.add(g.family); });
  CHECK(writer.finish() == 117);
  file.seekg(0);
  std::uint64_t seen = 0;
  const GameCatalog cg = enumerate_complete(5);
  const std::uint64_t count = stream_catalog(file, 5, GameClass::kComplete, [&](const GameView& g) {
    CHECK(g.to_explicit() == cg.table(seen));
    ++seen;
  });
  CHECK(count == 117);
  CHECK(seen == 117);
  file.clear();
  file.seekg(0);
  CHECK_THROWS_AS(stream_catalog(file, 5, GameClass::kWeighted, [](const GameView&) {}), Error);
}

TEST_CASE("attached vectors are normalized") {
  GameCatalog cg = enumerate_complete(5);
  attach_power_vectors(cg, IndexKind::kBanzhaf);
  const auto* vectors = cg.vectors(IndexKind::kBanzhaf);
  REQUIRE(vectors != nullptr);
  CHECK(cg.vectors(IndexKind::kShapleyShubik) == nullptr);
  for (const auto& v : *vectors) {
    Rational sum = 0;
    for (const auto& x : v.entries()) sum += x;
    CHECK(sum == 1);
  }
}
