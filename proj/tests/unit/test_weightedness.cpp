#include <doctest.h>

#include "votekit/games.hpp"
#include "votekit/weightedness.hpp"

#include <random>

using namespace votekit;

namespace {

ExplicitGame table(const char* text) { return to_explicit(parse_game(text)); }

}  // namespace

TEST_CASE("weighted games get certificates that reproduce them") {
  for (const char* text : {"[3;3,2,1,1]", "[2;1,1,1]", "[5;3,2,2,1,1]", "[1;1,0,0]", "[7;4,3,3,2,2,1]"}) {
    CAPTURE(text);
    const ExplicitGame g = table(text);
    const auto rep = weighted_certificate(g);
    REQUIRE(rep.has_value());
    CHECK(represents(*rep, g));
    CHECK(to_explicit(Game(rep->to_game())) == g);
  }
}

TEST_CASE("the three non-weighted simple games on four voters have no certificate") {
  for (const char* text : {"n=4; minwin={1,2},{3,4}", "n=4; minwin={1,2},{1,4},{3,4}",
                           "n=4; minwin={1,2},{1,4},{2,3},{3,4}"}) {
    CAPTURE(text);
    CHECK_FALSE(weighted_certificate(table(text)).has_value());
  }
}

TEST_CASE("sorted and general certificates agree on random complete games") {
  std::mt19937_64 rng(11);
  int weighted = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = 4 + static_cast<int>(rng() % 3);
    std::vector<Coalition> family;
    const int k = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < k; ++i) family.emplace_back(1 + rng() % ((std::uint64_t{1} << n) - 1));
    // Keep an antichain under the shift order.
    std::vector<Coalition> antichain;
    for (Coalition c : family) {
      bool keep = true;
      for (Coalition d : family) {
        if (c != d && shift_dominates(c, d, n)) keep = false;
      }
      if (keep && std::find(antichain.begin(), antichain.end(), c) == antichain.end()) antichain.push_back(c);
    }
    if (antichain.empty()) continue;
    const ExplicitGame g = to_explicit(Game(CompleteGame(n, antichain)));
    const auto sorted = weighted_certificate_sorted(g);
    const auto plain = weighted_certificate(g);
    CHECK(sorted.has_value() == plain.has_value());
    if (sorted) {
      CHECK(represents(*sorted, g));
      ++weighted;
    }
  }
  CHECK(weighted > 0);
}

TEST_CASE("minimal representations") {
  const auto rep = minimal_representation(table("[6;4,2,2]"));
  REQUIRE(rep.has_value());
  CHECK(rep->quota == 3);
  CHECK(rep->weights == std::vector<std::int64_t>{2, 1, 1});
  const auto majority = minimal_representation(table("[20;10,10,10]"));
  REQUIRE(majority.has_value());
  CHECK(majority->quota == 2);
  CHECK(majority->weights == std::vector<std::int64_t>{1, 1, 1});
  CHECK_FALSE(minimal_representation(table("n=4; minwin={1,2},{3,4}")).has_value());
}
