#include <doctest.h>

#include "votekit/error.hpp"
#include "votekit/games.hpp"

#include <random>

using namespace votekit;

namespace {

ExplicitGame table(const Game& g) { return to_explicit(g); }

bool same_function(const Game& a, const Game& b) { return to_explicit(a) == to_explicit(b); }

}  // namespace

TEST_CASE("weighted games parse and evaluate") {
  const Game g = parse_game("[3;3,2,1,1]");
  CHECK(g.voters() == 4);
  CHECK(evaluate(g, Coalition::of({1})));
  CHECK(evaluate(g, Coalition::of({2, 3})));
  CHECK_FALSE(evaluate(g, Coalition::of({2})));
  CHECK_FALSE(evaluate(g, Coalition::of({3, 4})));
  CHECK(to_string(g) == "[3;3,2,1,1]");
}

TEST_CASE("rational weights and quotas are exact") {
  const Game g = parse_game("[0.65;0.5,0.15,0.35]");
  CHECK(evaluate(g, Coalition::of({1, 2})));
  CHECK_FALSE(evaluate(g, Coalition::of({2, 3})));
  CHECK(evaluate(g, Coalition::of({1, 3})));
}

TEST_CASE("boolean combinations follow the parents and kids rule") {
  const Game g = parse_game("[2;1,1,0,0] | [2;0,0,1,1]");
  CHECK(evaluate(g, Coalition::of({1, 2})));
  CHECK(evaluate(g, Coalition::of({3, 4})));
  CHECK_FALSE(evaluate(g, Coalition::of({1, 3})));
  CHECK_FALSE(evaluate(g, Coalition::of({2, 4})));
  const Game both = parse_game("[2;1,1,0,0] & ([2;0,0,1,1] | [1;1,0,0,0])");
  CHECK(evaluate(both, Coalition::of({1, 2})));
  CHECK_FALSE(evaluate(both, Coalition::of({2, 3, 4})));
  CHECK(same_function(parse_game(to_string(both)), both));
}

TEST_CASE("the parents and kids rule is not complete") {
  const ExplicitGame g = table(parse_game("[2;1,1,0,0] | [2;0,0,1,1]"));
  CHECK(desirability(g, 1, 3) == Desirability::kIncomparable);
  CHECK(desirability(g, 1, 2) == Desirability::kEqual);
  CHECK_FALSE(is_complete(g).has_value());
}

TEST_CASE("complete games round-trip through the text grammar") {
  const Game g = parse_game("n=7; shiftminwin={4,5,6,7},{2,4},{1}");
  const auto* c = g.get_if<CompleteGame>();
  REQUIRE(c != nullptr);
  CHECK(to_string(g) == "n=7; shiftminwin={1},{2,4},{4,5,6,7}");
  CHECK(same_function(parse_game(to_string(g)), g));
  CHECK(shift_minimal_winning(table(g)) == *c);
  const auto order = is_complete(table(g));
  REQUIRE(order.has_value());
  CHECK(*order == std::vector<int>{1, 2, 3, 4, 5, 6, 7});
}

TEST_CASE("explicit games from minimal winning coalitions") {
  const Game g = parse_game("n=4; minwin={1,2},{3,4}");
  CHECK(evaluate(g, Coalition::of({1, 2, 3})));
  CHECK_FALSE(evaluate(g, Coalition::of({1, 3})));
  CHECK(minimal_winning(table(g)) == std::vector<Coalition>{Coalition::of({1, 2}), Coalition::of({3, 4})});
  CHECK(same_function(parse_game(to_string(g)), g));
}

TEST_CASE("non-simple tables are rejected") {
  // v(empty) = 1
  CHECK_THROWS_AS(ExplicitGame(2, {0b1111}), Error);
  // not monotone: {1} wins, {1,2} loses
  CHECK_THROWS_AS(ExplicitGame(2, {0b0010 | 0b0100}), Error);
  // v(N) = 0
  CHECK_THROWS_AS(ExplicitGame(2, {0}), Error);
  CHECK_NOTHROW(ExplicitGame(2, {0b1000}));
}

TEST_CASE("malformed game text is a parse error with a position") {
  for (const char* bad : {"", "[3;3,2", "[3 3,2]", "[3;]", "n=3; minwin=", "n=3; minwin={4}", "[1;1,1] |",
                          "[2;1,1] & [2;1,1,1]", "n=3; shiftminwin={1},{1,2}", "[0;1,1]"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(parse_game(bad), Error);
  }
  try {
    parse_game("[3;3,x]");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.position() == 5);
  }
}

TEST_CASE("coalitions outside the voter set are invalid") {
  const Game g = parse_game("[2;1,1,1]");
  CHECK_THROWS_AS(evaluate(g, Coalition::of({4})), Error);
}

TEST_CASE("null voters") {
  const Game g = parse_game("[2;2,1,1,0]");
  const ExplicitGame t = table(g);
  CHECK(is_null_voter(t, 4));
  CHECK_FALSE(is_null_voter(t, 2));
  CHECK(null_voter_count(t) == 1);
  const Game padded = add_null_voters(parse_game("n=3; shiftminwin={1,2}"), 2);
  CHECK(padded.voters() == 5);
  CHECK(null_voter_count(table(padded)) == 3);
  const Game weighted_pad = add_null_voters(parse_game("[2;1,1]"), 1);
  CHECK(to_string(weighted_pad) == "[2;1,1,0]");
}

TEST_CASE("conjunction and disjunction") {
  const Game a = parse_game("[2;1,1,1]");
  const Game b = parse_game("[1;1,0,0]");
  const ExplicitGame both = table(conjunction(a, b));
  const ExplicitGame either = table(disjunction(a, b));
  for (std::uint64_t s = 0; s < 8; ++s) {
    const Coalition c(s);
    CHECK(both.winning(c) == (evaluate(a, c) && evaluate(b, c)));
    CHECK(either.winning(c) == (evaluate(a, c) || evaluate(b, c)));
  }
}

TEST_CASE("shift-minimal winning coalitions of a weighted game") {
  // [3;2,1,1]: {1,2} and {1,3} win, {2,3} loses; shift-minimal is {1,3} only.
  const CompleteGame c = shift_minimal_winning(table(parse_game("[3;2,1,1]")));
  CHECK(c.shift_minimal_winning() == std::vector<Coalition>{Coalition::of({1, 3})});
  CHECK(shift_maximal_losing(table(parse_game("[3;2,1,1]"))) ==
        std::vector<Coalition>{Coalition::of({1}), Coalition::of({2, 3})});
}

TEST_CASE("permutation and canonical form") {
  const ExplicitGame g = table(parse_game("[3;1,1,2]"));
  const auto order = is_complete(g);
  REQUIRE(order.has_value());
  CHECK(order->front() == 3);
  const ExplicitGame sorted = permute(g, *order);
  CHECK(sorted == table(parse_game("[3;2,1,1]")));
  CHECK(canonical(g) == canonical(sorted));
  CHECK(canonical(canonical(g)) == canonical(g));

  const ExplicitGame a = table(parse_game("n=4; minwin={1,2},{3,4}"));
  const ExplicitGame b = table(parse_game("n=4; minwin={1,3},{2,4}"));
  CHECK(canonical(a) == canonical(b));
  CHECK(canonical(canonical(a)) == canonical(a));
}

TEST_CASE("complete games on many voters use their shift-minimal form") {
  const Game big = parse_game("n=30; shiftminwin={1,2}");
  CHECK(big.voters() == 30);
  CHECK(evaluate(big, Coalition::of({1, 2, 30})));
  CHECK_FALSE(evaluate(big, Coalition::of({1, 30})));
  CHECK_FALSE(evaluate(big, Coalition::of({2, 3, 4})));
  CHECK_THROWS_AS(to_explicit(big), Error);
}

TEST_CASE("shift-minimal round trip on random weighted games") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 6);
    std::vector<Rational> w;
    std::int64_t total = 0;
    for (int i = 0; i < n; ++i) {
      w.emplace_back(static_cast<std::int64_t>(rng() % 9));
      total += static_cast<std::int64_t>(w.back());
    }
    std::sort(w.begin(), w.end(), std::greater<>());
    if (total == 0) continue;
    const Game g{WeightedGame(Rational(1 + static_cast<std::int64_t>(rng() % total)), w)};
    const ExplicitGame t = table(g);
    const CompleteGame c = shift_minimal_winning(t);
    CHECK(to_explicit(Game(c)) == t);
  }
}
