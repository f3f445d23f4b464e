#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "votekit/votekit.h"

#include <cstring>
#include <string>
#include <vector>

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  vk_string_free(s);
  return out;
}

vk_game* game(const char* text) {
  vk_game* g = nullptr;
  REQUIRE(vk_game_parse(text, &g) == VK_OK);
  return g;
}

std::vector<std::string> fractions(const vk_vector* v) {
  std::vector<std::string> out;
  for (int i = 0; i < vk_vector_size(v); ++i) {
    char* s = nullptr;
    REQUIRE(vk_vector_fraction(v, i, &s) == VK_OK);
    out.push_back(take(s));
  }
  return out;
}

}  // namespace

TEST_CASE("games and indices through the C interface") {
  vk_game* g = game("[3;3,2,1,1]");
  CHECK(vk_game_voters(g) == 4);
  vk_vector* s = nullptr;
  vk_vector* p = nullptr;
  REQUIRE(vk_power(g, VK_SSI, VK_ENGINE_AUTO, &s) == VK_OK);
  REQUIRE(vk_power(g, VK_PBI, VK_ENGINE_DIRECT, &p) == VK_OK);
  CHECK(fractions(s) == std::vector<std::string>{"7/12", "1/4", "1/12", "1/12"});
  CHECK(fractions(p) == std::vector<std::string>{"1/2", "3/10", "1/10", "1/10"});
  char* d = nullptr;
  REQUIRE(vk_distance(s, p, VK_L1, &d) == VK_OK);
  CHECK(take(d) == "1/6");
  REQUIRE(vk_distance(s, p, VK_LINF, &d) == VK_OK);
  CHECK(take(d) == "1/12");
  char* dec = nullptr;
  REQUIRE(vk_vector_decimal(s, 0, 7, &dec) == VK_OK);
  CHECK(take(dec) == "0.5833333");
  CHECK(vk_vector_double(s, 1) == doctest::Approx(0.25));
  int win = -1;
  REQUIRE(vk_game_evaluate(g, 0b0110, &win) == VK_OK);
  CHECK(win == 1);
  char* cert = nullptr;
  REQUIRE(vk_game_weighted_certificate(g, &cert) == VK_OK);
  CHECK(take(cert) == "[3;3,2,1,1]");
  vk_vector_free(s);
  vk_vector_free(p);
  vk_game_free(g);
}

TEST_CASE("errors carry status codes and messages") {
  vk_game* g = nullptr;
  CHECK(vk_game_parse("[3;3,", &g) == VK_ERR_PARSE);
  CHECK(g == nullptr);
  CHECK(std::strlen(vk_last_error()) > 0);
  CHECK(vk_game_parse(nullptr, &g) == VK_ERR_INVALID_ARGUMENT);
  vk_catalog* c = nullptr;
  CHECK(vk_enumerate(VK_CG, 9, &c) == VK_ERR_INVALID_ARGUMENT);
  const unsigned char junk[4] = {1, 2, 3, 4};
  CHECK(vk_catalog_deserialize(junk, sizeof(junk), &c) == VK_ERR_CORRUPT);
  vk_game* combo = game("n=4; minwin={1,2},{3,4}");
  vk_vector* v = nullptr;
  CHECK(vk_power(combo, VK_SSI, VK_ENGINE_DP, &v) == VK_ERR_UNSUPPORTED);
  char* order = reinterpret_cast<char*>(1);
  REQUIRE(vk_game_complete_order(combo, &order) == VK_OK);
  CHECK(order == nullptr);
  vk_game_free(combo);
  vk_game* ok = game("[1;1]");
  CHECK(vk_game_parse("[1;1]", &g) == VK_OK);
  CHECK(std::strlen(vk_last_error()) == 0);
  vk_game_free(g);
  vk_game_free(ok);
}

TEST_CASE("catalogs, serialization and streaming") {
  vk_catalog* wg = nullptr;
  REQUIRE(vk_enumerate(VK_WG, 4, &wg) == VK_OK);
  CHECK(vk_catalog_size(wg) == 25);
  CHECK(vk_catalog_class(wg) == VK_WG);
  std::uint64_t distinct = 0;
  REQUIRE(vk_catalog_count_distinct(wg, VK_PBI, &distinct) == VK_OK);
  CHECK(distinct == 12);
  unsigned char* data = nullptr;
  std::size_t size = 0;
  REQUIRE(vk_catalog_serialize(wg, &data, &size) == VK_OK);
  vk_catalog* back = nullptr;
  REQUIRE(vk_catalog_deserialize(data, size, &back) == VK_OK);
  CHECK(vk_catalog_size(back) == 25);
  char* cert = nullptr;
  REQUIRE(vk_catalog_certificate(back, 3, &cert) == VK_OK);
  CHECK(take(cert).front() == '[');

  // Feed the serialized bytes back through the streaming reader.
  struct Source {
    const unsigned char* data;
    std::size_t size, pos;
  } src{data, size, 0};
  auto read = [](void* ctx, unsigned char* buf, std::size_t want) -> std::size_t {
    auto* s = static_cast<Source*>(ctx);
    const std::size_t n = std::min(want, s->size - s->pos);
    std::memcpy(buf, s->data + s->pos, n);
    s->pos += n;
    return n;
  };
  std::size_t seen = 0;
  auto count = [](void* ctx, const std::uint32_t*, std::size_t, int weighted) {
    ++*static_cast<std::size_t*>(ctx);
    return weighted ? 0 : 1;
  };
  std::uint64_t total = 0;
  REQUIRE(vk_catalog_stream(read, &src, VK_WG, 4, count, &seen, &total) == VK_OK);
  CHECK(seen == 25);
  CHECK(total == 25);
  src.pos = 0;
  CHECK(vk_catalog_stream(read, &src, VK_CG, 4, count, &seen, &total) == VK_ERR_CORRUPT);
  vk_buffer_free(data);

  unsigned char* vec = nullptr;
  REQUIRE(vk_vectors_serialize(wg, VK_SSI, &vec, &size) == VK_OK);
  CHECK(std::memcmp(vec, "VKVEC1", 6) == 0);
  vk_buffer_free(vec);
  vk_catalog_free(back);
  vk_catalog_free(wg);
}

TEST_CASE("streaming enumeration stops on request") {
  std::size_t seen = 0;
  auto stop_at_ten = [](void* ctx, const std::uint32_t*, std::size_t, int) {
    return ++*static_cast<std::size_t*>(ctx) == 10 ? 1 : 0;
  };
  REQUIRE(vk_enumerate_stream(6, 0, stop_at_ten, &seen) == VK_OK);
  CHECK(seen == 10);
  std::size_t weighted = 0;
  auto count_weighted = [](void* ctx, const std::uint32_t*, std::size_t, int w) {
    *static_cast<std::size_t*>(ctx) += w;
    return 0;
  };
  REQUIRE(vk_enumerate_stream(6, 1, count_weighted, &weighted) == VK_OK);
  CHECK(weighted == 1111);
}

TEST_CASE("catalog records match the cache layout") {
  unsigned char header[16];
  REQUIRE(vk_catalog_header(VK_CG, 5, 117, header) == VK_OK);
  CHECK(std::memcmp(header, "VKCAT1", 6) == 0);
  CHECK(header[6] == 2);
  CHECK(header[7] == 5);
  CHECK(header[8] == 117);
  const std::uint32_t masks[2] = {0x3, 0x1C};
  unsigned char record[10];
  CHECK(vk_catalog_record(masks, 2, record) == 10);
  CHECK(record[0] == 2);
  CHECK(record[6] == 0x1C);
}

TEST_CASE("surveys and gaps") {
  vk_survey* s = nullptr;
  REQUIRE(vk_survey_new(6, &s) == VK_OK);
  REQUIRE(vk_survey_run(s, nullptr, nullptr) == VK_OK);
  std::uint64_t games = 0, distinct = 0;
  REQUIRE(vk_survey_counts(s, VK_CG, VK_SSI, &games, &distinct) == VK_OK);
  CHECK(games == 1171);
  CHECK(distinct == 536);
  REQUIRE(vk_survey_counts(s, VK_WG, VK_PBI, &games, &distinct) == VK_OK);
  CHECK(games == 1111);
  CHECK(distinct == 555);
  vk_gap* gap = nullptr;
  REQUIRE(vk_survey_gap(s, VK_PBI, VK_LINF, nullptr, nullptr, &gap) == VK_OK);
  char* omega = nullptr;
  REQUIRE(vk_gap_omega(gap, &omega) == VK_OK);
  CHECK(take(omega) == "0");
  CHECK(vk_gap_attaining_count(gap) == 1171);
  CHECK(vk_gap_attaining_kept(gap) == 1000);
  vk_gap_free(gap);

  // A survey fed by hand: one weighted and one complete game.
  vk_survey* small = nullptr;
  REQUIRE(vk_survey_new(3, &small) == VK_OK);
  const std::uint32_t majority[1] = {0x3};
  REQUIRE(vk_survey_add(small, majority, 1, 1) == VK_OK);
  REQUIRE(vk_survey_counts(small, VK_WG, VK_SSI, &games, &distinct) == VK_OK);
  CHECK(games == 1);
  vk_survey_free(small);

  vk_target* t = nullptr;
  REQUIRE(vk_target_beta(6, VK_SSI, &t) == VK_OK);
  vk_inverse* r = nullptr;
  REQUIRE(vk_inverse_exact_survey(t, VK_L1, s, &r) == VK_OK);
  CHECK(vk_inverse_mode(r) == VK_EXACT_MIN);
  vk_catalog* wg = nullptr;
  REQUIRE(vk_enumerate(VK_WG, 6, &wg) == VK_OK);
  vk_inverse* r2 = nullptr;
  REQUIRE(vk_inverse_exact(t, VK_L1, wg, &r2) == VK_OK);
  char* d1 = nullptr;
  char* d2 = nullptr;
  REQUIRE(vk_inverse_distance(r, &d1) == VK_OK);
  REQUIRE(vk_inverse_distance(r2, &d2) == VK_OK);
  CHECK(take(d1) == take(d2));
  vk_inverse_free(r);
  vk_inverse_free(r2);
  vk_catalog_free(wg);
  vk_target_free(t);
  vk_survey_free(s);
}

TEST_CASE("heuristic and padded searches") {
  vk_target* t = nullptr;
  REQUIRE(vk_target_parse("n=4 index=ssi\n7/12 1/4 1/12 1/12\n", &t) == VK_OK);
  CHECK(vk_target_voters(t) == 4);
  CHECK(vk_target_index(t) == VK_SSI);
  vk_heuristic_options o;
  vk_heuristic_defaults(&o);
  o.budget = 500;
  o.seed = 4;
  vk_inverse* r = nullptr;
  REQUIRE(vk_inverse_heuristic(t, VK_L1, &o, &r) == VK_OK);
  CHECK(vk_inverse_mode(r) == VK_HEURISTIC_UPPER_BOUND);
  CHECK(vk_inverse_seed(r) == 4);
  char* d = nullptr;
  REQUIRE(vk_inverse_distance(r, &d) == VK_OK);
  CHECK(take(d) == "0");
  vk_inverse_free(r);
  vk_target_free(t);

  vk_game* base = game("n=4; shiftminwin={1,2}");
  vk_catalog* wg5 = nullptr;
  REQUIRE(vk_enumerate(VK_WG, 5, &wg5) == VK_OK);
  REQUIRE(vk_inverse_padded(base, 1, VK_PBI, VK_L1, nullptr, wg5, nullptr, &r) == VK_OK);
  CHECK(vk_inverse_mode(r) == VK_EXACT_MIN);
  vk_vector* v = nullptr;
  REQUIRE(vk_inverse_vector(r, &v) == VK_OK);
  CHECK(vk_vector_size(v) == 5);
  vk_vector_free(v);
  vk_inverse_free(r);
  vk_catalog_free(wg5);
  vk_game_free(base);
}

TEST_CASE("council rule") {
  vk_game* g = nullptr;
  REQUIRE(vk_council_game("A,100\nB,80\nC,40\nD,30\nE,20\nF,10\n", 1000, &g) == VK_OK);
  CHECK(vk_game_voters(g) == 6);
  vk_vector* v = nullptr;
  REQUIRE(vk_power(g, VK_SSI, VK_ENGINE_DP, &v) == VK_OK);
  CHECK(vk_vector_size(v) == 6);
  vk_vector_free(v);
  vk_game_free(g);
  CHECK(vk_council_game("A,1\n", 1000, &g) == VK_ERR_INVALID_ARGUMENT);
}

TEST_CASE("fraction rendering helper") {
  char* out = nullptr;
  REQUIRE(vk_fraction_decimal("40/667", 7, &out) == VK_OK);
  CHECK(take(out) == "0.0599700");
  CHECK(vk_fraction_decimal("x", 7, &out) == VK_ERR_PARSE);
}
