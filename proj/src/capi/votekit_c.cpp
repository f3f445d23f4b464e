#include "votekit/votekit.h"

#include "votekit/enumeration.hpp"
#include "votekit/error.hpp"
#include "votekit/games.hpp"
#include "votekit/geometry.hpp"
#include "votekit/indices.hpp"
#include "votekit/inverse.hpp"
#include "votekit/weightedness.hpp"

#include <cstdlib>
#include <cstring>
#include <istream>
#include <new>
#include <sstream>
#include <streambuf>
#include <string>

using namespace votekit;

struct vk_game {
  Game game;
};
struct vk_vector {
  PowerVector vector;
};
struct vk_catalog {
  GameCatalog catalog;
};
struct vk_survey {
  Survey survey;
};
struct vk_gap {
  GapReport report;
};
struct vk_target {
  Target target;
};
struct vk_inverse {
  InverseResult result;
};

namespace {

thread_local std::string last_error;

// Thrown through library walks when a C callback asks to stop.
struct StopWalk {};

vk_status status_of(Errc code) {
  switch (code) {
    case Errc::kParse:
      return VK_ERR_PARSE;
    case Errc::kInvalidArgument:
      return VK_ERR_INVALID_ARGUMENT;
    case Errc::kNotSimple:
      return VK_ERR_NOT_SIMPLE;
    case Errc::kTooLarge:
      return VK_ERR_TOO_LARGE;
    case Errc::kUnsupported:
      return VK_ERR_UNSUPPORTED;
    case Errc::kCorrupt:
      return VK_ERR_CORRUPT;
  }
  return VK_ERR_INTERNAL;
}

template <class F>
vk_status guarded(F&& body) {
  try {
    last_error.clear();
    body();
    return VK_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const StopWalk&) {
    return VK_OK;
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return VK_ERR_TOO_LARGE;
  } catch (const std::exception& e) {
    last_error = e.what();
    return VK_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return VK_ERR_INTERNAL;
  }
}

void require(const void* p, const char* what) {
  if (p == nullptr) throw Error(Errc::kInvalidArgument, std::string(what) + " must not be null");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void dup_buffer(const std::string& bytes, unsigned char** data, std::size_t* size) {
  require(data, "data");
  require(size, "size");
  auto* out = static_cast<unsigned char*>(std::malloc(bytes.size() == 0 ? 1 : bytes.size()));
  if (out == nullptr) throw std::bad_alloc();
  std::memcpy(out, bytes.data(), bytes.size());
  *data = out;
  *size = bytes.size();
}

IndexKind kind_of(vk_index index) {
  if (index == VK_SSI) return IndexKind::kShapleyShubik;
  if (index == VK_PBI) return IndexKind::kBanzhaf;
  throw Error(Errc::kInvalidArgument, "unknown index");
}

Metric metric_of(vk_metric metric) {
  if (metric == VK_L1) return Metric::kL1;
  if (metric == VK_LINF) return Metric::kLinf;
  throw Error(Errc::kInvalidArgument, "unknown metric");
}

GameClass class_of(vk_class c) {
  if (c == VK_WG) return GameClass::kWeighted;
  if (c == VK_CG) return GameClass::kComplete;
  if (c == VK_SG) return GameClass::kSimple;
  throw Error(Errc::kInvalidArgument, "unknown game class");
}

std::vector<Coalition> family_of(const std::uint32_t* masks, std::size_t count) {
  if (count > 0) require(masks, "masks");
  std::vector<Coalition> family;
  family.reserve(count);
  for (std::size_t i = 0; i < count; ++i) family.emplace_back(masks[i]);
  return family;
}

std::vector<std::uint32_t> masks_of(std::span<const Coalition> family) {
  std::vector<std::uint32_t> out;
  out.reserve(family.size());
  for (Coalition c : family) out.push_back(static_cast<std::uint32_t>(c.bits()));
  return out;
}

HeuristicOptions heuristic_of(const vk_heuristic_options* options) {
  HeuristicOptions out;
  if (options) {
    out.budget = options->budget;
    out.seed = options->seed;
    out.scale = options->scale;
  }
  return out;
}

// std::istream over a caller-supplied read function.
class CallbackBuffer : public std::streambuf {
 public:
  CallbackBuffer(vk_read_fn read, void* ctx) : read_(read), ctx_(ctx) {}

 protected:
  int_type underflow() override {
    if (gptr() < egptr()) return traits_type::to_int_type(*gptr());
    const std::size_t got = read_(ctx_, reinterpret_cast<unsigned char*>(buffer_), sizeof(buffer_));
    if (got == 0) return traits_type::eof();
    setg(buffer_, buffer_, buffer_ + got);
    return traits_type::to_int_type(*gptr());
  }

 private:
  vk_read_fn read_;
  void* ctx_;
  char buffer_[1 << 16];
};

ExplicitGame table_of(int n, const std::vector<Coalition>& family) {
  return to_explicit(CompleteGame(n, family));
}

}  // namespace

extern "C" {

const char* vk_version(void) { return "1.0.0"; }

const char* vk_last_error(void) { return last_error.c_str(); }

void vk_string_free(char* s) { std::free(s); }

void vk_buffer_free(unsigned char* data) { std::free(data); }

vk_status vk_fraction_decimal(const char* fraction, int digits, char** out) {
  return guarded([&] {
    require(fraction, "fraction");
    require(out, "out");
    *out = dup_string(to_decimal_string(parse_rational(fraction), digits));
  });
}

vk_status vk_game_parse(const char* text, vk_game** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new vk_game{parse_game(text)};
  });
}

void vk_game_free(vk_game* g) { delete g; }

int vk_game_voters(const vk_game* g) { return g ? g->game.voters() : 0; }

vk_status vk_game_to_string(const vk_game* g, char** out) {
  return guarded([&] {
    require(g, "game");
    require(out, "out");
    *out = dup_string(to_string(g->game));
  });
}

vk_status vk_game_evaluate(const vk_game* g, std::uint64_t coalition, int* winning) {
  return guarded([&] {
    require(g, "game");
    require(winning, "winning");
    *winning = evaluate(g->game, Coalition(coalition)) ? 1 : 0;
  });
}

vk_status vk_game_weighted_certificate(const vk_game* g, char** certificate) {
  return guarded([&] {
    require(g, "game");
    require(certificate, "certificate");
    const auto rep = weighted_certificate(to_explicit(g->game));
    *certificate = rep ? dup_string(to_string(rep->to_game())) : nullptr;
  });
}

vk_status vk_game_complete_order(const vk_game* g, char** order) {
  return guarded([&] {
    require(g, "game");
    require(order, "order");
    const auto sorted = is_complete(to_explicit(g->game));
    if (!sorted) {
      *order = nullptr;
      return;
    }
    std::string text;
    for (int v : *sorted) text += (text.empty() ? "" : ",") + std::to_string(v);
    *order = dup_string(text);
  });
}

vk_status vk_game_shift_minimal(const vk_game* g, char** out) {
  return guarded([&] {
    require(g, "game");
    require(out, "out");
    *out = dup_string(to_string(shift_minimal_winning(to_explicit(g->game))));
  });
}

vk_status vk_game_add_null_voters(const vk_game* g, int count, vk_game** out) {
  return guarded([&] {
    require(g, "game");
    require(out, "out");
    *out = new vk_game{add_null_voters(g->game, count)};
  });
}

vk_status vk_game_null_voters(const vk_game* g, int* count) {
  return guarded([&] {
    require(g, "game");
    require(count, "count");
    *count = null_voter_count(to_explicit(g->game));
  });
}

vk_status vk_power(const vk_game* g, vk_index index, vk_engine engine, vk_vector** out) {
  return guarded([&] {
    require(g, "game");
    require(out, "out");
    Engine e = Engine::kAuto;
    if (engine == VK_ENGINE_DIRECT) e = Engine::kDirect;
    if (engine == VK_ENGINE_DP) e = Engine::kDp;
    *out = new vk_vector{power(g->game, kind_of(index), e)};
  });
}

void vk_vector_free(vk_vector* v) { delete v; }

int vk_vector_size(const vk_vector* v) { return v ? v->vector.size() : 0; }

vk_status vk_vector_fraction(const vk_vector* v, int i, char** out) {
  return guarded([&] {
    require(v, "vector");
    require(out, "out");
    if (i < 0 || i >= v->vector.size()) throw Error(Errc::kInvalidArgument, "entry index out of range");
    *out = dup_string(to_fraction_string(v->vector[i]));
  });
}

vk_status vk_vector_decimal(const vk_vector* v, int i, int digits, char** out) {
  return guarded([&] {
    require(v, "vector");
    require(out, "out");
    if (i < 0 || i >= v->vector.size()) throw Error(Errc::kInvalidArgument, "entry index out of range");
    *out = dup_string(to_decimal_string(v->vector[i], digits));
  });
}

double vk_vector_double(const vk_vector* v, int i) {
  if (!v || i < 0 || i >= v->vector.size()) return 0.0;
  return to_double(v->vector[i]);
}

vk_status vk_distance(const vk_vector* x, const vk_vector* y, vk_metric metric, char** out) {
  return guarded([&] {
    require(x, "x");
    require(y, "y");
    require(out, "out");
    *out = dup_string(to_fraction_string(distance(x->vector, y->vector, metric_of(metric))));
  });
}

vk_status vk_enumerate(vk_class game_class, int n, vk_catalog** out) {
  return guarded([&] {
    require(out, "out");
    switch (class_of(game_class)) {
      case GameClass::kWeighted:
        *out = new vk_catalog{enumerate_weighted(n)};
        break;
      case GameClass::kComplete:
        *out = new vk_catalog{enumerate_complete(n)};
        break;
      case GameClass::kSimple:
        *out = new vk_catalog{enumerate_simple(n)};
        break;
    }
  });
}

void vk_catalog_free(vk_catalog* c) { delete c; }

std::uint64_t vk_catalog_size(const vk_catalog* c) { return c ? c->catalog.size() : 0; }

int vk_catalog_voters(const vk_catalog* c) { return c ? c->catalog.voters() : 0; }

vk_class vk_catalog_class(const vk_catalog* c) {
  return c ? static_cast<vk_class>(static_cast<int>(c->catalog.game_class())) : VK_CG;
}

vk_status vk_catalog_game(const vk_catalog* c, std::uint64_t i, vk_game** out) {
  return guarded([&] {
    require(c, "catalog");
    require(out, "out");
    if (i >= c->catalog.size()) throw Error(Errc::kInvalidArgument, "catalog index out of range");
    *out = new vk_game{c->catalog.game(i)};
  });
}

vk_status vk_catalog_certificate(const vk_catalog* c, std::uint64_t i, char** out) {
  return guarded([&] {
    require(c, "catalog");
    require(out, "out");
    if (i >= c->catalog.size()) throw Error(Errc::kInvalidArgument, "catalog index out of range");
    *out = dup_string(to_string(c->catalog.certificate(i).to_game()));
  });
}

vk_status vk_catalog_count_distinct(const vk_catalog* c, vk_index index, std::uint64_t* out) {
  return guarded([&] {
    require(c, "catalog");
    require(out, "out");
    *out = count_distinct(c->catalog, kind_of(index));
  });
}

vk_status vk_catalog_serialize(const vk_catalog* c, unsigned char** data, std::size_t* size) {
  return guarded([&] {
    require(c, "catalog");
    std::ostringstream out(std::ios::binary);
    write_catalog(out, c->catalog);
    dup_buffer(out.str(), data, size);
  });
}

vk_status vk_catalog_deserialize(const unsigned char* data, std::size_t size, vk_catalog** out) {
  return guarded([&] {
    require(data, "data");
    require(out, "out");
    std::istringstream in(std::string(reinterpret_cast<const char*>(data), size), std::ios::binary);
    *out = new vk_catalog{read_catalog(in)};
  });
}

vk_status vk_vectors_serialize(const vk_catalog* c, vk_index index, unsigned char** data, std::size_t* size) {
  return guarded([&] {
    require(c, "catalog");
    const IndexKind kind = kind_of(index);
    const auto vectors = power_vectors(c->catalog, kind);
    std::ostringstream out(std::ios::binary);
    write_vectors(out, c->catalog.voters(), kind, vectors);
    dup_buffer(out.str(), data, size);
  });
}

vk_status vk_enumerate_stream(int n, int test_weighted, vk_family_fn fn, void* ctx) {
  return guarded([&] {
    require(reinterpret_cast<const void*>(fn), "callback");
    for_each_complete_game(n, [&](const GameView& g) {
      const bool weighted = test_weighted && weighted_certificate_sorted(g.to_explicit()).has_value();
      const auto masks = masks_of(g.family);
      if (fn(ctx, masks.data(), masks.size(), weighted ? 1 : 0) != 0) throw StopWalk{};
    });
  });
}

vk_status vk_catalog_header(vk_class game_class, int n, std::uint64_t count, unsigned char out[16]) {
  return guarded([&] {
    require(out, "out");
    class_of(game_class);
    if (n < 1 || n > kMaxEnumerationVoters) throw Error(Errc::kInvalidArgument, "voter count out of range");
    std::memcpy(out, "VKCAT1", 6);
    out[6] = static_cast<unsigned char>(game_class);
    out[7] = static_cast<unsigned char>(n);
    for (int i = 0; i < 8; ++i) out[8 + i] = static_cast<unsigned char>((count >> (8 * i)) & 0xFFU);
  });
}

std::size_t vk_catalog_record(const std::uint32_t* masks, std::size_t count, unsigned char* out) {
  if (out == nullptr || (count > 0 && masks == nullptr) || count > 0xFFFF) return 0;
  out[0] = static_cast<unsigned char>(count & 0xFFU);
  out[1] = static_cast<unsigned char>(count >> 8);
  for (std::size_t i = 0; i < count; ++i) {
    for (int b = 0; b < 4; ++b) out[2 + 4 * i + b] = static_cast<unsigned char>((masks[i] >> (8 * b)) & 0xFFU);
  }
  return 2 + 4 * count;
}

vk_status vk_catalog_stream(vk_read_fn read, void* read_ctx, vk_class game_class, int n, vk_family_fn fn,
                            void* ctx, std::uint64_t* count) {
  return guarded([&] {
    require(reinterpret_cast<const void*>(read), "read");
    require(reinterpret_cast<const void*>(fn), "callback");
    CallbackBuffer buffer(read, read_ctx);
    std::istream in(&buffer);
    const std::uint64_t got = stream_catalog(in, n, class_of(game_class), [&](const GameView& g) {
      const auto masks = masks_of(g.family);
      if (fn(ctx, masks.data(), masks.size(), game_class == VK_WG ? 1 : 0) != 0) throw StopWalk{};
    });
    if (in.peek() != std::char_traits<char>::eof()) throw Error(Errc::kCorrupt, "cache file has trailing bytes");
    if (count) *count = got;
  });
}

vk_status vk_survey_new(int n, vk_survey** out) {
  return guarded([&] {
    require(out, "out");
    *out = new vk_survey{Survey(n, {IndexKind::kShapleyShubik, IndexKind::kBanzhaf})};
  });
}

void vk_survey_free(vk_survey* s) { delete s; }

vk_status vk_survey_add(vk_survey* s, const std::uint32_t* masks, std::size_t count, int weighted) {
  return guarded([&] {
    require(s, "survey");
    const int n = s->survey.voters();
    const auto family = family_of(masks, count);
    const ExplicitGame g = table_of(n, family);
    s->survey.add(GameView{n, family, g.words()}, weighted != 0);
  });
}

vk_status vk_survey_run(vk_survey* s, vk_family_fn fn, void* ctx) {
  return guarded([&] {
    require(s, "survey");
    for_each_complete_game(s->survey.voters(), [&](const GameView& g) {
      const bool weighted = weighted_certificate_sorted(g.to_explicit()).has_value();
      s->survey.add(g, weighted);
      if (fn) {
        const auto masks = masks_of(g.family);
        if (fn(ctx, masks.data(), masks.size(), weighted ? 1 : 0) != 0) throw StopWalk{};
      }
    });
  });
}

vk_status vk_survey_counts(vk_survey* s, vk_class game_class, vk_index index, std::uint64_t* games,
                           std::uint64_t* distinct) {
  return guarded([&] {
    require(s, "survey");
    const GameClass c = class_of(game_class);
    if (c == GameClass::kSimple) throw Error(Errc::kInvalidArgument, "surveys cover weighted and complete games");
    if (games) *games = s->survey.games(c);
    if (distinct) *distinct = s->survey.distinct(c, kind_of(index));
  });
}

namespace {

struct ReplayContext {
  int n;
  const GameVisitor* visit;
};

int replay_emit(void* ctx, const std::uint32_t* masks, std::size_t count, int) {
  auto* r = static_cast<ReplayContext*>(ctx);
  const auto family = family_of(masks, count);
  const ExplicitGame g = table_of(r->n, family);
  (*r->visit)(GameView{r->n, family, g.words()});
  return 0;
}

}  // namespace

vk_status vk_survey_gap(vk_survey* s, vk_index index, vk_metric metric, vk_replay_fn replay, void* replay_ctx,
                        vk_gap** out) {
  return guarded([&] {
    require(s, "survey");
    require(out, "out");
    const int n = s->survey.voters();
    GameReplay source;
    if (replay) {
      source = [&](const GameVisitor& visit) {
        ReplayContext rc{n, &visit};
        const vk_status st = replay(replay_ctx, replay_emit, &rc);
        if (st != VK_OK) throw Error(Errc::kCorrupt, "replay source failed: " + last_error);
      };
    } else {
      source = [n](const GameVisitor& visit) { for_each_complete_game(n, visit); };
    }
    *out = new vk_gap{s->survey.gap(kind_of(index), metric_of(metric), source)};
  });
}

void vk_gap_free(vk_gap* g) { delete g; }

vk_status vk_gap_omega(const vk_gap* g, char** fraction) {
  return guarded([&] {
    require(g, "gap");
    require(fraction, "fraction");
    *fraction = dup_string(to_fraction_string(g->report.omega));
  });
}

std::uint64_t vk_gap_attaining_count(const vk_gap* g) { return g ? g->report.attaining_count : 0; }

std::uint64_t vk_gap_attaining_kept(const vk_gap* g) { return g ? g->report.attaining.size() : 0; }

vk_status vk_gap_attaining(const vk_gap* g, std::uint64_t i, char** out) {
  return guarded([&] {
    require(g, "gap");
    require(out, "out");
    if (i >= g->report.attaining.size()) throw Error(Errc::kInvalidArgument, "attaining index out of range");
    *out = dup_string(to_string(g->report.attaining[i]));
  });
}

vk_status vk_gap_nearest(const vk_gap* g, char** out) {
  return guarded([&] {
    require(g, "gap");
    require(out, "out");
    *out = dup_string(to_string(*g->report.nearest_weighted));
  });
}

vk_status vk_gap_vectors(const vk_gap* g, vk_vector** complete, vk_vector** weighted) {
  return guarded([&] {
    require(g, "gap");
    if (complete) *complete = new vk_vector{*g->report.complete_vector};
    if (weighted) *weighted = new vk_vector{*g->report.weighted_vector};
  });
}

vk_status vk_target_parse(const char* text, vk_target** out) {
  return guarded([&] {
    require(text, "text");
    require(out, "out");
    *out = new vk_target{parse_target(text)};
  });
}

vk_status vk_target_beta(int n, vk_index index, vk_target** out) {
  return guarded([&] {
    require(out, "out");
    *out = new vk_target{beta_target(n, kind_of(index))};
  });
}

vk_status vk_target_from_vector(const vk_vector* v, vk_target** out) {
  return guarded([&] {
    require(v, "vector");
    require(out, "out");
    *out = new vk_target{make_target(v->vector)};
  });
}

void vk_target_free(vk_target* t) { delete t; }

int vk_target_voters(const vk_target* t) { return t ? t->target.n : 0; }

vk_index vk_target_index(const vk_target* t) {
  return t && t->target.kind == IndexKind::kBanzhaf ? VK_PBI : VK_SSI;
}

void vk_heuristic_defaults(vk_heuristic_options* options) {
  if (options == nullptr) return;
  const HeuristicOptions d;
  options->budget = d.budget;
  options->seed = d.seed;
  options->scale = d.scale;
}

vk_status vk_inverse_exact(const vk_target* t, vk_metric metric, const vk_catalog* weighted, vk_inverse** out) {
  return guarded([&] {
    require(t, "target");
    require(weighted, "catalog");
    require(out, "out");
    *out = new vk_inverse{inverse_exact(t->target, metric_of(metric), weighted->catalog)};
  });
}

vk_status vk_inverse_exact_survey(const vk_target* t, vk_metric metric, vk_survey* s, vk_inverse** out) {
  return guarded([&] {
    require(t, "target");
    require(s, "survey");
    require(out, "out");
    *out = new vk_inverse{inverse_exact(t->target, metric_of(metric), s->survey)};
  });
}

vk_status vk_inverse_heuristic(const vk_target* t, vk_metric metric, const vk_heuristic_options* options,
                               vk_inverse** out) {
  return guarded([&] {
    require(t, "target");
    require(out, "out");
    *out = new vk_inverse{inverse_heuristic(t->target, metric_of(metric), heuristic_of(options))};
  });
}

vk_status vk_inverse_padded(const vk_game* base, int pads, vk_index index, vk_metric metric,
                            const vk_heuristic_options* options, const vk_catalog* weighted, vk_survey* survey,
                            vk_inverse** out) {
  return guarded([&] {
    require(base, "base");
    require(out, "out");
    const CompleteGame* complete = base->game.get_if<CompleteGame>();
    std::optional<CompleteGame> converted;
    if (!complete) {
      converted = shift_minimal_winning(to_explicit(base->game));
      complete = &*converted;
    }
    PaddedOptions o;
    o.heuristic = heuristic_of(options);
    o.weighted = weighted ? &weighted->catalog : nullptr;
    o.survey = survey ? &survey->survey : nullptr;
    *out = new vk_inverse{inverse_padded(*complete, pads, kind_of(index), metric_of(metric), o)};
  });
}

void vk_inverse_free(vk_inverse* r) { delete r; }

vk_status vk_inverse_game(const vk_inverse* r, char** out) {
  return guarded([&] {
    require(r, "result");
    require(out, "out");
    *out = dup_string(to_string(r->result.game));
  });
}

vk_status vk_inverse_distance(const vk_inverse* r, char** fraction) {
  return guarded([&] {
    require(r, "result");
    require(fraction, "fraction");
    *fraction = dup_string(to_fraction_string(r->result.distance));
  });
}

vk_status vk_inverse_vector(const vk_inverse* r, vk_vector** out) {
  return guarded([&] {
    require(r, "result");
    require(out, "out");
    *out = new vk_vector{r->result.vector};
  });
}

vk_mode vk_inverse_mode(const vk_inverse* r) {
  return r && r->result.mode == InverseMode::kExactMin ? VK_EXACT_MIN : VK_HEURISTIC_UPPER_BOUND;
}

std::uint64_t vk_inverse_evaluations(const vk_inverse* r) { return r ? r->result.evaluations : 0; }

std::uint64_t vk_inverse_seed(const vk_inverse* r) { return r ? r->result.seed : 0; }

vk_status vk_council_game(const char* populations, std::int64_t resolution, vk_game** out) {
  return guarded([&] {
    require(populations, "populations");
    require(out, "out");
    *out = new vk_game{Game(council_game(parse_populations(populations), resolution))};
  });
}

}  // extern "C"
