/*
 * C interface to votekit. Every object is an opaque handle released by its
 * matching *_free function. Functions returning vk_status leave a message
 * for the calling thread in vk_last_error() when they fail. Strings and
 * buffers handed out by the library are released with vk_string_free and
 * vk_buffer_free.
 */
#ifndef VOTEKIT_VOTEKIT_H
#define VOTEKIT_VOTEKIT_H

#include <stddef.h>
#include <stdint.h>

#if defined(VOTEKIT_BUILDING)
#define VK_API __attribute__((visibility("default")))
#else
#define VK_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum vk_status {
  VK_OK = 0,
  VK_ERR_PARSE = 1,
  VK_ERR_INVALID_ARGUMENT = 2,
  VK_ERR_NOT_SIMPLE = 3,
  VK_ERR_TOO_LARGE = 4,
  VK_ERR_UNSUPPORTED = 5,
  VK_ERR_CORRUPT = 6,
  VK_ERR_INTERNAL = 7
} vk_status;

typedef enum vk_index { VK_SSI = 0, VK_PBI = 1 } vk_index;
typedef enum vk_metric { VK_L1 = 0, VK_LINF = 1 } vk_metric;
typedef enum vk_class { VK_WG = 1, VK_CG = 2, VK_SG = 3 } vk_class;
typedef enum vk_engine { VK_ENGINE_AUTO = 0, VK_ENGINE_DIRECT = 1, VK_ENGINE_DP = 2 } vk_engine;
typedef enum vk_mode { VK_EXACT_MIN = 0, VK_HEURISTIC_UPPER_BOUND = 1 } vk_mode;

typedef struct vk_game vk_game;
typedef struct vk_vector vk_vector;
typedef struct vk_catalog vk_catalog;
typedef struct vk_survey vk_survey;
typedef struct vk_gap vk_gap;
typedef struct vk_target vk_target;
typedef struct vk_inverse vk_inverse;

VK_API const char* vk_version(void);
/* Message of the last failure on this thread; empty when none. */
VK_API const char* vk_last_error(void);
VK_API void vk_string_free(char* s);
VK_API void vk_buffer_free(unsigned char* data);
/* Decimal rendering of "p/q" with digits places after the point. */
VK_API vk_status vk_fraction_decimal(const char* fraction, int digits, char** out);

/* Games */
VK_API vk_status vk_game_parse(const char* text, vk_game** out);
VK_API void vk_game_free(vk_game* g);
VK_API int vk_game_voters(const vk_game* g);
VK_API vk_status vk_game_to_string(const vk_game* g, char** out);
/* Coalition bit i-1 stands for voter i. */
VK_API vk_status vk_game_evaluate(const vk_game* g, uint64_t coalition, int* winning);
/* Sets *certificate to "[q;w1,...,wn]" or NULL when the game is not weighted. */
VK_API vk_status vk_game_weighted_certificate(const vk_game* g, char** certificate);
/* Sets *order to the voters by desirability ("3,1,2") or NULL when incomplete. */
VK_API vk_status vk_game_complete_order(const vk_game* g, char** order);
/* Complete games with 1 >= 2 >= ... >= n only. */
VK_API vk_status vk_game_shift_minimal(const vk_game* g, char** out);
VK_API vk_status vk_game_add_null_voters(const vk_game* g, int count, vk_game** out);
VK_API vk_status vk_game_null_voters(const vk_game* g, int* count);

/* Power indices */
VK_API vk_status vk_power(const vk_game* g, vk_index index, vk_engine engine, vk_vector** out);
VK_API void vk_vector_free(vk_vector* v);
VK_API int vk_vector_size(const vk_vector* v);
VK_API vk_status vk_vector_fraction(const vk_vector* v, int i, char** out);
VK_API vk_status vk_vector_decimal(const vk_vector* v, int i, int digits, char** out);
VK_API double vk_vector_double(const vk_vector* v, int i);
/* Exact distance as a fraction string. */
VK_API vk_status vk_distance(const vk_vector* x, const vk_vector* y, vk_metric metric, char** out);

/* Catalogs (n <= 8; simple games n <= 5) */
VK_API vk_status vk_enumerate(vk_class game_class, int n, vk_catalog** out);
VK_API void vk_catalog_free(vk_catalog* c);
VK_API uint64_t vk_catalog_size(const vk_catalog* c);
VK_API int vk_catalog_voters(const vk_catalog* c);
VK_API vk_class vk_catalog_class(const vk_catalog* c);
VK_API vk_status vk_catalog_game(const vk_catalog* c, uint64_t i, vk_game** out);
VK_API vk_status vk_catalog_certificate(const vk_catalog* c, uint64_t i, char** out);
VK_API vk_status vk_catalog_count_distinct(const vk_catalog* c, vk_index index, uint64_t* out);
/* Binary cache image of a catalog and back; no file access. */
VK_API vk_status vk_catalog_serialize(const vk_catalog* c, unsigned char** data, size_t* size);
VK_API vk_status vk_catalog_deserialize(const unsigned char* data, size_t size, vk_catalog** out);
VK_API vk_status vk_vectors_serialize(const vk_catalog* c, vk_index index, unsigned char** data, size_t* size);

/* Streaming: one call per complete game, family as coalition bitmasks.
 * A nonzero return stops the walk. */
typedef int (*vk_family_fn)(void* ctx, const uint32_t* masks, size_t count, int weighted);
/* Weightedness is decided per game when test_weighted is nonzero,
 * otherwise the flag passed on is 0. */
VK_API vk_status vk_enumerate_stream(int n, int test_weighted, vk_family_fn fn, void* ctx);
/* 16-byte catalog header and per-game records of the binary cache format. */
VK_API vk_status vk_catalog_header(vk_class game_class, int n, uint64_t count, unsigned char out[16]);
/* Writes 2 + 4 * count bytes into out, which must be large enough. */
VK_API size_t vk_catalog_record(const uint32_t* masks, size_t count, unsigned char* out);
typedef size_t (*vk_read_fn)(void* ctx, unsigned char* buffer, size_t size);
/* Decodes a catalog stream game by game; checks class and n. */
VK_API vk_status vk_catalog_stream(vk_read_fn read, void* read_ctx, vk_class game_class, int n,
                                   vk_family_fn fn, void* ctx, uint64_t* count);

/* Surveys: distinct vectors of both classes and worst-case gaps. */
VK_API vk_status vk_survey_new(int n, vk_survey** out);
VK_API void vk_survey_free(vk_survey* s);
VK_API vk_status vk_survey_add(vk_survey* s, const uint32_t* masks, size_t count, int weighted);
/* Enumerates and feeds every complete game; fn (may be NULL) sees each one. */
VK_API vk_status vk_survey_run(vk_survey* s, vk_family_fn fn, void* ctx);
VK_API vk_status vk_survey_counts(vk_survey* s, vk_class game_class, vk_index index, uint64_t* games,
                                  uint64_t* distinct);
/* Replays the surveyed complete games through emit; see vk_survey_gap. */
typedef vk_status (*vk_replay_fn)(void* ctx, vk_family_fn emit, void* emit_ctx);
/* replay == NULL re-enumerates the complete games. */
VK_API vk_status vk_survey_gap(vk_survey* s, vk_index index, vk_metric metric, vk_replay_fn replay,
                               void* replay_ctx, vk_gap** out);
VK_API void vk_gap_free(vk_gap* g);
VK_API vk_status vk_gap_omega(const vk_gap* g, char** fraction);
VK_API uint64_t vk_gap_attaining_count(const vk_gap* g);
/* Kept attaining games (at most 1000), ascending. */
VK_API uint64_t vk_gap_attaining_kept(const vk_gap* g);
VK_API vk_status vk_gap_attaining(const vk_gap* g, uint64_t i, char** out);
VK_API vk_status vk_gap_nearest(const vk_gap* g, char** out);
VK_API vk_status vk_gap_vectors(const vk_gap* g, vk_vector** complete, vk_vector** weighted);

/* Inverse problem */
VK_API vk_status vk_target_parse(const char* text, vk_target** out);
VK_API vk_status vk_target_beta(int n, vk_index index, vk_target** out);
VK_API vk_status vk_target_from_vector(const vk_vector* v, vk_target** out);
VK_API void vk_target_free(vk_target* t);
VK_API int vk_target_voters(const vk_target* t);
VK_API vk_index vk_target_index(const vk_target* t);

typedef struct vk_heuristic_options {
  uint64_t budget;
  uint64_t seed;
  int64_t scale;
} vk_heuristic_options;

VK_API void vk_heuristic_defaults(vk_heuristic_options* options);
VK_API vk_status vk_inverse_exact(const vk_target* t, vk_metric metric, const vk_catalog* weighted,
                                  vk_inverse** out);
VK_API vk_status vk_inverse_exact_survey(const vk_target* t, vk_metric metric, vk_survey* s, vk_inverse** out);
/* options may be NULL for the defaults. */
VK_API vk_status vk_inverse_heuristic(const vk_target* t, vk_metric metric, const vk_heuristic_options* options,
                                      vk_inverse** out);
/* Exact when weighted (or survey) covers base voters + pads, heuristic
 * otherwise. weighted, survey and options may be NULL. */
VK_API vk_status vk_inverse_padded(const vk_game* base, int pads, vk_index index, vk_metric metric,
                                   const vk_heuristic_options* options, const vk_catalog* weighted,
                                   vk_survey* survey, vk_inverse** out);
VK_API void vk_inverse_free(vk_inverse* r);
VK_API vk_status vk_inverse_game(const vk_inverse* r, char** out);
VK_API vk_status vk_inverse_distance(const vk_inverse* r, char** fraction);
VK_API vk_status vk_inverse_vector(const vk_inverse* r, vk_vector** out);
VK_API vk_mode vk_inverse_mode(const vk_inverse* r);
VK_API uint64_t vk_inverse_evaluations(const vk_inverse* r);
VK_API uint64_t vk_inverse_seed(const vk_inverse* r);

/* Council rule from "name,population" lines; resolution 0 keeps exact shares. */
VK_API vk_status vk_council_game(const char* populations, int64_t resolution, vk_game** out);

#ifdef __cplusplus
}
#endif

#endif
