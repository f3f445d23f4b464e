// votekit-cli: command-line front end over the votekit C interface.
//
// Exit codes: 0 success, 1 usage or input error, 2 certified count mismatch.

#include "votekit/votekit.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitMismatch = 2;

struct Failure {
  std::string message;
};

void check(vk_status status, const std::string& what) {
  if (status != VK_OK) throw Failure{what + ": " + vk_last_error()};
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using GamePtr = std::unique_ptr<vk_game, Deleter<vk_game, vk_game_free>>;
using VectorPtr = std::unique_ptr<vk_vector, Deleter<vk_vector, vk_vector_free>>;
using CatalogPtr = std::unique_ptr<vk_catalog, Deleter<vk_catalog, vk_catalog_free>>;
using SurveyPtr = std::unique_ptr<vk_survey, Deleter<vk_survey, vk_survey_free>>;
using GapPtr = std::unique_ptr<vk_gap, Deleter<vk_gap, vk_gap_free>>;
using TargetPtr = std::unique_ptr<vk_target, Deleter<vk_target, vk_target_free>>;
using InversePtr = std::unique_ptr<vk_inverse, Deleter<vk_inverse, vk_inverse_free>>;

// Takes ownership of a library string.
std::string take(char* s) {
  if (s == nullptr) return {};
  std::string out(s);
  vk_string_free(s);
  return out;
}

std::string decimal(const std::string& fraction) {
  char* out = nullptr;
  check(vk_fraction_decimal(fraction.c_str(), 7, &out), "rendering " + fraction);
  return take(out);
}

GamePtr parse_game(const std::string& text) {
  vk_game* g = nullptr;
  check(vk_game_parse(text.c_str(), &g), "parsing game");
  return GamePtr(g);
}

std::string game_text(const vk_game* g) {
  char* s = nullptr;
  check(vk_game_to_string(g, &s), "rendering game");
  return take(s);
}

VectorPtr power_of(const vk_game* g, vk_index index, vk_engine engine = VK_ENGINE_AUTO) {
  vk_vector* v = nullptr;
  check(vk_power(g, index, engine, &v), "computing power");
  return VectorPtr(v);
}

std::vector<std::string> fractions(const vk_vector* v) {
  std::vector<std::string> out;
  for (int i = 0; i < vk_vector_size(v); ++i) {
    char* s = nullptr;
    check(vk_vector_fraction(v, i, &s), "rendering vector");
    out.push_back(take(s));
  }
  return out;
}

std::vector<std::string> decimals(const vk_vector* v) {
  std::vector<std::string> out;
  for (int i = 0; i < vk_vector_size(v); ++i) {
    char* s = nullptr;
    check(vk_vector_decimal(v, i, 7, &s), "rendering vector");
    out.push_back(take(s));
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : "") + parts[i];
  return out;
}

const char* index_name(vk_index i) { return i == VK_SSI ? "ssi" : "pbi"; }
const char* metric_name(vk_metric m) { return m == VK_L1 ? "l1" : "linf"; }
const char* class_name(vk_class c) { return c == VK_WG ? "wg" : c == VK_CG ? "cg" : "sg"; }

vk_index parse_index(const std::string& s) {
  if (s == "ssi") return VK_SSI;
  if (s == "pbi") return VK_PBI;
  throw Failure{"unknown index '" + s + "' (expected ssi or pbi)"};
}

vk_metric parse_metric(const std::string& s) {
  if (s == "l1") return VK_L1;
  if (s == "linf") return VK_LINF;
  throw Failure{"unknown metric '" + s + "' (expected l1 or linf)"};
}

std::vector<vk_index> parse_indices(const std::string& s) {
  if (s == "both") return {VK_SSI, VK_PBI};
  return {parse_index(s)};
}

std::pair<int, int> parse_range(const std::string& s) {
  try {
    const auto dots = s.find("..");
    if (dots == std::string::npos) {
      const int n = std::stoi(s);
      return {n, n};
    }
    return {std::stoi(s.substr(0, dots)), std::stoi(s.substr(dots + 2))};
  } catch (const std::exception&) {
    throw Failure{"bad voter range '" + s + "' (expected N or A..B)"};
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{"cannot open " + path};
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// Certified reference counts. Keys: class, n, index ("" for game counts).
const std::map<std::tuple<std::string, int, std::string>, std::uint64_t>& certified() {
  static const std::map<std::tuple<std::string, int, std::string>, std::uint64_t> table = {
      {{"cg", 3, ""}, 8},          {{"cg", 6, ""}, 1171},       {{"cg", 7, ""}, 44313},
      {{"cg", 8, ""}, 16175188},   {{"wg", 3, ""}, 8},          {{"wg", 4, ""}, 25},
      {{"wg", 6, ""}, 1111},       {{"wg", 7, ""}, 29373},      {{"wg", 8, ""}, 2730164},
      {{"sg", 4, ""}, 28},
      {{"wg", 3, "ssi"}, 4},       {{"wg", 4, "ssi"}, 11},      {{"wg", 5, "ssi"}, 53},
      {{"wg", 6, "ssi"}, 536},     {{"wg", 7, "ssi"}, 14188},   {{"wg", 8, "ssi"}, 1364907},
      {{"wg", 3, "pbi"}, 4},       {{"wg", 4, "pbi"}, 12},      {{"wg", 5, "pbi"}, 57},
      {{"wg", 6, "pbi"}, 555},     {{"wg", 7, "pbi"}, 14720},   {{"wg", 8, "pbi"}, 1366032},
      {{"cg", 3, "ssi"}, 4},       {{"cg", 4, "ssi"}, 11},      {{"cg", 5, "ssi"}, 53},
      {{"cg", 6, "ssi"}, 536},     {{"cg", 7, "ssi"}, 17973},   {{"cg", 8, "ssi"}, 6314952},
      {{"cg", 3, "pbi"}, 4},       {{"cg", 4, "pbi"}, 12},      {{"cg", 5, "pbi"}, 57},
      {{"cg", 6, "pbi"}, 555},     {{"cg", 7, "pbi"}, 18600},   {{"cg", 8, "pbi"}, 4616157},
  };
  return table;
}

std::optional<std::uint64_t> certified_count(vk_class c, int n, const std::string& index) {
  const auto it = certified().find({class_name(c), n, index});
  if (it == certified().end()) return std::nullopt;
  return it->second;
}

/// Settings shared by all subcommands.
struct RunConfig {
  std::string format = "table";
  std::string cache;
  int threads = 1;
  bool long_run = false;
  std::uint64_t seed = 0;
};

/// Rows for table and CSV output plus the JSON results value.
struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  json results = json::array();
  std::vector<std::string> notes;  // table output only
  bool mismatch = false;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void emit(const Report& report, const RunConfig& config, const json& config_json, double seconds) {
  if (config.format == "json") {
    json doc;
    doc["config"] = config_json;
    doc["results"] = report.results;
    char stamp[32];
    const std::time_t now = std::time(nullptr);
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    doc["timing"] = {{"seconds", std::round(seconds * 1000.0) / 1000.0}, {"finished_at", stamp}};
    std::cout << doc.dump(2) << "\n";
    return;
  }
  if (config.format == "csv") {
    std::vector<std::string> header;
    for (const auto& c : report.columns) header.push_back(csv_field(c));
    std::cout << join(header, ",") << "\n";
    for (const auto& row : report.rows) {
      std::vector<std::string> cells;
      for (const auto& c : row) cells.push_back(csv_field(c));
      std::cout << join(cells, ",") << "\n";
    }
    return;
  }
  std::vector<std::size_t> width(report.columns.size());
  for (std::size_t i = 0; i < width.size(); ++i) width[i] = report.columns[i].size();
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size() && i < width.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  auto print_row = [&](const std::vector<std::string>& row) {
    std::string line;
    for (std::size_t i = 0; i < row.size(); ++i) {
      line += row[i];
      if (i + 1 < row.size()) line += std::string(width[i] - row[i].size() + 2, ' ');
    }
    std::cout << line << "\n";
  };
  print_row(report.columns);
  for (const auto& row : report.rows) print_row(row);
  for (const auto& note : report.notes) std::cout << note << "\n";
}

// ---------------------------------------------------------------------------
// Cache files: "<class>-<n>.vkcat" catalogs and "cg-<n>.vkwfl" weightedness
// flags (magic "VKWFL1", u8 n, u64 count, one bit per complete game).

class Cache {
 public:
  explicit Cache(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) fs::create_directories(dir_);
  }

  bool enabled() const { return !dir_.empty(); }
  fs::path catalog(vk_class c, int n) const { return fs::path(dir_) / (std::string(class_name(c)) + "-" + std::to_string(n) + ".vkcat"); }
  fs::path flags(int n) const { return fs::path(dir_) / ("cg-" + std::to_string(n) + ".vkwfl"); }

 private:
  std::string dir_;
};

void warn(const std::string& message) { std::cerr << "votekit-cli: " << message << "\n"; }

// Writes a catalog file record by record, patching the count at the end.
class CatalogFile {
 public:
  CatalogFile(fs::path path, vk_class c, int n) : path_(std::move(path)), tmp_(path_.string() + ".tmp"), class_(c), n_(n) {
    out_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!out_) throw Failure{"cannot write " + tmp_.string()};
    write_header(0);
  }

  void add(const std::uint32_t* masks, std::size_t count) {
    buffer_.resize(2 + 4 * count);
    const std::size_t size = vk_catalog_record(masks, count, buffer_.data());
    if (size == 0) throw Failure{"cannot encode a catalog record"};
    out_.write(reinterpret_cast<const char*>(buffer_.data()), static_cast<std::streamsize>(size));
    ++count_;
  }

  void commit() {
    out_.seekp(0);
    write_header(count_);
    out_.close();
    if (!out_) throw Failure{"failed writing " + tmp_.string()};
    fs::rename(tmp_, path_);
  }

 private:
  void write_header(std::uint64_t count) {
    unsigned char header[16];
    check(vk_catalog_header(class_, n_, count, header), "catalog header");
    out_.write(reinterpret_cast<const char*>(header), 16);
  }

  fs::path path_, tmp_;
  vk_class class_;
  int n_;
  std::ofstream out_;
  std::vector<unsigned char> buffer_;
  std::uint64_t count_ = 0;
};

void write_flags(const fs::path& path, int n, const std::vector<bool>& flags) {
  const fs::path tmp = path.string() + ".tmp";
  std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
  out.write("VKWFL1", 6);
  out.put(static_cast<char>(n));
  const std::uint64_t count = flags.size();
  for (int i = 0; i < 8; ++i) out.put(static_cast<char>((count >> (8 * i)) & 0xFFU));
  for (std::size_t i = 0; i < flags.size(); i += 8) {
    unsigned char byte = 0;
    for (std::size_t b = 0; b < 8 && i + b < flags.size(); ++b) byte |= static_cast<unsigned char>(flags[i + b]) << b;
    out.put(static_cast<char>(byte));
  }
  out.close();
  if (!out) throw Failure{"failed writing " + tmp.string()};
  fs::rename(tmp, path);
}

std::optional<std::vector<bool>> read_flags(const fs::path& path, int n) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  char magic[6];
  in.read(magic, 6);
  if (!in || std::string(magic, 6) != "VKWFL1" || in.get() != n) return std::nullopt;
  std::uint64_t count = 0;
  for (int i = 0; i < 8; ++i) {
    const int c = in.get();
    if (c == EOF) return std::nullopt;
    count |= static_cast<std::uint64_t>(c) << (8 * i);
  }
  std::vector<bool> flags;
  flags.reserve(count);
  for (std::uint64_t i = 0; i < count; i += 8) {
    const int c = in.get();
    if (c == EOF) return std::nullopt;
    for (std::uint64_t b = 0; b < 8 && i + b < count; ++b) flags.push_back((c >> b) & 1);
  }
  if (in.get() != EOF) return std::nullopt;
  return flags;
}

struct FileReader {
  std::ifstream in;
  static std::size_t read(void* ctx, unsigned char* buffer, std::size_t size) {
    auto* self = static_cast<FileReader*>(ctx);
    self->in.read(reinterpret_cast<char*>(buffer), static_cast<std::streamsize>(size));
    return static_cast<std::size_t>(self->in.gcount());
  }
};

/// A survey of every complete game on n voters, fed from the cache when a
/// valid one exists and recorded into it otherwise.
class SurveyRun {
 public:
  SurveyRun(int n, const Cache& cache) : n_(n), cache_(cache) {
    vk_survey* s = nullptr;
    check(vk_survey_new(n, &s), "creating survey");
    survey_.reset(s);
    if (cache_.enabled() && load()) return;
    if (cache_.enabled()) {
      record();
    } else {
      check(vk_survey_run(survey_.get(), nullptr, nullptr), "surveying complete games");
    }
  }

  vk_survey* get() const { return survey_.get(); }
  bool from_cache() const { return from_cache_; }

  GapPtr gap(vk_index index, vk_metric metric) {
    vk_gap* g = nullptr;
    if (cache_.enabled()) {
      check(vk_survey_gap(survey_.get(), index, metric, &SurveyRun::replay, this, &g), "computing gap");
    } else {
      check(vk_survey_gap(survey_.get(), index, metric, nullptr, nullptr, &g), "computing gap");
    }
    return GapPtr(g);
  }

 private:
  struct Feed {
    vk_survey* survey;
    const std::vector<bool>* flags;
    std::uint64_t next = 0;
  };

  static int feed(void* ctx, const std::uint32_t* masks, std::size_t count, int) {
    auto* f = static_cast<Feed*>(ctx);
    if (f->next >= f->flags->size()) return 1;
    const vk_status st = vk_survey_add(f->survey, masks, count, (*f->flags)[f->next++] ? 1 : 0);
    return st == VK_OK ? 0 : 1;
  }

  bool load() {
    const auto flags = read_flags(cache_.flags(n_), n_);
    if (!flags) return false;
    FileReader reader{std::ifstream(cache_.catalog(VK_CG, n_), std::ios::binary)};
    if (!reader.in) return false;
    Feed f{survey_.get(), &*flags};
    std::uint64_t count = 0;
    const vk_status st = vk_catalog_stream(&FileReader::read, &reader, VK_CG, n_, &SurveyRun::feed, &f, &count);
    if (st != VK_OK || count != flags->size() || f.next != count) {
      warn("cache for " + std::to_string(n_) + " voters is corrupt, rebuilding (" + vk_last_error() + ")");
      vk_survey* s = nullptr;
      check(vk_survey_new(n_, &s), "creating survey");
      survey_.reset(s);
      return false;
    }
    from_cache_ = true;
    return true;
  }

  struct Recorder {
    CatalogFile complete;
    CatalogFile weighted;
    std::vector<bool> flags;
  };

  static int note(void* ctx, const std::uint32_t* masks, std::size_t count, int weighted) {
    auto* r = static_cast<Recorder*>(ctx);
    r->complete.add(masks, count);
    if (weighted) r->weighted.add(masks, count);
    r->flags.push_back(weighted != 0);
    return 0;
  }

  void record() {
    Recorder r{CatalogFile(cache_.catalog(VK_CG, n_), VK_CG, n_), CatalogFile(cache_.catalog(VK_WG, n_), VK_WG, n_), {}};
    check(vk_survey_run(survey_.get(), &SurveyRun::note, &r), "surveying complete games");
    r.complete.commit();
    r.weighted.commit();
    write_flags(cache_.flags(n_), n_, r.flags);
  }

  static vk_status replay(void* ctx, vk_family_fn emit, void* emit_ctx) {
    auto* self = static_cast<SurveyRun*>(ctx);
    FileReader reader{std::ifstream(self->cache_.catalog(VK_CG, self->n_), std::ios::binary)};
    return vk_catalog_stream(&FileReader::read, &reader, VK_CG, self->n_, emit, emit_ctx, nullptr);
  }

  int n_;
  const Cache& cache_;
  SurveyPtr survey_;
  bool from_cache_ = false;
};

// Catalog of n <= 7 voters, cached as a whole.
CatalogPtr load_catalog(vk_class c, int n, const Cache& cache) {
  if (cache.enabled() && c != VK_SG) {
    const fs::path path = cache.catalog(c, n);
    if (fs::exists(path)) {
      const std::string bytes = read_file(path.string());
      vk_catalog* cat = nullptr;
      if (vk_catalog_deserialize(reinterpret_cast<const unsigned char*>(bytes.data()), bytes.size(), &cat) == VK_OK) {
        CatalogPtr out(cat);
        if (vk_catalog_voters(cat) == n && vk_catalog_class(cat) == c) return out;
      }
      warn("cache " + path.string() + " is corrupt, rebuilding");
    }
  }
  vk_catalog* cat = nullptr;
  check(vk_enumerate(c, n, &cat), "enumerating games");
  CatalogPtr out(cat);
  if (cache.enabled() && c != VK_SG) {
    unsigned char* data = nullptr;
    std::size_t size = 0;
    check(vk_catalog_serialize(cat, &data, &size), "serializing catalog");
    const fs::path path = cache.catalog(c, n);
    const fs::path tmp = path.string() + ".tmp";
    {
      std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
      file.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(size));
    }
    vk_buffer_free(data);
    fs::rename(tmp, path);
  }
  return out;
}

void require_enumerable(int n, vk_class c, const RunConfig& config) {
  if (n < 1) throw Failure{"voter count must be at least 1"};
  if (c == VK_SG && n > 5) throw Failure{"simple games are enumerated for at most 5 voters"};
  if (n >= 9) throw Failure{"enumeration beyond 8 voters is not supported"};
  if (n == 8 && !config.long_run) throw Failure{"8 voters takes hours; pass --long to run it"};
}

// ---------------------------------------------------------------------------
// Subcommands

Report cmd_index(const std::string& text, bool ssi, bool pbi, const std::string& engine) {
  if (!ssi && !pbi) ssi = true;
  vk_engine e = VK_ENGINE_AUTO;
  if (engine == "direct") e = VK_ENGINE_DIRECT;
  else if (engine == "dp") e = VK_ENGINE_DP;
  else if (engine != "auto") throw Failure{"unknown engine '" + engine + "'"};
  const GamePtr g = parse_game(text);
  Report r;
  r.columns = {"voter"};
  std::vector<vk_index> kinds;
  if (ssi) kinds.push_back(VK_SSI);
  if (pbi) kinds.push_back(VK_PBI);
  std::vector<std::vector<std::string>> fr, dec;
  json result{{"game", game_text(g.get())}, {"voters", vk_game_voters(g.get())}};
  for (vk_index k : kinds) {
    const VectorPtr v = power_of(g.get(), k, e);
    fr.push_back(fractions(v.get()));
    dec.push_back(decimals(v.get()));
    r.columns.push_back(index_name(k));
    r.columns.push_back(std::string(index_name(k)) + "_decimal");
    result[index_name(k)] = {{"fractions", fr.back()}, {"decimals", dec.back()}};
  }
  for (int i = 0; i < vk_game_voters(g.get()); ++i) {
    std::vector<std::string> row{std::to_string(i + 1)};
    for (std::size_t k = 0; k < kinds.size(); ++k) {
      row.push_back(fr[k][i]);
      row.push_back(dec[k][i]);
    }
    r.rows.push_back(row);
  }
  r.results.push_back(result);
  return r;
}

Report cmd_eval(const std::string& text, const std::vector<std::string>& coalitions) {
  const GamePtr g = parse_game(text);
  const int n = vk_game_voters(g.get());
  Report r;
  if (!coalitions.empty()) {
    r.columns = {"coalition", "winning"};
    json list = json::array();
    for (const auto& c : coalitions) {
      std::uint64_t mask = 0;
      std::stringstream in(c);
      std::string token;
      while (std::getline(in, token, ',')) {
        if (token.empty()) continue;
        int voter = 0;
        try {
          voter = std::stoi(token);
        } catch (const std::exception&) {
          throw Failure{"bad coalition '" + c + "'"};
        }
        if (voter < 1 || voter > n) throw Failure{"voter " + token + " outside 1.." + std::to_string(n)};
        mask |= std::uint64_t{1} << (voter - 1);
      }
      int winning = 0;
      check(vk_game_evaluate(g.get(), mask, &winning), "evaluating coalition");
      r.rows.push_back({"{" + c + "}", winning ? "1" : "0"});
      list.push_back({{"coalition", c}, {"winning", winning != 0}});
    }
    r.results.push_back({{"game", game_text(g.get())}, {"coalitions", list}});
    return r;
  }
  char* cert = nullptr;
  check(vk_game_weighted_certificate(g.get(), &cert), "testing weightedness");
  const std::string certificate = take(cert);
  char* ord = nullptr;
  check(vk_game_complete_order(g.get(), &ord), "testing completeness");
  const std::string order = take(ord);
  int nulls = 0;
  check(vk_game_null_voters(g.get(), &nulls), "counting null voters");
  std::string shift;
  if (!order.empty()) {
    bool identity = true;
    std::stringstream in(order);
    std::string token;
    for (int i = 1; std::getline(in, token, ','); ++i) identity = identity && std::stoi(token) == i;
    if (identity) {
      char* s = nullptr;
      check(vk_game_shift_minimal(g.get(), &s), "shift-minimal coalitions");
      shift = take(s);
    }
  }
  r.columns = {"property", "value"};
  r.rows = {{"game", game_text(g.get())},
            {"voters", std::to_string(n)},
            {"complete", order.empty() ? "no" : "yes"},
            {"desirability_order", order.empty() ? "-" : order},
            {"weighted", certificate.empty() ? "no" : "yes"},
            {"certificate", certificate.empty() ? "-" : certificate},
            {"shift_minimal", shift.empty() ? "-" : shift},
            {"null_voters", std::to_string(nulls)}};
  json result{{"game", game_text(g.get())}, {"voters", n}, {"complete", !order.empty()},
              {"weighted", !certificate.empty()}, {"null_voters", nulls}};
  result["desirability_order"] = order.empty() ? json(nullptr) : json(order);
  result["certificate"] = certificate.empty() ? json(nullptr) : json(certificate);
  result["shift_minimal"] = shift.empty() ? json(nullptr) : json(shift);
  r.results.push_back(result);
  return r;
}

Report cmd_enumerate(vk_class c, int n, bool count_only, const RunConfig& config, const Cache& cache) {
  require_enumerable(n, c, config);
  Report r;
  std::uint64_t count = 0;
  if (n == 8) {
    // Streamed: the catalog is never held in memory.
    SurveyRun run(8, cache);
    std::uint64_t games = 0;
    check(vk_survey_counts(run.get(), c, VK_SSI, &games, nullptr), "counting games");
    count = games;
    if (!count_only) r.notes.push_back("8-voter catalogs are streamed to the cache; listing skipped");
  } else {
    const CatalogPtr cat = load_catalog(c, n, cache);
    count = vk_catalog_size(cat.get());
    if (!count_only) {
      r.columns = {"index", "class", "n", "game", "certificate"};
      for (std::uint64_t i = 0; i < count; ++i) {
        vk_game* g = nullptr;
        check(vk_catalog_game(cat.get(), i, &g), "catalog entry");
        const GamePtr game(g);
        std::string certificate = "-";
        if (c == VK_WG) {
          char* s = nullptr;
          check(vk_catalog_certificate(cat.get(), i, &s), "certificate");
          certificate = take(s);
        }
        const std::string text = game_text(game.get());
        r.rows.push_back({std::to_string(i), class_name(c), std::to_string(n), text, certificate});
        json entry{{"index", i}, {"game", text}};
        if (c == VK_WG) entry["certificate"] = certificate;
        r.results.push_back(entry);
      }
    }
  }
  const auto expected = certified_count(c, n, "");
  r.mismatch = expected && *expected != count;
  const std::string summary = std::string(class_name(c)) + "(" + std::to_string(n) + ") = " + std::to_string(count) +
                              (expected ? (r.mismatch ? " MISMATCH, certified " + std::to_string(*expected) : " (certified)") : "");
  if (count_only) {
    r.columns = {"class", "n", "games", "certified"};
    r.rows.push_back({class_name(c), std::to_string(n), std::to_string(count), expected ? std::to_string(*expected) : "-"});
    r.results.push_back({{"class", class_name(c)}, {"n", n}, {"games", count},
                         {"certified", expected ? json(*expected) : json(nullptr)}});
  } else {
    r.notes.push_back(summary);
  }
  return r;
}

Report cmd_tables(const std::vector<vk_class>& classes, int lo, int hi, const std::vector<vk_index>& kinds,
                  const RunConfig& config, const Cache& cache) {
  if (lo > hi) throw Failure{"empty voter range"};
  for (vk_class c : classes) {
    for (int n = lo; n <= hi; ++n) require_enumerable(n, c, config);
  }
  Report r;
  r.columns = {"n", "class", "index", "games", "distinct", "certified", "status"};
  auto add_row = [&](int n, vk_class c, vk_index k, std::uint64_t games, std::uint64_t distinct) {
    const auto expected = certified_count(c, n, index_name(k));
    const bool bad = expected && *expected != distinct;
    r.mismatch = r.mismatch || bad;
    const std::string status = expected ? (bad ? "MISMATCH" : "ok") : "-";
    r.rows.push_back({std::to_string(n), class_name(c), index_name(k), std::to_string(games), std::to_string(distinct),
                      expected ? std::to_string(*expected) : "-", status});
    r.results.push_back({{"n", n}, {"class", class_name(c)}, {"index", index_name(k)}, {"games", games},
                         {"distinct", distinct}, {"certified", expected ? json(*expected) : json(nullptr)},
                         {"match", !bad}});
  };
  for (int n = lo; n <= hi; ++n) {
    std::optional<SurveyRun> run;
    for (vk_class c : classes) {
      if (c == VK_SG) {
        const CatalogPtr cat = load_catalog(c, n, cache);
        for (vk_index k : kinds) {
          std::uint64_t distinct = 0;
          check(vk_catalog_count_distinct(cat.get(), k, &distinct), "counting vectors");
          add_row(n, c, k, vk_catalog_size(cat.get()), distinct);
        }
        continue;
      }
      if (!run) run.emplace(n, cache);
      for (vk_index k : kinds) {
        std::uint64_t games = 0, distinct = 0;
        check(vk_survey_counts(run->get(), c, k, &games, &distinct), "counting vectors");
        add_row(n, c, k, games, distinct);
      }
    }
  }
  return r;
}

json vector_json(const vk_vector* v) { return {{"fractions", fractions(v)}, {"decimals", decimals(v)}}; }

Report cmd_omega(int n, vk_index index, vk_metric metric, std::size_t show, const RunConfig& config,
                 const Cache& cache) {
  require_enumerable(n, VK_CG, config);
  SurveyRun run(n, cache);
  const GapPtr gap = run.gap(index, metric);
  char* f = nullptr;
  check(vk_gap_omega(gap.get(), &f), "gap value");
  const std::string omega = take(f);
  const std::uint64_t count = vk_gap_attaining_count(gap.get());
  const std::uint64_t kept = vk_gap_attaining_kept(gap.get());
  std::vector<std::string> attaining;
  for (std::uint64_t i = 0; i < kept; ++i) {
    char* s = nullptr;
    check(vk_gap_attaining(gap.get(), i, &s), "attaining game");
    attaining.push_back(take(s));
  }
  char* w = nullptr;
  check(vk_gap_nearest(gap.get(), &w), "nearest weighted game");
  const std::string nearest = take(w);
  vk_vector* cv = nullptr;
  vk_vector* wv = nullptr;
  check(vk_gap_vectors(gap.get(), &cv, &wv), "gap vectors");
  const VectorPtr complete_vector(cv), weighted_vector(wv);

  Report r;
  r.columns = {"field", "value"};
  r.rows = {{"n", std::to_string(n)},
            {"index", index_name(index)},
            {"metric", metric_name(metric)},
            {"omega", decimal(omega)},
            {"omega_fraction", omega},
            {"attaining_games", std::to_string(count)},
            {"complete_game", attaining.front()},
            {"complete_vector", join(fractions(complete_vector.get()), " ")},
            {"nearest_weighted", nearest},
            {"weighted_vector", join(fractions(weighted_vector.get()), " ")}};
  for (std::size_t i = 1; i < attaining.size() && i < show; ++i) r.rows.push_back({"also_attaining", attaining[i]});
  json result{{"n", n},
              {"index", index_name(index)},
              {"metric", metric_name(metric)},
              {"omega", decimal(omega)},
              {"omega_fraction", omega},
              {"attaining_count", count},
              {"attaining", attaining},
              {"complete_game", attaining.front()},
              {"complete_vector", vector_json(complete_vector.get())},
              {"nearest_weighted", nearest},
              {"weighted_vector", vector_json(weighted_vector.get())}};
  r.results.push_back(result);
  return r;
}

json inverse_json(const vk_inverse* result, std::vector<std::string>* row) {
  char* s = nullptr;
  check(vk_inverse_game(result, &s), "inverse game");
  const std::string game = take(s);
  char* d = nullptr;
  check(vk_inverse_distance(result, &d), "inverse distance");
  const std::string distance = take(d);
  vk_vector* v = nullptr;
  check(vk_inverse_vector(result, &v), "inverse vector");
  const VectorPtr vector(v);
  const std::string mode = vk_inverse_mode(result) == VK_EXACT_MIN ? "EXACT_MIN" : "HEURISTIC_UPPER_BOUND";
  if (row) *row = {game, decimal(distance), distance, mode};
  return {{"game", game},
          {"distance", decimal(distance)},
          {"distance_fraction", distance},
          {"mode", mode},
          {"vector", vector_json(vector.get())},
          {"evaluations", vk_inverse_evaluations(result)},
          {"seed", vk_inverse_seed(result)}};
}

struct InverseFlags {
  std::string target;
  std::string base;
  std::optional<int> n;
  std::optional<int> pads;
  std::string index = "ssi";
  std::string metric = "l1";
  std::uint64_t budget = 0;
  std::int64_t scale = 0;
};

vk_heuristic_options heuristic_options(const InverseFlags& flags, const RunConfig& config) {
  vk_heuristic_options o;
  vk_heuristic_defaults(&o);
  if (flags.budget) o.budget = flags.budget;
  if (flags.scale) o.scale = flags.scale;
  o.seed = config.seed;
  return o;
}

// Exact when a weighted catalog exists for n, heuristic otherwise.
InversePtr solve(const vk_target* t, vk_metric metric, const InverseFlags& flags, const RunConfig& config,
                 const Cache& cache) {
  const int n = vk_target_voters(t);
  vk_inverse* out = nullptr;
  if (n <= 7) {
    const CatalogPtr cat = load_catalog(VK_WG, n, cache);
    check(vk_inverse_exact(t, metric, cat.get(), &out), "exact inverse search");
  } else if (n == 8 && config.long_run) {
    SurveyRun run(8, cache);
    check(vk_inverse_exact_survey(t, metric, run.get(), &out), "exact inverse search");
  } else {
    const vk_heuristic_options o = heuristic_options(flags, config);
    check(vk_inverse_heuristic(t, metric, &o, &out), "heuristic inverse search");
  }
  return InversePtr(out);
}

Report cmd_inverse(const InverseFlags& flags, const RunConfig& config, const Cache& cache) {
  const vk_index index = parse_index(flags.index);
  const vk_metric metric = parse_metric(flags.metric);
  Report r;
  r.columns = {"base", "n", "game", "distance", "distance_fraction", "mode"};

  if (flags.target == "padded") {
    // Bases: the given game, or every complete game attaining the 7-voter gap.
    std::vector<std::string> bases;
    if (!flags.base.empty()) {
      bases.push_back(flags.base);
    } else {
      SurveyRun run(7, cache);
      const GapPtr gap = run.gap(index, metric);
      for (std::uint64_t i = 0; i < vk_gap_attaining_kept(gap.get()); ++i) {
        char* s = nullptr;
        check(vk_gap_attaining(gap.get(), i, &s), "attaining game");
        bases.push_back(take(s));
      }
    }
    std::optional<SurveyRun> survey8;
    CatalogPtr weighted;
    json per_base = json::array();
    double worst = -1.0;
    std::string worst_decimal;
    for (const auto& text : bases) {
      const GamePtr base = parse_game(text);
      const int base_n = vk_game_voters(base.get());
      const int pads = flags.pads ? *flags.pads : (flags.n ? *flags.n - base_n : 1);
      if (pads < 0) throw Failure{"target voter count is below the base game's"};
      const int n = base_n + pads;
      if (n == 8 && config.long_run && !survey8) survey8.emplace(8, cache);
      if (n <= 7 && !weighted) weighted = load_catalog(VK_WG, n, cache);
      const vk_heuristic_options o = heuristic_options(flags, config);
      vk_inverse* out = nullptr;
      check(vk_inverse_padded(base.get(), pads, index, metric, &o, n <= 7 ? weighted.get() : nullptr,
                              survey8 ? survey8->get() : nullptr, &out),
            "padded inverse search");
      const InversePtr result(out);
      std::vector<std::string> row;
      json entry = inverse_json(result.get(), &row);
      entry["base"] = text;
      entry["n"] = n;
      r.rows.push_back({text, std::to_string(n), row[0], row[1], row[2], row[3]});
      per_base.push_back(entry);
      if (std::stod(row[1]) > worst) {
        worst = std::stod(row[1]);
        worst_decimal = row[1];
      }
    }
    r.notes.push_back("largest distance over bases: " + worst_decimal +
                      " (only EXACT_MIN rows are lower bounds on the worst case)");
    r.results = per_base;
    return r;
  }

  vk_target* t = nullptr;
  std::string label;
  if (flags.target == "beta") {
    if (!flags.n) throw Failure{"--target beta needs --n"};
    check(vk_target_beta(*flags.n, index, &t), "beta target");
    label = "beta(" + std::to_string(*flags.n) + ")";
  } else if (!flags.target.empty()) {
    check(vk_target_parse(read_file(flags.target).c_str(), &t), "parsing target " + flags.target);
    label = flags.target;
  } else {
    throw Failure{"--target is required (a file, beta, or padded)"};
  }
  const TargetPtr target(t);
  if (flags.n && *flags.n != vk_target_voters(t)) {
    throw Failure{"target has " + std::to_string(vk_target_voters(t)) + " voters, --n says " + std::to_string(*flags.n)};
  }
  if (flags.target != "beta" && vk_target_index(t) != index) {
    throw Failure{std::string("target file is for ") + index_name(vk_target_index(t)) + ", --index says " + flags.index};
  }
  const InversePtr result = solve(t, metric, flags, config, cache);
  std::vector<std::string> row;
  json entry = inverse_json(result.get(), &row);
  entry["target"] = label;
  entry["n"] = vk_target_voters(t);
  r.rows.push_back({label, std::to_string(vk_target_voters(t)), row[0], row[1], row[2], row[3]});
  r.results.push_back(entry);
  return r;
}

Report cmd_eu(const std::string& populations, std::int64_t resolution, vk_index index, vk_metric metric,
              const InverseFlags& flags, const RunConfig& config) {
  vk_game* g = nullptr;
  check(vk_council_game(read_file(populations).c_str(), resolution, &g), "council rule");
  const GamePtr council(g);
  const VectorPtr v = power_of(council.get(), index, VK_ENGINE_DP);
  vk_target* t = nullptr;
  check(vk_target_from_vector(v.get(), &t), "council target");
  const TargetPtr target(t);
  const vk_heuristic_options o = heuristic_options(flags, config);
  vk_inverse* out = nullptr;
  check(vk_inverse_heuristic(t, metric, &o, &out), "heuristic inverse search");
  const InversePtr result(out);
  std::vector<std::string> row;
  json entry = inverse_json(result.get(), &row);
  const double d = std::stod(row[1]);
  Report r;
  r.columns = {"field", "value"};
  r.rows = {{"members", std::to_string(vk_game_voters(council.get()))},
            {"council_power", join(decimals(v.get()), " ")},
            {"weighted_game", row[0]},
            {"distance", row[1]},
            {"mode", row[3]},
            {"below_1e-5", d < 1e-5 ? "yes" : "no"}};
  entry["members"] = vk_game_voters(council.get());
  entry["council_vector"] = vector_json(v.get());
  entry["below_1e-5"] = d < 1e-5;
  r.results.push_back(entry);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"votekit: exact voting power for weighted and complete simple games"};
  app.require_subcommand(1);
  RunConfig config;
  app.add_option("--format", config.format, "Output format")->check(CLI::IsMember({"table", "csv", "json"}));
  app.add_option("--cache", config.cache, "Cache directory (default: $VOTEKIT_CACHE, else none)");
  app.add_option("--threads", config.threads, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag("--long", config.long_run, "Allow 8-voter runs (hours)");
  app.add_option("--seed", config.seed, "Seed for randomized searches");

  std::string game_text;
  bool ssi = false, pbi = false;
  std::string engine = "auto";
  auto* index_cmd = app.add_subcommand("index", "Power distribution of a game");
  index_cmd->add_option("game", game_text, "Game text, e.g. \"[3;3,2,1,1]\"")->required();
  index_cmd->add_flag("--ssi", ssi, "Shapley-Shubik index");
  index_cmd->add_flag("--pbi", pbi, "Penrose-Banzhaf index");
  index_cmd->add_option("--engine", engine, "auto, direct or dp");

  std::vector<std::string> coalitions;
  auto* eval_cmd = app.add_subcommand("eval", "Structural properties of a game, or coalition outcomes");
  eval_cmd->add_option("game", game_text, "Game text")->required();
  eval_cmd->add_option("--coalition", coalitions, "Comma-separated voters, e.g. 1,3");

  std::string class_text = "cg";
  int enum_n = 0;
  bool count_only = false;
  auto* enum_cmd = app.add_subcommand("enumerate", "List the games of one class");
  enum_cmd->add_option("--class", class_text, "wg, cg or sg")->check(CLI::IsMember({"wg", "cg", "sg"}));
  enum_cmd->add_option("--n", enum_n, "Voters")->required();
  enum_cmd->add_flag("--count", count_only, "Print the count only");

  std::string tables_class = "both", range = "3..7", tables_index = "both";
  auto* tables_cmd = app.add_subcommand("tables", "Distinct power-vector counts");
  tables_cmd->add_option("--class", tables_class, "wg, cg, sg or both")->check(CLI::IsMember({"wg", "cg", "sg", "both"}));
  tables_cmd->add_option("--n", range, "Voters, N or A..B");
  tables_cmd->add_option("--index", tables_index, "ssi, pbi or both")->check(CLI::IsMember({"ssi", "pbi", "both"}));

  int omega_n = 0;
  std::string omega_index = "ssi", omega_metric = "l1";
  std::size_t show = 10;
  auto* omega_cmd = app.add_subcommand("omega", "Worst-case distance to the weighted games");
  omega_cmd->add_option("--n", omega_n, "Voters")->required();
  omega_cmd->add_option("--index", omega_index, "ssi or pbi")->check(CLI::IsMember({"ssi", "pbi"}));
  omega_cmd->add_option("--metric", omega_metric, "l1 or linf")->check(CLI::IsMember({"l1", "linf"}));
  omega_cmd->add_option("--show", show, "Attaining games listed in table output");

  InverseFlags inverse;
  int inverse_n = 0, inverse_pads = -1;
  auto* inverse_cmd = app.add_subcommand("inverse", "Weighted game closest to a target distribution");
  inverse_cmd->add_option("--target", inverse.target, "Target file, beta, or padded")->required();
  inverse_cmd->add_option("--n", inverse_n, "Voters");
  inverse_cmd->add_option("--base", inverse.base, "Base game for --target padded");
  inverse_cmd->add_option("--pads", inverse_pads, "Null voters added to the base");
  inverse_cmd->add_option("--index", inverse.index, "ssi or pbi")->check(CLI::IsMember({"ssi", "pbi"}));
  inverse_cmd->add_option("--metric", inverse.metric, "l1 or linf")->check(CLI::IsMember({"l1", "linf"}));
  inverse_cmd->add_option("--budget", inverse.budget, "Heuristic evaluations");
  inverse_cmd->add_option("--scale", inverse.scale, "Heuristic starting weight sum");

  std::string populations;
  std::int64_t resolution = 1000;
  auto* eu_cmd = app.add_subcommand("eu", "Council rule and its weighted approximation");
  eu_cmd->add_option("--populations", populations, "File of name,population lines")->required();
  eu_cmd->add_option("--resolution", resolution, "Population share units (0 keeps raw counts)");
  eu_cmd->add_option("--index", inverse.index, "ssi or pbi")->check(CLI::IsMember({"ssi", "pbi"}));
  eu_cmd->add_option("--metric", inverse.metric, "l1 or linf")->check(CLI::IsMember({"l1", "linf"}));
  eu_cmd->add_option("--budget", inverse.budget, "Heuristic evaluations");
  eu_cmd->add_option("--scale", inverse.scale, "Heuristic starting weight sum");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  if (config.cache.empty()) {
    if (const char* env = std::getenv("VOTEKIT_CACHE")) config.cache = env;
  }
  json config_json{{"format", config.format}, {"threads", config.threads}, {"long", config.long_run},
                   {"seed", config.seed}, {"cache", config.cache.empty() ? json(nullptr) : json(config.cache)}};

  const auto started = std::chrono::steady_clock::now();
  try {
    const Cache cache(config.cache);
    Report report;
    if (*index_cmd) {
      config_json["subcommand"] = "index";
      config_json["game"] = game_text;
      report = cmd_index(game_text, ssi, pbi, engine);
    } else if (*eval_cmd) {
      config_json["subcommand"] = "eval";
      config_json["game"] = game_text;
      report = cmd_eval(game_text, coalitions);
    } else if (*enum_cmd) {
      config_json["subcommand"] = "enumerate";
      config_json["class"] = class_text;
      config_json["n"] = enum_n;
      const vk_class c = class_text == "wg" ? VK_WG : class_text == "cg" ? VK_CG : VK_SG;
      report = cmd_enumerate(c, enum_n, count_only, config, cache);
    } else if (*tables_cmd) {
      const auto [lo, hi] = parse_range(range);
      config_json["subcommand"] = "tables";
      config_json["class"] = tables_class;
      config_json["n"] = range;
      config_json["index"] = tables_index;
      std::vector<vk_class> classes;
      if (tables_class == "both") classes = {VK_WG, VK_CG};
      else classes = {tables_class == "wg" ? VK_WG : tables_class == "cg" ? VK_CG : VK_SG};
      report = cmd_tables(classes, lo, hi, parse_indices(tables_index), config, cache);
    } else if (*omega_cmd) {
      config_json["subcommand"] = "omega";
      config_json["n"] = omega_n;
      config_json["index"] = omega_index;
      config_json["metric"] = omega_metric;
      report = cmd_omega(omega_n, parse_index(omega_index), parse_metric(omega_metric), show, config, cache);
    } else if (*inverse_cmd) {
      if (inverse_n > 0) inverse.n = inverse_n;
      if (inverse_pads >= 0) inverse.pads = inverse_pads;
      if (inverse.n && *inverse.n >= 65) throw Failure{"at most 64 voters"};
      config_json["subcommand"] = "inverse";
      config_json["target"] = inverse.target;
      config_json["n"] = inverse.n ? json(*inverse.n) : json(nullptr);
      config_json["index"] = inverse.index;
      config_json["metric"] = inverse.metric;
      config_json["budget"] = inverse.budget ? json(inverse.budget) : json(nullptr);
      report = cmd_inverse(inverse, config, cache);
    } else if (*eu_cmd) {
      config_json["subcommand"] = "eu";
      config_json["populations"] = populations;
      config_json["resolution"] = resolution;
      config_json["index"] = inverse.index;
      config_json["metric"] = inverse.metric;
      report = cmd_eu(populations, resolution, parse_index(inverse.index), parse_metric(inverse.metric), inverse,
                      config);
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    emit(report, config, config_json, seconds);
    if (report.mismatch) {
      warn("a count differs from its certified value");
      return kExitMismatch;
    }
    return 0;
  } catch (const Failure& f) {
    warn(f.message);
    return kExitUsage;
  } catch (const std::exception& e) {
    warn(e.what());
    return kExitUsage;
  }
}
