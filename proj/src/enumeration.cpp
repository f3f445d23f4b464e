#include "votekit/enumeration.hpp"

#include "votekit/error.hpp"

#include <algorithm>
#include <bit>
#include <cstring>
#include <istream>
#include <map>
#include <ostream>
#include <set>

namespace votekit {

std::string_view to_string(GameClass c) {
  switch (c) {
    case GameClass::kWeighted:
      return "wg";
    case GameClass::kComplete:
      return "cg";
    case GameClass::kSimple:
      return "sg";
  }
  return "?";
}

GameClass parse_game_class(std::string_view text) {
  if (text == "wg") return GameClass::kWeighted;
  if (text == "cg") return GameClass::kComplete;
  if (text == "sg") return GameClass::kSimple;
  throw Error(Errc::kInvalidArgument, "unknown game class '" + std::string(text) + "' (expected wg, cg or sg)");
}

ExplicitGame GameView::to_explicit() const {
  return ExplicitGame::unchecked(n, std::vector<std::uint64_t>(table.begin(), table.end()));
}

namespace {

// A set of coalitions of at most 8 voters.
using Mask = std::array<std::uint64_t, 4>;

void set_bit(Mask& m, unsigned i) { m[i >> 6] |= std::uint64_t{1} << (i & 63); }

Mask operator&(const Mask& a, const Mask& b) {
  return {a[0] & b[0], a[1] & b[1], a[2] & b[2], a[3] & b[3]};
}
Mask operator|(const Mask& a, const Mask& b) {
  return {a[0] | b[0], a[1] | b[1], a[2] | b[2], a[3] | b[3]};
}

void check_range(int n, int max_n) {
  if (n < 1 || n > max_n) {
    throw Error(Errc::kInvalidArgument,
                "voter count " + std::to_string(n) + " outside 1.." + std::to_string(max_n));
  }
}

// Antichain search over the nonempty coalitions of a poset given by `leq`.
// Each nonempty antichain is reported once, together with its up-closure.
class AntichainWalker {
 public:
  template <class Leq>
  AntichainWalker(int n, Leq leq) : n_(n), size_(1U << n), up_(size_), later_(size_) {
    for (unsigned x = 1; x < size_; ++x) {
      for (unsigned y = 1; y < size_; ++y) {
        const bool above = leq(Coalition(x), Coalition(y));
        const bool below = leq(Coalition(y), Coalition(x));
        if (above) set_bit(up_[x], y);
        if (y > x && !above && !below) set_bit(later_[x], y);
      }
    }
    words_ = table_words(n);
  }

  void run(const GameVisitor& visit) {
    Mask all{};
    for (unsigned x = 1; x < size_; ++x) set_bit(all, x);
    family_.clear();
    visit_ = &visit;
    descend(all, Mask{});
  }

 private:
  void descend(const Mask& candidates, const Mask& table) {
    for (int w = 0; w < 4; ++w) {
      for (std::uint64_t bits = candidates[w]; bits != 0; bits &= bits - 1) {
        const unsigned x = static_cast<unsigned>(w * 64 + std::countr_zero(bits));
        const Mask next_table = table | up_[x];
        family_.push_back(Coalition(x));
        (*visit_)(GameView{n_, family_, std::span<const std::uint64_t>(next_table.data(), words_)});
        descend(candidates & later_[x], next_table);
        family_.pop_back();
      }
    }
  }

  int n_;
  unsigned size_;
  std::size_t words_ = 1;
  std::vector<Mask> up_;     // elements at or above x
  std::vector<Mask> later_;  // elements after x that are incomparable to x
  std::vector<Coalition> family_;
  const GameVisitor* visit_ = nullptr;
};

}  // namespace

void for_each_complete_game(int n, const GameVisitor& visit) {
  check_range(n, kMaxEnumerationVoters);
  AntichainWalker walker(n, [n](Coalition a, Coalition b) { return shift_dominates(b, a, n); });
  walker.run(visit);
}

void for_each_simple_game(int n, const GameVisitor& visit) {
  check_range(n, 5);
  AntichainWalker walker(n, [](Coalition a, Coalition b) { return a.subset_of(b); });
  walker.run(visit);
}

GameCatalog::GameCatalog(int n, GameClass game_class) : n_(n), class_(game_class) {
  check_range(n, kMaxEnumerationVoters);
}

void GameCatalog::add(std::span<const Coalition> family) {
  if (!certificates_.empty()) {
    throw Error(Errc::kInvalidArgument, "catalog stores certificates for every game");
  }
  coalitions_.insert(coalitions_.end(), family.begin(), family.end());
  offsets_.push_back(coalitions_.size());
}

void GameCatalog::add(std::span<const Coalition> family, const IntegerRepresentation& certificate) {
  if (certificates_.empty() && size() > 0) {
    throw Error(Errc::kInvalidArgument, "catalog was started without certificates");
  }
  coalitions_.insert(coalitions_.end(), family.begin(), family.end());
  offsets_.push_back(coalitions_.size());
  certificates_.push_back(certificate.quota);
  certificates_.insert(certificates_.end(), certificate.weights.begin(), certificate.weights.end());
}

std::span<const Coalition> GameCatalog::family(std::size_t i) const {
  return std::span<const Coalition>(coalitions_).subspan(offsets_[i], offsets_[i + 1] - offsets_[i]);
}

Game GameCatalog::game(std::size_t i) const {
  const auto f = family(i);
  if (class_ == GameClass::kSimple) return ExplicitGame::from_minimal_winning(n_, f);
  return CompleteGame(n_, std::vector<Coalition>(f.begin(), f.end()));
}

ExplicitGame GameCatalog::table(std::size_t i) const { return to_explicit(game(i)); }

IntegerRepresentation GameCatalog::certificate(std::size_t i) const {
  if (!certificates_.empty()) {
    const std::size_t stride = static_cast<std::size_t>(n_) + 1;
    IntegerRepresentation rep;
    rep.quota = certificates_[i * stride];
    rep.weights.assign(certificates_.begin() + static_cast<std::ptrdiff_t>(i * stride + 1),
                       certificates_.begin() + static_cast<std::ptrdiff_t>((i + 1) * stride));
    return rep;
  }
  const ExplicitGame g = table(i);
  auto rep = class_ == GameClass::kSimple ? weighted_certificate(g) : weighted_certificate_sorted(g);
  if (!rep) throw Error(Errc::kInvalidArgument, "catalog entry " + std::to_string(i) + " is not weighted");
  return *rep;
}

void GameCatalog::attach(IndexKind kind, std::vector<PowerVector> vectors) {
  if (vectors.size() != size()) {
    throw Error(Errc::kInvalidArgument, "expected one power vector per catalog entry");
  }
  for (const auto& v : vectors) {
    if (v.kind() != kind || v.size() != n_) {
      throw Error(Errc::kInvalidArgument, "power vector does not match the catalog");
    }
  }
  (kind == IndexKind::kShapleyShubik ? ssi_ : pbi_) = std::move(vectors);
}

const std::vector<PowerVector>* GameCatalog::vectors(IndexKind kind) const {
  const auto& slot = kind == IndexKind::kShapleyShubik ? ssi_ : pbi_;
  return slot ? &*slot : nullptr;
}

GameCatalog enumerate_complete(int n) {
  GameCatalog catalog(n, GameClass::kComplete);
  for_each_complete_game(n, [&](const GameView& v) { catalog.add(v.family); });
  return catalog;
}

GameCatalog enumerate_weighted(int n) {
  GameCatalog catalog(n, GameClass::kWeighted);
  for_each_complete_game(n, [&](const GameView& v) {
    const ExplicitGame g = v.to_explicit();
    auto rep = weighted_certificate_sorted(g);
    if (!rep) return;
    if (n <= 4) rep = minimal_representation(g);
    catalog.add(v.family, *rep);
  });
  return catalog;
}

GameCatalog enumerate_simple(int n) {
  GameCatalog catalog(n, GameClass::kSimple);
  std::set<std::vector<std::uint64_t>> seen;
  for_each_simple_game(n, [&](const GameView& v) {
    const ExplicitGame c = canonical(v.to_explicit());
    std::vector<std::uint64_t> key(c.words().begin(), c.words().end());
    if (!seen.insert(std::move(key)).second) return;
    catalog.add(minimal_winning(c));
  });
  return catalog;
}

std::vector<PowerVector> power_vectors(const GameCatalog& catalog, IndexKind kind) {
  if (const auto* attached = catalog.vectors(kind)) return *attached;
  std::vector<PowerVector> out;
  out.reserve(catalog.size());
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const SwingProfile p = swing_profile(catalog.table(i));
    out.push_back(kind == IndexKind::kShapleyShubik ? ssi_from_profile(p) : pbi_from_profile(p));
  }
  return out;
}

void attach_power_vectors(GameCatalog& catalog, IndexKind kind) {
  catalog.attach(kind, power_vectors(catalog, kind));
}

namespace {

constexpr char kCatalogMagic[6] = {'V', 'K', 'C', 'A', 'T', '1'};
constexpr char kVectorMagic[6] = {'V', 'K', 'V', 'E', 'C', '1'};

template <class T>
void put(std::ostream& out, T value) {
  unsigned char bytes[sizeof(T)];
  using U = std::make_unsigned_t<T>;
  U u = static_cast<U>(value);
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<unsigned char>(u & 0xFFU);
    u = static_cast<U>(u >> 8);
  }
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

template <class T>
T get(std::istream& in) {
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) {
    throw Error(Errc::kCorrupt, "cache file is truncated");
  }
  using U = std::make_unsigned_t<T>;
  U u = 0;
  for (std::size_t i = sizeof(T); i-- > 0;) u = static_cast<U>((u << 8) | bytes[i]);
  return static_cast<T>(u);
}

void expect_magic(std::istream& in, const char (&magic)[6]) {
  char got[6];
  if (!in.read(got, 6) || std::memcmp(got, magic, 6) != 0) {
    throw Error(Errc::kCorrupt, "cache file has a bad magic header");
  }
}

struct CatalogHeader {
  GameClass game_class;
  int n;
  std::uint64_t count;
};

CatalogHeader read_header(std::istream& in) {
  expect_magic(in, kCatalogMagic);
  const auto tag = get<std::uint8_t>(in);
  const auto n = get<std::uint8_t>(in);
  const auto count = get<std::uint64_t>(in);
  if (tag < 1 || tag > 3) throw Error(Errc::kCorrupt, "cache file has an unknown class tag");
  if (n < 1 || n > kMaxEnumerationVoters) throw Error(Errc::kCorrupt, "cache file has a bad voter count");
  return {static_cast<GameClass>(tag), n, count};
}

void read_family(std::istream& in, int n, std::vector<Coalition>& family) {
  const auto k = get<std::uint16_t>(in);
  if (k == 0) throw Error(Errc::kCorrupt, "cache entry has an empty family");
  family.clear();
  const std::uint32_t limit = std::uint32_t{1} << n;
  for (std::uint16_t j = 0; j < k; ++j) {
    const auto mask = get<std::uint32_t>(in);
    if (mask == 0 || mask >= limit) throw Error(Errc::kCorrupt, "cache entry has an out-of-range coalition");
    family.emplace_back(mask);
  }
}

void write_family(std::ostream& out, std::span<const Coalition> family) {
  put<std::uint16_t>(out, static_cast<std::uint16_t>(family.size()));
  for (Coalition c : family) put<std::uint32_t>(out, static_cast<std::uint32_t>(c.bits()));
}

}  // namespace

void write_catalog(std::ostream& out, const GameCatalog& catalog) {
  out.write(kCatalogMagic, 6);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(catalog.game_class()));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(catalog.voters()));
  put<std::uint64_t>(out, catalog.size());
  for (std::size_t i = 0; i < catalog.size(); ++i) write_family(out, catalog.family(i));
}

GameCatalog read_catalog(std::istream& in) {
  const CatalogHeader h = read_header(in);
  GameCatalog catalog(h.n, h.game_class);
  std::vector<Coalition> family;
  for (std::uint64_t i = 0; i < h.count; ++i) {
    read_family(in, h.n, family);
    catalog.add(family);
  }
  if (in.peek() != std::char_traits<char>::eof()) throw Error(Errc::kCorrupt, "cache file has trailing bytes");
  return catalog;
}

std::uint64_t stream_catalog(std::istream& in, int expected_n, GameClass expected_class,
                             const GameVisitor& visit) {
  const CatalogHeader h = read_header(in);
  if (h.n != expected_n || h.game_class != expected_class) {
    throw Error(Errc::kCorrupt, "cache file describes a different catalog");
  }
  std::vector<Coalition> family;
  for (std::uint64_t i = 0; i < h.count; ++i) {
    read_family(in, h.n, family);
    const ExplicitGame g = h.game_class == GameClass::kSimple
                               ? ExplicitGame::from_minimal_winning(h.n, family)
                               : to_explicit(CompleteGame(h.n, family));
    visit(GameView{h.n, family, g.words()});
  }
  return h.count;
}

void write_vectors(std::ostream& out, int n, IndexKind kind, std::span<const PowerVector> vectors) {
  out.write(kVectorMagic, 6);
  put<std::uint8_t>(out, kind == IndexKind::kShapleyShubik ? 1 : 2);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(n));
  put<std::uint64_t>(out, vectors.size());
  for (const auto& v : vectors) {
    if (v.size() != n || v.kind() != kind) throw Error(Errc::kInvalidArgument, "vector does not match block");
    for (const auto& x : v.numerators()) put<std::int64_t>(out, to_int64(x));
    put<std::uint64_t>(out, static_cast<std::uint64_t>(to_int64(v.denominator())));
  }
}

std::vector<PowerVector> read_vectors(std::istream& in, int n, IndexKind kind) {
  expect_magic(in, kVectorMagic);
  const auto tag = get<std::uint8_t>(in);
  const auto got_n = get<std::uint8_t>(in);
  const auto count = get<std::uint64_t>(in);
  if (tag != (kind == IndexKind::kShapleyShubik ? 1 : 2) || got_n != n) {
    throw Error(Errc::kCorrupt, "vector block describes a different index or voter count");
  }
  std::vector<PowerVector> out;
  out.reserve(count);
  std::vector<BigInt> num(n);
  for (std::uint64_t i = 0; i < count; ++i) {
    BigInt sum = 0;
    for (int j = 0; j < n; ++j) {
      const auto x = get<std::int64_t>(in);
      if (x < 0) throw Error(Errc::kCorrupt, "vector block has a negative entry");
      num[j] = x;
      sum += num[j];
    }
    const auto den = get<std::uint64_t>(in);
    if (den == 0 || sum != den) throw Error(Errc::kCorrupt, "vector block entry does not sum to one");
    out.emplace_back(kind, num, BigInt(den));
  }
  if (in.peek() != std::char_traits<char>::eof()) throw Error(Errc::kCorrupt, "cache file has trailing bytes");
  return out;
}

CatalogWriter::CatalogWriter(std::ostream& out, int n, GameClass game_class) : out_(out) {
  out_.write(kCatalogMagic, 6);
  put<std::uint8_t>(out_, static_cast<std::uint8_t>(game_class));
  put<std::uint8_t>(out_, static_cast<std::uint8_t>(n));
  count_pos_ = static_cast<std::streamoff>(out_.tellp());
  put<std::uint64_t>(out_, 0);
}

void CatalogWriter::add(std::span<const Coalition> family) {
  write_family(out_, family);
  ++count_;
}

std::uint64_t CatalogWriter::finish() {
  const auto end = out_.tellp();
  out_.seekp(count_pos_);
  put<std::uint64_t>(out_, count_);
  out_.seekp(end);
  out_.flush();
  if (!out_) throw Error(Errc::kCorrupt, "failed to write catalog stream");
  return count_;
}

}  // namespace votekit
