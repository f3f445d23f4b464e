#include "votekit/geometry.hpp"

#include "votekit/error.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace votekit {

std::string_view to_string(Metric m) { return m == Metric::kL1 ? "l1" : "linf"; }

Metric parse_metric(std::string_view text) {
  if (text == "l1") return Metric::kL1;
  if (text == "linf") return Metric::kLinf;
  throw Error(Errc::kInvalidArgument, "unknown metric '" + std::string(text) + "' (expected l1 or linf)");
}

Rational distance(std::span<const Rational> x, std::span<const Rational> y, Metric m) {
  if (x.size() != y.size()) throw Error(Errc::kInvalidArgument, "vectors differ in length");
  Rational d = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Rational diff = abs(x[i] - y[i]);
    if (m == Metric::kL1) {
      d += diff;
    } else if (diff > d) {
      d = diff;
    }
  }
  return d;
}

Rational distance(const PowerVector& x, const PowerVector& y, Metric m) {
  const auto a = x.entries();
  const auto b = y.entries();
  return distance(a, b, m);
}

namespace {

using i128 = __int128;

constexpr int kFixedShift = 32;
constexpr std::int64_t kMaxDenominator = std::int64_t{1} << 31;
constexpr std::int64_t kMaxQueryDenominator = std::int64_t{1} << 40;
constexpr std::uint32_t kLeafSize = 8;

i128 abs128(i128 v) { return v < 0 ? -v : v; }

// Reduced integer rows (numerators, denominator) of power vectors.
void flatten(std::span<const PowerVector> vectors, int n, std::vector<std::int64_t>& num,
             std::vector<std::int64_t>& den) {
  num.reserve(vectors.size() * n);
  den.reserve(vectors.size());
  for (const auto& v : vectors) {
    if (v.size() != n) throw Error(Errc::kInvalidArgument, "power vector has the wrong length");
    for (const auto& x : v.numerators()) num.push_back(to_int64(x));
    den.push_back(to_int64(v.denominator()));
  }
}

}  // namespace

std::size_t count_distinct(std::span<const PowerVector> vectors) {
  if (vectors.empty()) return 0;
  return VectorStore(vectors.front().size(), vectors.front().kind(), vectors).size();
}

std::size_t count_distinct(const GameCatalog& catalog, IndexKind kind) {
  if (catalog.size() == 0) return 0;
  const auto vectors = power_vectors(catalog, kind);
  return count_distinct(vectors);
}

struct VectorStore::Query {
  std::vector<std::int64_t> num;
  std::int64_t den;
  std::vector<std::int64_t> fixed;
};

struct VectorStore::Best {
  bool found = false;
  std::uint32_t point = 0;
  i128 num = 0;  // distance times (query den * point den)
};

VectorStore::VectorStore(int n, IndexKind kind, std::span<const PowerVector> vectors) : n_(n), kind_(kind) {
  std::vector<std::int64_t> num, den;
  flatten(vectors, n, num, den);
  *this = VectorStore(n, kind, std::move(num), std::move(den));
}

VectorStore::VectorStore(int n, IndexKind kind, std::vector<std::int64_t> numerators,
                         std::vector<std::int64_t> denominators, std::vector<std::size_t> origins)
    : n_(n), kind_(kind) {
  if (n < 1) throw Error(Errc::kInvalidArgument, "store needs at least one voter");
  const std::size_t count = denominators.size();
  if (numerators.size() != count * n) throw Error(Errc::kInvalidArgument, "numerator block has the wrong size");
  if (origins.empty()) {
    origins.resize(count);
    std::iota(origins.begin(), origins.end(), std::size_t{0});
  }
  if (origins.size() != count) throw Error(Errc::kInvalidArgument, "origin list has the wrong size");
  for (std::size_t i = 0; i < count; ++i) {
    std::int64_t* row = numerators.data() + i * n;
    std::int64_t g = denominators[i];
    std::int64_t sum = 0;
    for (int j = 0; j < n; ++j) {
      if (row[j] < 0) throw Error(Errc::kInvalidArgument, "power vector entries must be non-negative");
      g = std::gcd(g, row[j]);
      sum += row[j];
    }
    if (denominators[i] <= 0 || sum != denominators[i]) {
      throw Error(Errc::kInvalidArgument, "stored power vectors must sum to one");
    }
    for (int j = 0; j < n; ++j) row[j] /= g;
    denominators[i] /= g;
    if (denominators[i] > kMaxDenominator) throw Error(Errc::kTooLarge, "power vector denominator too large");
  }
  // dedup keeping the earliest input of each value
  std::vector<std::uint32_t> idx(count);
  std::iota(idx.begin(), idx.end(), 0U);
  auto row_less = [&](std::uint32_t a, std::uint32_t b) {
    if (denominators[a] != denominators[b]) return denominators[a] < denominators[b];
    return std::lexicographical_compare(numerators.begin() + a * n, numerators.begin() + (a + 1) * n,
                                        numerators.begin() + b * n, numerators.begin() + (b + 1) * n);
  };
  std::stable_sort(idx.begin(), idx.end(), row_less);
  for (std::size_t k = 0; k < count; ++k) {
    if (k > 0 && !row_less(idx[k - 1], idx[k])) continue;
    const std::uint32_t i = idx[k];
    num_.insert(num_.end(), numerators.begin() + i * n, numerators.begin() + (i + 1) * n);
    den_.push_back(denominators[i]);
    origin_.push_back(origins[i]);
  }
  build();
}

void VectorStore::build() {
  const std::size_t count = den_.size();
  fixed_.resize(num_.size());
  for (std::size_t i = 0; i < count; ++i) {
    for (int j = 0; j < n_; ++j) {
      fixed_[i * n_ + j] = static_cast<std::int64_t>((static_cast<i128>(num_[i * n_ + j]) << kFixedShift) / den_[i]);
    }
  }
  order_.resize(count);
  std::iota(order_.begin(), order_.end(), 0U);
  nodes_.clear();
  box_.clear();
  if (count > 0) build_node(0, static_cast<std::uint32_t>(count));
}

std::int32_t VectorStore::build_node(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  const std::size_t base = box_.size();
  box_.resize(base + 2 * n_);
  std::int64_t* lo = box_.data() + base;
  std::int64_t* hi = lo + n_;
  std::fill(lo, lo + n_, INT64_MAX);
  std::fill(hi, hi + n_, INT64_MIN);
  for (std::uint32_t k = begin; k < end; ++k) {
    const std::int64_t* p = fixed_.data() + static_cast<std::size_t>(order_[k]) * n_;
    for (int j = 0; j < n_; ++j) {
      lo[j] = std::min(lo[j], p[j]);
      hi[j] = std::max(hi[j], p[j]);
    }
  }
  if (end - begin <= kLeafSize) return id;
  int dim = 0;
  for (int j = 1; j < n_; ++j) {
    if (hi[j] - lo[j] > hi[dim] - lo[dim]) dim = j;
  }
  if (hi[dim] == lo[dim]) return id;
  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) {
                     return fixed_[static_cast<std::size_t>(a) * n_ + dim] <
                            fixed_[static_cast<std::size_t>(b) * n_ + dim];
                   });
  const std::int32_t left = build_node(begin, mid);
  const std::int32_t right = build_node(mid, end);
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

PowerVector VectorStore::vector(std::size_t i) const {
  std::vector<BigInt> num(num_.begin() + i * n_, num_.begin() + (i + 1) * n_);
  return PowerVector(kind_, std::move(num), BigInt(den_[i]));
}

std::optional<std::size_t> VectorStore::find(const PowerVector& v) const {
  if (v.size() != n_ || size() == 0) return std::nullopt;
  const auto hit = nearest(v, Metric::kLinf);
  if (hit.distance == 0) return hit.index;
  return std::nullopt;
}

VectorStore::Query VectorStore::make_query(std::span<const Rational> q) const {
  if (static_cast<int>(q.size()) != n_) throw Error(Errc::kInvalidArgument, "query has the wrong length");
  if (size() == 0) throw Error(Errc::kInvalidArgument, "nearest-neighbour query on an empty store");
  BigInt common = 1;
  for (const auto& r : q) {
    if (r < 0 || r > 2) throw Error(Errc::kInvalidArgument, "query entries must lie in [0, 2]");
    const BigInt d = denominator(r);
    common = common / boost::multiprecision::gcd(common, d) * d;
  }
  if (common > kMaxQueryDenominator) throw Error(Errc::kTooLarge, "query denominators are too large");
  Query out;
  out.den = static_cast<std::int64_t>(common);
  for (const auto& r : q) {
    const std::int64_t v = static_cast<std::int64_t>(numerator(r) * (common / denominator(r)));
    out.num.push_back(v);
    out.fixed.push_back(static_cast<std::int64_t>((static_cast<i128>(v) << kFixedShift) / out.den));
  }
  return out;
}

void VectorStore::consider(const Query& q, std::uint32_t point, Metric m, Best& best) const {
  const std::int64_t* v = num_.data() + static_cast<std::size_t>(point) * n_;
  const std::int64_t dv = den_[point];
  i128 d = 0;
  for (int j = 0; j < n_; ++j) {
    const i128 diff = abs128(static_cast<i128>(q.num[j]) * dv - static_cast<i128>(v[j]) * q.den);
    if (m == Metric::kL1) {
      d += diff;
    } else if (diff > d) {
      d = diff;
    }
  }
  if (best.found) {
    const std::int64_t db = den_[best.point];
    const i128 lhs = d * db;
    const i128 rhs = best.num * dv;
    if (lhs > rhs) return;
    if (lhs == rhs) {
      const std::int64_t* b = num_.data() + static_cast<std::size_t>(best.point) * n_;
      for (int j = 0; j < n_; ++j) {
        const i128 x = static_cast<i128>(v[j]) * db;
        const i128 y = static_cast<i128>(b[j]) * dv;
        if (x != y) {
          if (x > y) return;
          break;
        }
        if (j == n_ - 1) return;
      }
    }
  }
  best.found = true;
  best.point = point;
  best.num = d;
}

void VectorStore::search(const Query& q, std::int32_t id, Metric m, Best& best) const {
  const Node& node = nodes_[id];
  if (node.left < 0) {
    for (std::uint32_t k = node.begin; k < node.end; ++k) consider(q, order_[k], m, best);
    return;
  }
  // Lower bound on the distance to a child's box, in fixed-point units.
  auto bound = [&](std::int32_t child) {
    const std::int64_t* lo = box_.data() + static_cast<std::size_t>(child) * 2 * n_;
    const std::int64_t* hi = lo + n_;
    std::int64_t total = 0;
    for (int j = 0; j < n_; ++j) {
      std::int64_t gap = 0;
      if (q.fixed[j] > hi[j] + 1) gap = q.fixed[j] - hi[j] - 1;
      if (q.fixed[j] + 1 < lo[j]) gap = lo[j] - q.fixed[j] - 1;
      total = m == Metric::kL1 ? total + gap : std::max(total, gap);
    }
    return total;
  };
  auto pruned = [&](std::int64_t lb) {
    if (!best.found || lb == 0) return false;
    const i128 lhs = static_cast<i128>(lb) * q.den * den_[best.point];
    return lhs > (best.num << kFixedShift);
  };
  std::int32_t first = node.left;
  std::int32_t second = node.right;
  std::int64_t b1 = bound(first);
  std::int64_t b2 = bound(second);
  if (b2 < b1) {
    std::swap(first, second);
    std::swap(b1, b2);
  }
  if (!pruned(b1)) search(q, first, m, best);
  if (!pruned(b2)) search(q, second, m, best);
}

VectorStore::Neighbor VectorStore::finish(const Query& q, const Best& best) const {
  const BigInt den = BigInt(q.den) * den_[best.point];
  const auto hi = static_cast<std::int64_t>(best.num >> 64);
  const auto lo = static_cast<std::uint64_t>(best.num);
  const BigInt num = (BigInt(hi) << 64) + BigInt(lo);
  return Neighbor{best.point, Rational(num, den)};
}

VectorStore::Neighbor VectorStore::nearest(std::span<const Rational> query, Metric m) const {
  const Query q = make_query(query);
  Best best;
  search(q, 0, m, best);
  return finish(q, best);
}

VectorStore::Neighbor VectorStore::nearest(const PowerVector& query, Metric m) const {
  const auto entries = query.entries();
  return nearest(entries, m);
}

VectorStore::Neighbor VectorStore::nearest_linear(std::span<const Rational> query, Metric m) const {
  const Query q = make_query(query);
  Best best;
  for (std::uint32_t i = 0; i < size(); ++i) consider(q, i, m, best);
  return finish(q, best);
}

VectorStore build_store(const GameCatalog& catalog, IndexKind kind) {
  if (catalog.size() == 0) throw Error(Errc::kInvalidArgument, "cannot build a store from an empty catalog");
  const auto vectors = power_vectors(catalog, kind);
  return VectorStore(catalog.voters(), kind, vectors);
}

Survey::Survey(int n, std::vector<IndexKind> kinds) : n_(n) {
  if (n < 1 || n > kMaxEnumerationVoters) {
    throw Error(Errc::kInvalidArgument, "surveys cover 1.." + std::to_string(kMaxEnumerationVoters) + " voters");
  }
  for (IndexKind k : kinds) {
    bool seen = false;
    for (const auto& s : states_) seen = seen || s.kind == k;
    if (!seen) {
      states_.emplace_back();
      states_.back().kind = k;
    }
  }
}

Survey::KindState& Survey::state(IndexKind kind) {
  for (auto& s : states_) {
    if (s.kind == kind) return s;
  }
  throw Error(Errc::kInvalidArgument, "survey does not track the " + std::string(to_string(kind)) + " index");
}

Survey::Key Survey::key_of(const SwingProfile& p, IndexKind kind) const {
  Key key{};
  if (kind == IndexKind::kShapleyShubik) {
    std::array<std::uint32_t, kMaxEnumerationVoters> coef{};
    std::uint32_t f[kMaxEnumerationVoters + 1] = {1};
    for (int k = 1; k <= n_; ++k) f[k] = f[k - 1] * static_cast<std::uint32_t>(k);
    for (int k = 0; k < n_; ++k) coef[k] = f[k] * f[n_ - 1 - k];
    for (int i = 0; i < n_; ++i) {
      std::uint32_t v = 0;
      for (int k = 0; k < n_; ++k) v += coef[k] * static_cast<std::uint32_t>(p.by_size[i][k]);
      key[i] = static_cast<std::uint16_t>(v);
    }
  } else {
    std::uint32_t g = 0;
    std::array<std::uint32_t, kMaxEnumerationVoters> eta{};
    for (int i = 0; i < n_; ++i) {
      for (auto c : p.by_size[i]) eta[i] += static_cast<std::uint32_t>(c);
      g = std::gcd(g, eta[i]);
    }
    for (int i = 0; i < n_; ++i) key[i] = static_cast<std::uint16_t>(eta[i] / g);
  }
  return key;
}

PowerVector Survey::vector_of(const Key& k, IndexKind kind) const {
  std::vector<BigInt> num(k.begin(), k.begin() + n_);
  if (kind == IndexKind::kShapleyShubik) return PowerVector(kind, std::move(num), factorial(n_));
  BigInt total = 0;
  for (const auto& x : num) total += x;
  return PowerVector(kind, std::move(num), std::move(total));
}

void Survey::compact(KindState& s) {
  if (s.complete_sorted != s.complete.size()) {
    std::sort(s.complete.begin(), s.complete.end());
    s.complete.erase(std::unique(s.complete.begin(), s.complete.end()), s.complete.end());
    s.complete_sorted = s.complete.size();
  }
  if (s.weighted_sorted != s.weighted.size()) {
    std::sort(s.weighted.begin(), s.weighted.end());
    s.weighted.erase(std::unique(s.weighted.begin(), s.weighted.end(),
                                 [](const auto& a, const auto& b) { return a.first == b.first; }),
                     s.weighted.end());
    s.weighted_sorted = s.weighted.size();
  }
}

void Survey::add(const GameView& game, bool weighted) {
  if (game.n != n_) throw Error(Errc::kInvalidArgument, "game has the wrong voter count for this survey");
  const SwingProfile p = swing_profile(game.to_explicit());
  ++complete_games_;
  if (weighted) {
    for (Coalition c : game.family) weighted_masks_.push_back(static_cast<std::uint32_t>(c.bits()));
    weighted_offsets_.push_back(static_cast<std::uint32_t>(weighted_masks_.size()));
  }
  for (auto& s : states_) {
    const Key k = key_of(p, s.kind);
    s.complete.push_back(k);
    if (weighted) s.weighted.emplace_back(k, static_cast<std::uint32_t>(weighted_games_));
    // keep the unsorted tail bounded by the sorted part
    if (s.complete.size() > 2 * s.complete_sorted + (1U << 20)) compact(s);
  }
  if (weighted) ++weighted_games_;
}

std::uint64_t Survey::games(GameClass c) const {
  return c == GameClass::kWeighted ? weighted_games_ : complete_games_;
}

std::size_t Survey::distinct(GameClass c, IndexKind kind) {
  KindState& s = state(kind);
  compact(s);
  return c == GameClass::kWeighted ? s.weighted.size() : s.complete.size();
}

VectorStore Survey::weighted_store(IndexKind kind) {
  KindState& s = state(kind);
  compact(s);
  std::vector<std::int64_t> num, den;
  std::vector<std::size_t> origins;
  num.reserve(s.weighted.size() * n_);
  for (const auto& [key, origin] : s.weighted) {
    std::int64_t total = 0;
    for (int j = 0; j < n_; ++j) {
      num.push_back(key[j]);
      total += key[j];
    }
    den.push_back(total);
    origins.push_back(origin);
  }
  return VectorStore(n_, kind, std::move(num), std::move(den), std::move(origins));
}

CompleteGame Survey::weighted_game(std::size_t origin) const {
  std::vector<Coalition> family;
  for (std::uint32_t k = weighted_offsets_[origin]; k < weighted_offsets_[origin + 1]; ++k) {
    family.emplace_back(weighted_masks_[k]);
  }
  return CompleteGame(n_, std::move(family));
}

GapReport Survey::gap(IndexKind kind, Metric m, const GameReplay& replay) {
  KindState& s = state(kind);
  compact(s);
  if (s.weighted.empty() || s.complete.empty()) throw Error(Errc::kInvalidArgument, "survey is empty");
  const VectorStore store = weighted_store(kind);

  Rational worst = -1;
  std::vector<Key> worst_keys;
  std::size_t w = 0;
  for (const Key& k : s.complete) {
    while (w < s.weighted.size() && s.weighted[w].first < k) ++w;
    Rational d = 0;
    if (w == s.weighted.size() || s.weighted[w].first != k) {
      d = store.nearest(vector_of(k, kind), m).distance;
    }
    if (d > worst) {
      worst = d;
      worst_keys.clear();
    }
    if (d == worst) worst_keys.push_back(k);
  }

  GapReport report;
  report.n = n_;
  report.kind = kind;
  report.metric = m;
  report.omega = worst;
  constexpr std::size_t kKeep = 1000;
  std::set<CompleteGame> kept;
  replay([&](const GameView& g) {
    const Key k = key_of(swing_profile(g.to_explicit()), kind);
    if (!std::binary_search(worst_keys.begin(), worst_keys.end(), k)) return;
    ++report.attaining_count;
    kept.insert(CompleteGame(n_, std::vector<Coalition>(g.family.begin(), g.family.end())));
    if (kept.size() > kKeep) kept.erase(std::prev(kept.end()));
  });
  if (kept.empty()) throw Error(Errc::kInvalidArgument, "replay did not reproduce the surveyed games");
  report.attaining.assign(kept.begin(), kept.end());

  const PowerVector pc = kind == IndexKind::kShapleyShubik ? ssi(report.argmax()) : pbi(report.argmax());
  const auto hit = store.nearest(pc, m);
  const ExplicitGame nearest_table = to_explicit(weighted_game(store.origin(hit.index)));
  auto rep = weighted_certificate_sorted(nearest_table);
  if (!rep) throw Error(Errc::kInvalidArgument, "internal error: stored weighted game failed the weightedness test");
  report.nearest_weighted = rep->to_game();
  report.complete_vector = pc;
  report.weighted_vector = store.vector(hit.index);
  return report;
}

Survey run_survey(int n, std::vector<IndexKind> kinds) {
  Survey survey(n, std::move(kinds));
  for_each_complete_game(n, [&](const GameView& g) {
    survey.add(g, weighted_certificate_sorted(g.to_explicit()).has_value());
  });
  return survey;
}

Survey survey_from_catalogs(const GameCatalog& complete, const GameCatalog& weighted,
                            std::vector<IndexKind> kinds) {
  if (complete.voters() != weighted.voters()) throw Error(Errc::kInvalidArgument, "catalogs differ in voter count");
  std::set<std::vector<Coalition>> weighted_families;
  for (std::size_t i = 0; i < weighted.size(); ++i) {
    const auto f = weighted.family(i);
    weighted_families.emplace(f.begin(), f.end());
  }
  Survey survey(complete.voters(), std::move(kinds));
  std::vector<Coalition> family;
  for (std::size_t i = 0; i < complete.size(); ++i) {
    const auto f = complete.family(i);
    family.assign(f.begin(), f.end());
    const ExplicitGame g = complete.table(i);
    survey.add(GameView{complete.voters(), f, g.words()}, weighted_families.count(family) > 0);
  }
  if (survey.games(GameClass::kWeighted) != weighted.size()) {
    throw Error(Errc::kInvalidArgument, "weighted catalog is not a subset of the complete catalog");
  }
  return survey;
}

GameReplay replay_catalog(const GameCatalog& catalog) {
  return [&catalog](const GameVisitor& visit) {
    for (std::size_t i = 0; i < catalog.size(); ++i) {
      const ExplicitGame g = catalog.table(i);
      visit(GameView{catalog.voters(), catalog.family(i), g.words()});
    }
  };
}

GapReport omega(int n, IndexKind kind, Metric m) {
  Survey survey = run_survey(n, {kind});
  return survey.gap(kind, m, [n](const GameVisitor& visit) { for_each_complete_game(n, visit); });
}

}  // namespace votekit
