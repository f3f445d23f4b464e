#include "votekit/indices.hpp"

#include "bits.hpp"
#include "votekit/error.hpp"

#include <map>

namespace votekit {

std::string_view to_string(IndexKind kind) {
  return kind == IndexKind::kShapleyShubik ? "ssi" : "pbi";
}

IndexKind parse_index_kind(std::string_view text) {
  if (text == "ssi") return IndexKind::kShapleyShubik;
  if (text == "pbi") return IndexKind::kBanzhaf;
  throw Error(Errc::kInvalidArgument, "unknown index '" + std::string(text) + "' (expected ssi or pbi)");
}

PowerVector::PowerVector(IndexKind kind, std::vector<BigInt> numerators, BigInt denominator)
    : kind_(kind), numerators_(std::move(numerators)), denominator_(std::move(denominator)) {
  if (denominator_ <= 0) throw Error(Errc::kInvalidArgument, "power vector denominator must be positive");
  for (const auto& x : numerators_) {
    if (x < 0) throw Error(Errc::kInvalidArgument, "power vector entries must be non-negative");
  }
}

std::vector<Rational> PowerVector::entries() const {
  std::vector<Rational> out;
  out.reserve(numerators_.size());
  for (const auto& x : numerators_) out.emplace_back(x, denominator_);
  return out;
}

std::vector<double> PowerVector::to_doubles() const {
  std::vector<double> out;
  for (const auto& r : entries()) out.push_back(to_double(r));
  return out;
}

bool operator==(const PowerVector& a, const PowerVector& b) {
  if (a.kind_ != b.kind_ || a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i) {
    if (a.numerators_[i] * b.denominator_ != b.numerators_[i] * a.denominator_) return false;
  }
  return true;
}

SwingProfile swing_profile(const ExplicitGame& g) {
  const int n = g.voters();
  SwingProfile p;
  p.n = n;
  p.by_size.assign(n, std::vector<std::uint64_t>(n, 0));
  for (int b = 0; b < n; ++b) {
    auto& row = p.by_size[b];
    detail::for_each_pair_word(g.words(), n, b, [&](std::size_t idx, std::uint64_t lo, std::uint64_t hi) {
      const std::uint64_t swings = hi & ~lo;
      if (swings == 0) return;
      const int base = std::popcount(idx);
      for (int j = 0; j < 7 && base + j < n; ++j) {
        row[base + j] += std::popcount(swings & detail::kLowSizeMask[j]);
      }
    });
  }
  return p;
}

PowerVector ssi_from_profile(const SwingProfile& p) {
  const int n = p.n;
  std::vector<BigInt> coef(n);
  for (int k = 0; k < n; ++k) coef[k] = factorial(k) * factorial(n - 1 - k);
  std::vector<BigInt> num(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      if (p.by_size[i][k]) num[i] += coef[k] * p.by_size[i][k];
    }
  }
  return PowerVector(IndexKind::kShapleyShubik, std::move(num), factorial(n));
}

PowerVector pbi_from_profile(const SwingProfile& p) {
  std::vector<BigInt> num(p.n, 0);
  BigInt total = 0;
  for (int i = 0; i < p.n; ++i) {
    for (std::uint64_t c : p.by_size[i]) num[i] += c;
    total += num[i];
  }
  if (total == 0) throw Error(Errc::kNotSimple, "game has no swings");
  return PowerVector(IndexKind::kBanzhaf, std::move(num), std::move(total));
}

PowerVector ssi(const Game& g) { return ssi_from_profile(swing_profile(to_explicit(g))); }

PowerVector pbi(const Game& g, SwingCounts* raw) {
  PowerVector v = pbi_from_profile(swing_profile(to_explicit(g)));
  if (raw) *raw = SwingCounts{v.numerators(), v.denominator()};
  return v;
}

namespace {

struct DpLeaf {
  std::int64_t quota;
  bool uniform;
  std::int64_t unit;  // common weight of a uniform leaf
  int dim;            // coordinate of a non-uniform leaf
};

SwingProfile dp_profile(const Game& g, const DpOptions& options) {
  std::vector<WeightedGame> leaves;
  ComboNode root{ComboOp::kLeaf, 0, {}};
  if (const auto* w = g.get_if<WeightedGame>()) {
    leaves.push_back(*w);
  } else if (const auto* c = g.get_if<BoolCombo>()) {
    leaves = c->leaves();
    root = c->root();
  } else {
    throw Error(Errc::kUnsupported, "the counting engine needs a weighted game or a combination of them");
  }
  const int n = g.voters();

  std::vector<DpLeaf> info;
  std::vector<int> dim_leaf;
  std::vector<std::int64_t> radix;
  std::uint64_t states_per_size = 1;
  for (std::size_t l = 0; l < leaves.size(); ++l) {
    const auto& w = leaves[l].scaled_weights();
    bool uniform = true;
    for (auto x : w) uniform = uniform && x == w.front();
    DpLeaf d{leaves[l].scaled_quota(), uniform, w.front(), -1};
    if (!uniform) {
      d.dim = static_cast<int>(radix.size());
      dim_leaf.push_back(static_cast<int>(l));
      const std::uint64_t r = static_cast<std::uint64_t>(d.quota) + 1;
      if (states_per_size > options.max_states / r) {
        throw Error(Errc::kTooLarge, "DP state space exceeds the cap of " +
                                         std::to_string(options.max_states) + " states");
      }
      states_per_size *= r;
      radix.push_back(d.quota + 1);
    }
    info.push_back(d);
  }
  const std::uint64_t total_states = states_per_size * static_cast<std::uint64_t>(n + 1);
  if (states_per_size > options.max_states || total_states > options.max_states) {
    throw Error(Errc::kTooLarge, "DP state space of " + std::to_string(total_states) +
                                     " exceeds the cap of " + std::to_string(options.max_states));
  }
  const int dims = static_cast<int>(radix.size());

  // voters with identical weights in every leaf are interchangeable
  std::map<std::vector<std::int64_t>, std::vector<int>> type_members;
  for (int v = 0; v < n; ++v) {
    std::vector<std::int64_t> key(dims);
    for (int d = 0; d < dims; ++d) key[d] = leaves[dim_leaf[d]].scaled_weights()[v];
    type_members[key].push_back(v);
  }
  std::vector<std::vector<std::int64_t>> type_weights;
  std::vector<std::vector<int>> members;
  for (auto& [key, list] : type_members) {
    type_weights.push_back(key);
    members.push_back(list);
  }

  std::vector<std::vector<std::uint64_t>> binom(n + 1, std::vector<std::uint64_t>(n + 1, 0));
  for (int a = 0; a <= n; ++a) {
    binom[a][0] = 1;
    for (int b = 1; b <= a; ++b) binom[a][b] = binom[a - 1][b - 1] + binom[a - 1][b];
  }

  auto encode = [&](const std::vector<std::int64_t>& s) {
    std::uint64_t idx = 0;
    for (int d = dims - 1; d >= 0; --d) idx = idx * radix[d] + s[d];
    return idx;
  };
  auto decode = [&](std::uint64_t idx, std::vector<std::int64_t>& s) {
    for (int d = 0; d < dims; ++d) {
      s[d] = static_cast<std::int64_t>(idx % radix[d]);
      idx /= radix[d];
    }
  };
  auto clamp_add = [&](std::vector<std::int64_t>& s, const std::vector<std::int64_t>& w, std::int64_t times) {
    for (int d = 0; d < dims; ++d) {
      const std::int64_t cap = radix[d] - 1;
      const std::int64_t add = w[d] * times;
      s[d] = (add >= cap - s[d]) ? cap : s[d] + add;
    }
  };
  auto wins = [&](int size, const std::vector<std::int64_t>& s) {
    return BoolCombo::evaluate_node(root, [&](std::size_t l) {
      const DpLeaf& d = info[l];
      if (d.uniform) return static_cast<__int128>(d.unit) * size >= d.quota;
      return s[d.dim] >= d.quota;
    });
  };

  SwingProfile profile;
  profile.n = n;
  profile.by_size.assign(n, std::vector<std::uint64_t>(n, 0));
  const std::uint64_t S = states_per_size;
  std::vector<std::int64_t> s(dims), t(dims);
  for (std::size_t target = 0; target < members.size(); ++target) {
    std::vector<std::uint64_t> dp(total_states, 0), next(total_states, 0);
    dp[0] = 1;
    int max_size = 0;
    for (std::size_t u = 0; u < members.size(); ++u) {
      const int m = static_cast<int>(members[u].size()) - (u == target ? 1 : 0);
      if (m == 0) continue;
      std::fill(next.begin(), next.end(), 0);
      for (int k = 0; k <= max_size; ++k) {
        for (std::uint64_t idx = 0; idx < S; ++idx) {
          const std::uint64_t count = dp[k * S + idx];
          if (count == 0) continue;
          decode(idx, s);
          for (int c = 0; c <= m; ++c) {
            t = s;
            clamp_add(t, type_weights[u], c);
            next[(k + c) * S + encode(t)] += count * binom[m][c];
          }
        }
      }
      max_size += m;
      dp.swap(next);
    }
    std::vector<std::uint64_t> swings(n, 0);
    for (int k = 0; k <= max_size; ++k) {
      for (std::uint64_t idx = 0; idx < S; ++idx) {
        const std::uint64_t count = dp[k * S + idx];
        if (count == 0) continue;
        decode(idx, s);
        if (wins(k, s)) continue;
        t = s;
        clamp_add(t, type_weights[target], 1);
        if (wins(k + 1, t)) swings[k] += count;
      }
    }
    for (int v : members[target]) profile.by_size[v] = swings;
  }
  return profile;
}

}  // namespace

PowerVector ssi_dp(const Game& g, const DpOptions& options) {
  return ssi_from_profile(dp_profile(g, options));
}

PowerVector pbi_dp(const Game& g, const DpOptions& options) {
  return pbi_from_profile(dp_profile(g, options));
}

PowerVector power(const Game& g, IndexKind kind, Engine engine) {
  const bool ssi_kind = kind == IndexKind::kShapleyShubik;
  if (engine == Engine::kDirect) return ssi_kind ? ssi(g) : pbi(g);
  if (engine == Engine::kDp) return ssi_kind ? ssi_dp(g) : pbi_dp(g);
  const bool countable = g.get_if<WeightedGame>() || g.get_if<BoolCombo>();
  if (countable) {
    try {
      return ssi_kind ? ssi_dp(g) : pbi_dp(g);
    } catch (const Error& e) {
      if (e.code() != Errc::kTooLarge || g.voters() > kMaxExplicitVoters) throw;
    }
  }
  return ssi_kind ? ssi(g) : pbi(g);
}

}  // namespace votekit
