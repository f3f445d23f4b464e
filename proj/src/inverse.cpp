#include "votekit/inverse.hpp"

#include "votekit/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

namespace votekit {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    const std::size_t start = i;
    while (i < s.size() && !std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

Rational pow10(int k) {
  BigInt p = 1;
  for (int i = 0; i < k; ++i) p *= 10;
  return Rational(p);
}

void validate(const Target& t) {
  if (t.n < 1 || static_cast<int>(t.values.size()) != t.n) {
    throw Error(Errc::kInvalidArgument, "target needs exactly n entries");
  }
  Rational sum = 0;
  for (const auto& v : t.values) {
    if (v < 0) throw Error(Errc::kInvalidArgument, "target entries must be non-negative");
    sum += v;
  }
  if (abs(sum - 1) > t.tolerance) {
    throw Error(Errc::kInvalidArgument, "target entries sum to " + to_decimal_string(sum) +
                                            ", not 1 within the declared precision");
  }
}

}  // namespace

Target parse_target(std::string_view text) {
  const std::size_t eol = text.find('\n');
  if (eol == std::string_view::npos) throw Error(Errc::kParse, "target needs a header line and a value line");
  Target t;
  bool have_n = false;
  bool have_index = false;
  for (std::string_view field : split_ws(text.substr(0, eol))) {
    const std::size_t eq = field.find('=');
    if (eq == std::string_view::npos) throw Error(Errc::kParse, "bad target header field '" + std::string(field) + "'");
    const std::string_view key = field.substr(0, eq);
    const std::string_view value = field.substr(eq + 1);
    if (key == "n") {
      try {
        t.n = std::stoi(std::string(value));
      } catch (const std::exception&) {
        throw Error(Errc::kParse, "bad voter count '" + std::string(value) + "'");
      }
      have_n = true;
    } else if (key == "index") {
      t.kind = parse_index_kind(value);
      have_index = true;
    } else {
      throw Error(Errc::kParse, "unknown target header field '" + std::string(key) + "'");
    }
  }
  if (!have_n || !have_index) throw Error(Errc::kParse, "target header needs n=<n> and index=<ssi|pbi>");
  for (std::string_view token : split_ws(text.substr(eol + 1))) {
    t.values.push_back(parse_rational(token));
    const std::size_t dot = token.find('.');
    if (dot != std::string_view::npos) {
      const int places = static_cast<int>(token.size() - dot - 1);
      t.tolerance += Rational(1, 2) / pow10(places);
    }
  }
  validate(t);
  return t;
}

Target make_target(const PowerVector& v) { return Target{v.size(), v.kind(), v.entries(), 0}; }

Target beta_target(int n, IndexKind kind) {
  if (n < 1) throw Error(Errc::kInvalidArgument, "beta target needs at least one voter");
  Target t{n, kind, std::vector<Rational>(n, Rational(2, 2 * n - 1)), 0};
  t.values.back() = Rational(1, 2 * n - 1);
  return t;
}

std::string_view to_string(InverseMode mode) {
  return mode == InverseMode::kExactMin ? "Econstexpr double kBand = x;ACT_MIN" : "HEURISTIC_UPPER_BOUND";
}

InverseResult inverse_exact(const Target& t, Metric m, const GameCatalog& weighted) {
  validate(t);
  if (weighted.game_class() != GameClass::kWeighted || weighted.voters() != t.n) {
    throw Error(Errc::kInvalidArgument, "exact search needs the weighted catalog for " + std::to_string(t.n) + " voters");
  }
  const VectorStore store = build_store(weighted, t.kind);
  const auto hit = store.nearest(t.values, m);
  return InverseResult{weighted.certificate(store.origin(hit.index)).to_game(), store.vector(hit.index),
                       hit.distance, InverseMode::kExactMin};
}

InverseResult inverse_exact(const Target& t, Metric m, Survey& survey) {
  validate(t);
  if (survey.voters() != t.n) {
    throw Error(Errc::kInvalidArgument, "exact search needs a survey of " + std::to_string(t.n) + " voters");
  }
  const VectorStore store = survey.weighted_store(t.kind);
  const auto hit = store.nearest(t.values, m);
  const auto rep = weighted_certificate_sorted(to_explicit(survey.weighted_game(store.origin(hit.index))));
  if (!rep) throw Error(Errc::kInvalidArgument, "internal error: surveyed weighted game failed the weightedness test");
  return InverseResult{rep->to_game(), store.vector(hit.index), hit.distance, InverseMode::kExactMin};
}

namespace {

// Scores one integer weight vector against every quota 1..W at once.
// Coalition counts are kept per (size, weight) in wrapping 64-bit integers,
// which is exact for counts below 2^64; removing a voter divides the
// generating polynomial by (1 + x y^w).
class QuotaScorer {
 public:
  QuotaScorer(int n, IndexKind kind, std::vector<double> target, Metric m)
      : n_(n), kind_(kind), target_(std::move(target)), metric_(m), coef_(n) {
    // k!(n-1-k)!/n! = 1 / (n * C(n-1, k))
    double c = 1.0;
    for (int k = 0; k < n; ++k) {
      coef_[k] = 1.0 / (n * c);
      c = c * (n - 1 - k) / (k + 1);
    }
  }

  struct Score {
    double distance;
    std::int64_t quota;
  };

  Score score(const std::vector<std::int64_t>& w) {
    std::int64_t total = 0;
    for (auto x : w) total += x;
    const std::size_t width = static_cast<std::size_t>(total) + 1;
    f_.assign(static_cast<std::size_t>(n_ + 1) * width, 0);
    f_[0] = 1;
    int size = 0;
    std::int64_t reach = 0;
    for (int i = 0; i < n_; ++i) {
      for (int k = size; k >= 0; --k) {
        std::uint64_t* from = f_.data() + k * width;
        std::uint64_t* to = f_.data() + (k + 1) * width;
        for (std::int64_t s = reach; s >= 0; --s) to[s + w[i]] += from[s];
      }
      ++size;
      reach += w[i];
    }

    // per distinct weight: power at every quota
    std::vector<std::int64_t> distinct(w.begin(), w.end());
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
    power_.assign(distinct.size() * width, 0.0);
    std::vector<std::uint64_t> c(static_cast<std::size_t>(n_) * width), prefix(width + 1);
    for (std::size_t g = 0; g < distinct.size(); ++g) {
      const std::int64_t wg = distinct[g];
      if (wg == 0) continue;
      for (int k = 0; k < n_; ++k) {
        for (std::size_t s = 0; s < width; ++s) {
          std::uint64_t v = f_[k * width + s];
          if (k > 0 && s >= static_cast<std::size_t>(wg)) v -= c[(k - 1) * width + s - wg];
          c[k * width + s] = v;
        }
      }
      double* out = power_.data() + g * width;
      for (int k = 0; k < n_; ++k) {
        prefix[0] = 0;
        for (std::size_t s = 0; s < width; ++s) prefix[s + 1] = prefix[s] + c[k * width + s];
        const double weight = kind_ == IndexKind::kShapleyShubik ? coef_[k] : 1.0;
        for (std::int64_t q = 1; q <= total; ++q) {
          const std::int64_t low = std::max<std::int64_t>(0, q - wg);
          const std::uint64_t swings = prefix[q] - prefix[low];
          if (swings) out[q] += weight * static_cast<double>(swings);
        }
      }
    }

    std::vector<std::size_t> group(n_);
    for (int i = 0; i < n_; ++i) {
      group[i] = static_cast<std::size_t>(std::lower_bound(distinct.begin(), distinct.end(), w[i]) - distinct.begin());
    }
    Score best{INFINITY, 1};
    for (std::int64_t q = 1; q <= total; ++q) {
      double norm = 1.0;
      if (kind_ == IndexKind::kBanzhaf) {
        double sum = 0;
        for (int i = 0; i < n_; ++i) sum += power_[group[i] * width + q];
        if (sum <= 0) continue;
        norm = 1.0 / sum;
      }
      double d = 0;
      for (int i = 0; i < n_; ++i) {
        const double diff = std::fabs(power_[group[i] * width + q] * norm - target_[i]);
        d = metric_ == Metric::kL1 ? d + diff : std::max(d, diff);
      }
      if (d < best.distance) best = Score{d, q};
    }
    return best;
  }

 private:
  int n_;
  IndexKind kind_;
  std::vector<double> target_;
  Metric metric_;
  std::vector<double> coef_;
  std::vector<std::uint64_t> f_;
  std::vector<double> power_;
};

std::vector<std::int64_t> proportional(const std::vector<double>& target, double scale) {
  std::vector<std::int64_t> w;
  std::int64_t total = 0;
  for (double t : target) {
    w.push_back(std::llround(t * scale));
    total += w.back();
  }
  if (total == 0) w[std::max_element(target.begin(), target.end()) - target.begin()] = 1;
  return w;
}

}  // namespace

InverseResult inverse_heuristic(const Target& t, Metric m, const HeuristicOptions& options) {
  validate(t);
  if (t.n > 60) throw Error(Errc::kTooLarge, "heuristic search supports at most 60 voters");
  if (options.budget == 0) throw Error(Errc::kInvalidArgument, "search budget must be positive");
  if (options.scale < 1) throw Error(Errc::kInvalidArgument, "weight scale must be positive");
  std::vector<double> target;
  for (const auto& v : t.values) target.push_back(to_double(v));
  QuotaScorer scorer(t.n, t.kind, target, m);
  std::mt19937_64 rng(options.seed);

  std::vector<std::int64_t> current;
  if (options.start) {
    current = *options.start;
    std::int64_t total = 0;
    for (auto x : current) {
      if (x < 0) throw Error(Errc::kInvalidArgument, "start weights must be non-negative");
      total += x;
    }
    if (static_cast<int>(current.size()) != t.n || total == 0) {
      throw Error(Errc::kInvalidArgument, "start weights need n entries with a positive sum");
    }
  } else {
    current = proportional(target, static_cast<double>(options.scale));
  }

  // Power is monotone in weight and sorted pairing minimises both metrics,
  // so weights ordered like the target lose nothing; keeping the walk in
  // that cone removes the basins where a small voter outweighs a larger one.
  std::vector<int> order(t.n);
  for (int i = 0; i < t.n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return target[a] > target[b]; });
  auto sort_to_target = [&](std::vector<std::int64_t>& w) {
    std::vector<std::int64_t> sorted(w);
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    for (int k = 0; k < t.n; ++k) w[order[k]] = sorted[k];
  };
  sort_to_target(current);

  std::uint64_t evaluations = 0;
  auto evaluate = [&](const std::vector<std::int64_t>& w) {
    ++evaluations;
    return scorer.score(w);
  };
  QuotaScorer::Score cur = evaluate(current);
  std::vector<std::int64_t> best_w = current;
  QuotaScorer::Score best = cur;
  const std::int64_t max_total = std::max<std::int64_t>(64 * options.scale, 4096);

  // Record-to-record travel in rounds: any move that stays within a band
  // above the best distance is taken, so the walk keeps crossing the plateaus
  // where many weight vectors share one game instead of settling in the
  // first basin. The round length is fixed so a larger budget only extends
  // the trajectory and the best distance cannot grow with the budget.
  constexpr std::uint64_t kRoundLength = 10000;
  constexpr double kBands[] = {0.1, 0.3, 0.2};
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int round = 0; evaluations < options.budget && best.distance > 1e-13; ++round) {
    if (round > 0) {
      if (round % 4 != 0) {
        current = best_w;
      } else {
        current = proportional(target, static_cast<double>(options.scale) * (0.5 + 3.5 * unit(rng)));
        sort_to_target(current);
      }
      cur = evaluate(current);
      if (cur.distance < best.distance) {
        best = cur;
        best_w = current;
      }
    }
    const double band = kBands[round % 3];
    std::int64_t total = 0;
    for (auto x : current) total += x;
    for (std::uint64_t step = 0; step < kRoundLength && evaluations < options.budget; ++step) {
      // raise one weight, lower one, or shift between two, by 1 or 2; now
      // and then redraw one weight from [0, 2w] to leave a basin at once
      const std::vector<std::int64_t> previous = current;
      std::int64_t next_total = total;
      const auto kind = rng() % 32;
      if (kind == 0) {
        const int i = static_cast<int>(rng() % t.n);
        const auto span = static_cast<std::uint64_t>(std::max<std::int64_t>(2 * current[i], 4) + 1);
        const auto value = static_cast<std::int64_t>(rng() % span);
        next_total += value - current[i];
        current[i] = value;
      } else {
        int up = static_cast<int>(rng() % t.n);
        int down = static_cast<int>(rng() % t.n);
        if (kind % 3 == 0) down = -1;
        if (kind % 3 == 1) up = -1;
        if (kind % 3 == 2 && up == down) continue;
        const std::int64_t amount = 1 + static_cast<std::int64_t>(rng() % 2);
        if (down >= 0 && current[down] < amount) continue;
        if (up >= 0) current[up] += amount, next_total += amount;
        if (down >= 0) current[down] -= amount, next_total -= amount;
      }
      if (next_total < 1 || next_total > max_total || current == previous) {
        current = previous;
        continue;
      }
      sort_to_target(current);
      const auto s = evaluate(current);
      if (s.distance <= cur.distance || s.distance <= best.distance * (1 + band)) {
        cur = s;
        total = next_total;
        if (cur.distance < best.distance) {
          best = cur;
          best_w = current;
        }
      } else {
        current = previous;
      }
    }
  }

  std::vector<Rational> weights(best_w.begin(), best_w.end());
  WeightedGame game(Rational(best.quota), std::move(weights));
  PowerVector vector = power(game, t.kind);
  const auto entries = vector.entries();
  Rational d = distance(entries, t.values, m);
  return InverseResult{std::move(game), std::move(vector), std::move(d), InverseMode::kHeuristicUpperBound,
                       options.seed, evaluations};
}

InverseResult inverse_padded(const CompleteGame& base, int pads, IndexKind kind, Metric m,
                             const PaddedOptions& options) {
  if (pads < 0) throw Error(Errc::kInvalidArgument, "padding count must be non-negative");
  const Game padded = add_null_voters(Game(base), pads);
  const Target t = make_target(power(padded, kind));
  if (options.weighted && options.weighted->voters() == t.n) return inverse_exact(t, m, *options.weighted);
  if (options.survey && options.survey->voters() == t.n) return inverse_exact(t, m, *options.survey);
  return inverse_heuristic(t, m, options.heuristic);
}

std::vector<Population> parse_populations(std::string_view text) {
  std::vector<Population> out;
  int line_no = 0;
  while (!text.empty()) {
    const std::size_t eol = text.find('\n');
    std::string_view line = trim(text.substr(0, eol));
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t comma = line.rfind(',');
    if (comma == std::string_view::npos) {
      throw Error(Errc::kParse, "population line " + std::to_string(line_no) + " needs 'name,population'");
    }
    const std::string name(trim(line.substr(0, comma)));
    const std::string count(trim(line.substr(comma + 1)));
    std::int64_t people = 0;
    std::size_t used = 0;
    try {
      people = std::stoll(count, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != count.size() || count.empty() || people <= 0 || name.empty()) {
      throw Error(Errc::kParse, "population line " + std::to_string(line_no) + " has a bad entry");
    }
    out.push_back(Population{name, people});
  }
  return out;
}

BoolCombo council_game(const std::vector<Population>& members, std::int64_t resolution) {
  const int n = static_cast<int>(members.size());
  if (n < 4) throw Error(Errc::kInvalidArgument, "the council rule needs at least four members");
  if (resolution < 0) throw Error(Errc::kInvalidArgument, "resolution must be non-negative");
  BigInt total = 0;
  for (const auto& p : members) total += p.people;
  std::vector<Rational> shares;
  for (const auto& p : members) {
    if (resolution == 0) {
      shares.emplace_back(p.people);
    } else {
      // round half up: floor((2 r p + P) / 2P)
      const BigInt units = (2 * resolution * BigInt(p.people) + total) / (2 * total);
      shares.emplace_back(units);
    }
  }
  Rational share_total = 0;
  for (const auto& s : shares) share_total += s;
  WeightedGame members_leaf(Rational(55, 100) * n, std::vector<Rational>(n, Rational(1)));
  WeightedGame population_leaf(Rational(65, 100) * share_total, shares);
  WeightedGame blocking_leaf(Rational(n - 3), std::vector<Rational>(n, Rational(1)));
  ComboNode both{ComboOp::kAnd, 0, {ComboNode{ComboOp::kLeaf, 0, {}}, ComboNode{ComboOp::kLeaf, 1, {}}}};
  ComboNode root{ComboOp::kOr, 0, {both, ComboNode{ComboOp::kLeaf, 2, {}}}};
  return BoolCombo({members_leaf, population_leaf, blocking_leaf}, root);
}

}  // namespace votekit
