#include "votekit/games.hpp"

#include "bits.hpp"
#include "votekit/error.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace votekit {

namespace {

void require_voter_count(int n) {
  if (n < 1 || n > kMaxVoters) {
    throw Error(Errc::kInvalidArgument, "voter count must lie in 1.." + std::to_string(kMaxVoters));
  }
}

bool table_bit(const std::vector<std::uint64_t>& t, std::uint64_t i) {
  return (t[i >> 6] >> (i & 63)) & 1U;
}

void set_table_bit(std::vector<std::uint64_t>& t, std::uint64_t i) {
  t[i >> 6] |= std::uint64_t{1} << (i & 63);
}

bool member_list_less(Coalition a, Coalition b) {
  std::uint64_t x = a.bits();
  std::uint64_t y = b.bits();
  while (x != 0 && y != 0) {
    const int i = std::countr_zero(x);
    const int j = std::countr_zero(y);
    if (i != j) return i < j;
    x &= x - 1;
    y &= y - 1;
  }
  return x == 0 && y != 0;
}

void validate_table(int n, const std::vector<std::uint64_t>& table) {
  if (table.size() != table_words(n)) {
    throw Error(Errc::kInvalidArgument, "characteristic table has the wrong size");
  }
  if (n < 6 && (table[0] >> (std::uint64_t{1} << n)) != 0) {
    throw Error(Errc::kInvalidArgument, "characteristic table has bits beyond 2^n");
  }
  if (table_bit(table, 0)) throw Error(Errc::kNotSimple, "the empty coalition is winning");
  if (!table_bit(table, Coalition::all(n).bits())) {
    throw Error(Errc::kNotSimple, "the grand coalition is losing");
  }
  for (int b = 0; b < n; ++b) {
    bool ok = true;
    detail::for_each_pair_word(table, n, b, [&](std::size_t, std::uint64_t lo, std::uint64_t hi) {
      if (lo & ~hi) ok = false;
    });
    if (!ok) throw Error(Errc::kNotSimple, "characteristic function is not monotone");
  }
}

}  // namespace

std::size_t table_words(int n) { return n <= 6 ? 1 : std::size_t{1} << (n - 6); }

std::string to_string(Coalition c) {
  std::string out = "{";
  bool first = true;
  for (int v : c.members()) {
    if (!first) out += ",";
    out += std::to_string(v);
    first = false;
  }
  return out + "}";
}

// ---------------------------------------------------------------- ExplicitGame

ExplicitGame::ExplicitGame(int n, std::vector<std::uint64_t> table) {
  if (n < 1 || n > kMaxExplicitVoters) {
    throw Error(Errc::kTooLarge, "explicit games support 1.." + std::to_string(kMaxExplicitVoters) +
                                     " voters");
  }
  validate_table(n, table);
  n_ = n;
  table_ = std::move(table);
}

ExplicitGame ExplicitGame::unchecked(int n, std::vector<std::uint64_t> table) {
  ExplicitGame g;
  g.n_ = n;
  g.table_ = std::move(table);
  return g;
}

ExplicitGame ExplicitGame::from_minimal_winning(int n, std::span<const Coalition> family) {
  if (n < 1 || n > kMaxExplicitVoters) throw Error(Errc::kTooLarge, "too many voters");
  std::vector<std::uint64_t> table(table_words(n), 0);
  const Coalition all = Coalition::all(n);
  for (Coalition s : family) {
    if (!s.subset_of(all)) throw Error(Errc::kInvalidArgument, "coalition member exceeds n");
    set_table_bit(table, s.bits());
  }
  // superset closure, one voter at a time
  const std::uint64_t size = std::uint64_t{1} << n;
  for (int b = 0; b < n; ++b) {
    const std::uint64_t bit = std::uint64_t{1} << b;
    for (std::uint64_t s = 0; s < size; ++s) {
      if ((s & bit) && table_bit(table, s ^ bit)) set_table_bit(table, s);
    }
  }
  return ExplicitGame(n, std::move(table));
}

// ---------------------------------------------------------------- WeightedGame

WeightedGame::WeightedGame(Rational quota, std::vector<Rational> weights)
    : quota_(std::move(quota)), weights_(std::move(weights)) {
  require_voter_count(static_cast<int>(weights_.size()));
  if (quota_ <= 0) throw Error(Errc::kInvalidArgument, "quota must be positive");
  Rational total = 0;
  for (const auto& w : weights_) {
    if (w < 0) throw Error(Errc::kInvalidArgument, "weights must be non-negative");
    total += w;
  }
  if (total < quota_) {
    throw Error(Errc::kNotSimple, "weighted game is not surjective: total weight is below the quota");
  }
  BigInt scale = denominator(quota_);
  for (const auto& w : weights_) scale = boost::multiprecision::lcm(scale, denominator(w));
  BigInt scaled_total = 0;
  scaled_weights_.reserve(weights_.size());
  for (const auto& w : weights_) {
    const BigInt s = numerator(w) * (scale / denominator(w));
    scaled_total += s;
    scaled_weights_.push_back(to_int64(s));
  }
  to_int64(scaled_total);
  scaled_quota_ = to_int64(numerator(quota_) * (scale / denominator(quota_)));
}

bool WeightedGame::winning(Coalition s) const {
  std::int64_t sum = 0;
  for (std::uint64_t b = s.bits(); b != 0; b &= b - 1) sum += scaled_weights_[std::countr_zero(b)];
  return sum >= scaled_quota_;
}

// ---------------------------------------------------------------- CompleteGame

CompleteGame::CompleteGame(int n, std::vector<Coalition> family) : n_(n), family_(std::move(family)) {
  require_voter_count(n);
  if (family_.empty()) throw Error(Errc::kNotSimple, "complete game needs a winning coalition");
  const Coalition all = Coalition::all(n);
  for (Coalition s : family_) {
    if (s.empty()) throw Error(Errc::kNotSimple, "the empty coalition cannot be winning");
    if (!s.subset_of(all)) throw Error(Errc::kInvalidArgument, "coalition member exceeds n");
  }
  std::sort(family_.begin(), family_.end(), member_list_less);
  family_.erase(std::unique(family_.begin(), family_.end()), family_.end());
  for (std::size_t a = 0; a < family_.size(); ++a) {
    for (std::size_t b = 0; b < family_.size(); ++b) {
      if (a != b && shift_dominates(family_[a], family_[b], n_)) {
        throw Error(Errc::kInvalidArgument, to_string(family_[a]) + " dominates " +
                                                to_string(family_[b]) +
                                                "; shift-minimal coalitions must form an antichain");
      }
    }
  }
}

bool CompleteGame::winning(Coalition s) const {
  for (Coalition f : family_)
    if (shift_dominates(s, f, n_)) return true;
  return false;
}

bool operator<(const CompleteGame& a, const CompleteGame& b) {
  if (a.n_ != b.n_) return a.n_ < b.n_;
  return std::lexicographical_compare(a.family_.begin(), a.family_.end(), b.family_.begin(),
                                      b.family_.end(), member_list_less);
}

// ---------------------------------------------------------------- BoolCombo

BoolCombo::BoolCombo(std::vector<WeightedGame> leaves, ComboNode root)
    : leaves_(std::move(leaves)), root_(std::move(root)) {
  if (leaves_.empty()) throw Error(Errc::kInvalidArgument, "combination needs at least one leaf");
  const int n = leaves_.front().voters();
  for (const auto& leaf : leaves_) {
    if (leaf.voters() != n) {
      throw Error(Errc::kInvalidArgument, "all combined games must have the same number of voters");
    }
  }
  auto check = [&](const auto& self, const ComboNode& node) -> void {
    if (node.op == ComboOp::kLeaf) {
      if (node.leaf >= leaves_.size()) throw Error(Errc::kInvalidArgument, "leaf index out of range");
      return;
    }
    if (node.operands.empty()) throw Error(Errc::kInvalidArgument, "empty combination node");
    for (const auto& c : node.operands) self(self, c);
  };
  check(check, root_);
  if (winning(Coalition{}) || !winning(Coalition::all(n))) {
    throw Error(Errc::kNotSimple, "combination is not surjective");
  }
}

bool BoolCombo::winning(Coalition s) const {
  return evaluate_tree([&](std::size_t leaf) { return leaves_[leaf].winning(s); });
}

// ---------------------------------------------------------------- Game

int Game::voters() const {
  return std::visit([](const auto& g) { return g.voters(); }, repr_);
}

bool Game::winning(Coalition s) const {
  return std::visit([&](const auto& g) { return g.winning(s); }, repr_);
}

bool evaluate(const Game& g, Coalition s) {
  if (!s.subset_of(Coalition::all(g.voters()))) {
    throw Error(Errc::kInvalidArgument, "coalition " + to_string(s) + " has members outside 1.." +
                                            std::to_string(g.voters()));
  }
  return g.winning(s);
}

// ---------------------------------------------------------------- parsing

namespace {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Game parse() {
    skip_ws();
    if (peek() == 'n') return parse_literal();
    ComboNode root = parse_expr();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError(pos_, "unexpected trailing input");
    if (root.op == ComboOp::kLeaf) return Game(std::move(leaves_.front()));
    return Game(BoolCombo(std::move(leaves_), std::move(root)));
  }

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  void expect(char c) {
    skip_ws();
    if (peek() != c) throw ParseError(pos_, std::string("expected '") + c + "'");
    ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (peek() != c) return false;
    ++pos_;
    return true;
  }

  ComboNode parse_expr() {
    ComboNode first = parse_term();
    if (!accept('|')) return first;
    ComboNode node{ComboOp::kOr, 0, {}};
    node.operands.push_back(std::move(first));
    do {
      node.operands.push_back(parse_term());
    } while (accept('|'));
    return node;
  }

  ComboNode parse_term() {
    ComboNode first = parse_factor();
    if (!accept('&')) return first;
    ComboNode node{ComboOp::kAnd, 0, {}};
    node.operands.push_back(std::move(first));
    do {
      node.operands.push_back(parse_factor());
    } while (accept('&'));
    return node;
  }

  ComboNode parse_factor() {
    skip_ws();
    if (accept('(')) {
      ComboNode inner = parse_expr();
      expect(')');
      return inner;
    }
    if (peek() != '[') throw ParseError(pos_, "expected '[' or '('");
    return ComboNode{ComboOp::kLeaf, parse_weighted(), {}};
  }

  std::size_t parse_weighted() {
    expect('[');
    const std::size_t start = pos_;
    Rational quota = parse_number();
    expect(';');
    std::vector<Rational> weights;
    weights.push_back(parse_number());
    while (accept(',')) weights.push_back(parse_number());
    expect(']');
    if (!leaves_.empty() && leaves_.front().voters() != static_cast<int>(weights.size())) {
      throw Error(Errc::kInvalidArgument,
                  "dimension mismatch: game at position " + std::to_string(start) + " has " +
                      std::to_string(weights.size()) + " voters, expected " +
                      std::to_string(leaves_.front().voters()));
    }
    leaves_.emplace_back(std::move(quota), std::move(weights));
    return leaves_.size() - 1;
  }

  Rational parse_number() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '.' ||
            text_[pos_] == '/')) {
      ++pos_;
    }
    if (pos_ == start) throw ParseError(pos_, "expected a number");
    try {
      return parse_rational(text_.substr(start, pos_ - start));
    } catch (const ParseError& e) {
      throw ParseError(start + e.position(), "malformed number");
    }
  }

  long parse_integer() {
    skip_ws();
    const std::size_t start = pos_;
    long value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > 1000) throw ParseError(start, "integer too large");
      ++pos_;
    }
    if (pos_ == start) throw ParseError(pos_, "expected an integer");
    return value;
  }

  std::string parse_word() {
    skip_ws();
    std::string out;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) {
      out.push_back(text_[pos_++]);
    }
    return out;
  }

  Game parse_literal() {
    if (parse_word() != "n") throw ParseError(pos_, "expected 'n='");
    expect('=');
    const long n = parse_integer();
    if (n < 1 || n > kMaxVoters) throw ParseError(pos_, "voter count out of range");
    expect(';');
    const std::size_t key_pos = pos_;
    const std::string key = parse_word();
    if (key != "minwin" && key != "shiftminwin") {
      throw ParseError(key_pos, "expected 'minwin' or 'shiftminwin'");
    }
    expect('=');
    std::vector<Coalition> family;
    do {
      expect('{');
      Coalition c;
      if (!accept('}')) {
        do {
          const std::size_t at = pos_;
          const long v = parse_integer();
          if (v < 1 || v > n) throw ParseError(at, "voter index out of range");
          c = c.with(static_cast<int>(v));
        } while (accept(','));
        expect('}');
      }
      family.push_back(c);
    } while (accept(','));
    skip_ws();
    if (pos_ != text_.size()) throw ParseError(pos_, "unexpected trailing input");
    for (Coalition c : family) {
      if (c.empty()) throw Error(Errc::kNotSimple, "the empty coalition cannot be winning");
    }
    if (key == "shiftminwin") return Game(CompleteGame(static_cast<int>(n), std::move(family)));
    return Game(ExplicitGame::from_minimal_winning(static_cast<int>(n), family));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<WeightedGame> leaves_;
};

std::string family_string(const std::vector<Coalition>& family) {
  std::string out;
  for (std::size_t i = 0; i < family.size(); ++i) {
    if (i) out += ",";
    out += to_string(family[i]);
  }
  return out;
}

std::string node_string(const BoolCombo& g, const ComboNode& node) {
  switch (node.op) {
    case ComboOp::kLeaf:
      return to_string(g.leaves()[node.leaf]);
    case ComboOp::kAnd: {
      std::string out;
      for (std::size_t i = 0; i < node.operands.size(); ++i) {
        if (i) out += " & ";
        const auto& c = node.operands[i];
        if (c.op == ComboOp::kOr) {
          out += "(" + node_string(g, c) + ")";
        } else {
          out += node_string(g, c);
        }
      }
      return out;
    }
    case ComboOp::kOr: {
      std::string out;
      for (std::size_t i = 0; i < node.operands.size(); ++i) {
        if (i) out += " | ";
        out += node_string(g, node.operands[i]);
      }
      return out;
    }
  }
  return {};
}

}  // namespace

Game parse_game(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const WeightedGame& g) {
  std::string out = "[" + to_fraction_string(g.quota()) + ";";
  for (std::size_t i = 0; i < g.weights().size(); ++i) {
    if (i) out += ",";
    out += to_fraction_string(g.weights()[i]);
  }
  return out + "]";
}

std::string to_string(const CompleteGame& g) {
  return "n=" + std::to_string(g.voters()) + "; shiftminwin=" + family_string(g.shift_minimal_winning());
}

std::string to_string(const ExplicitGame& g) {
  return "n=" + std::to_string(g.voters()) + "; minwin=" + family_string(minimal_winning(g));
}

std::string to_string(const BoolCombo& g) { return node_string(g, g.root()); }

std::string to_string(const Game& g) {
  return std::visit([](const auto& x) { return to_string(x); }, g.repr());
}

// ---------------------------------------------------------------- tabulation

namespace {

// Up-closure of a family under the shift order, by increasing rank.
std::vector<std::uint64_t> shift_closure(int n, const std::vector<Coalition>& family) {
  const std::uint64_t size = std::uint64_t{1} << n;
  std::vector<std::uint64_t> table(table_words(n), 0);
  for (Coalition c : family) set_table_bit(table, c.bits());
  // rank(S) = sum over members i of (n + 1 - i); every upward step raises it
  const int max_rank = n * (n + 1) / 2;
  std::vector<std::uint32_t> start(max_rank + 2, 0);
  std::vector<int> rank(size);
  for (std::uint64_t s = 0; s < size; ++s) {
    int r = 0;
    for (std::uint64_t b = s; b != 0; b &= b - 1) r += n - std::countr_zero(b);
    rank[s] = r;
    ++start[r + 1];
  }
  std::partial_sum(start.begin(), start.end(), start.begin());
  std::vector<std::uint32_t> order(size);
  {
    std::vector<std::uint32_t> fill(start.begin(), start.end() - 1);
    for (std::uint64_t s = 0; s < size; ++s) order[fill[rank[s]]++] = static_cast<std::uint32_t>(s);
  }
  for (std::uint32_t s : order) {
    if (!table_bit(table, s)) continue;
    for (int b = 0; b < n; ++b) {
      const std::uint64_t bit = std::uint64_t{1} << b;
      if (!(s & bit)) {
        set_table_bit(table, s | bit);
      } else if (b > 0 && !(s & (bit >> 1))) {
        set_table_bit(table, (s ^ bit) | (bit >> 1));
      }
    }
  }
  return table;
}

}  // namespace

ExplicitGame to_explicit(const Game& g) {
  const int n = g.voters();
  if (n > kMaxExplicitVoters) {
    throw Error(Errc::kTooLarge, "cannot tabulate a game with " + std::to_string(n) + " voters (max " +
                                     std::to_string(kMaxExplicitVoters) + ")");
  }
  if (const auto* e = g.get_if<ExplicitGame>()) return *e;
  if (const auto* c = g.get_if<CompleteGame>()) {
    return ExplicitGame(n, shift_closure(n, c->shift_minimal_winning()));
  }
  std::vector<std::uint64_t> table(table_words(n), 0);
  const std::uint64_t size = std::uint64_t{1} << n;
  if (const auto* w = g.get_if<WeightedGame>()) {
    // Gray-code walk with an incrementally maintained weight sum
    const auto& weights = w->scaled_weights();
    const std::int64_t quota = w->scaled_quota();
    std::uint64_t code = 0;
    std::int64_t sum = 0;
    for (std::uint64_t i = 1; i < size; ++i) {
      const int b = std::countr_zero(i);
      code ^= std::uint64_t{1} << b;
      sum += (code >> b & 1U) ? weights[b] : -weights[b];
      if (sum >= quota) set_table_bit(table, code);
    }
    return ExplicitGame(n, std::move(table));
  }
  const auto& combo = std::get<BoolCombo>(g.repr());
  const auto& leaves = combo.leaves();
  std::vector<std::int64_t> sums(leaves.size(), 0);
  std::uint64_t code = 0;
  for (std::uint64_t i = 1; i < size; ++i) {
    const int b = std::countr_zero(i);
    code ^= std::uint64_t{1} << b;
    const bool added = code >> b & 1U;
    for (std::size_t l = 0; l < leaves.size(); ++l) {
      const std::int64_t w = leaves[l].scaled_weights()[b];
      sums[l] += added ? w : -w;
    }
    if (combo.evaluate_tree([&](std::size_t l) { return sums[l] >= leaves[l].scaled_quota(); })) {
      set_table_bit(table, code);
    }
  }
  return ExplicitGame(n, std::move(table));
}

// ---------------------------------------------------------------- structure

Desirability desirability(const ExplicitGame& g, int i, int j) {
  const int n = g.voters();
  if (i == j || i < 1 || j < 1 || i > n || j > n) {
    throw Error(Errc::kInvalidArgument, "desirability needs two distinct voters in 1..n");
  }
  const std::uint64_t bi = std::uint64_t{1} << (i - 1);
  const std::uint64_t bj = std::uint64_t{1} << (j - 1);
  bool geq = true;
  bool leq = true;
  const std::uint64_t size = g.table_size();
  for (std::uint64_t s = 0; s < size && (geq || leq); ++s) {
    if (s & (bi | bj)) continue;
    const bool with_i = g.winning(Coalition(s | bi));
    const bool with_j = g.winning(Coalition(s | bj));
    if (with_i < with_j) geq = false;
    if (with_j < with_i) leq = false;
  }
  if (geq && leq) return Desirability::kEqual;
  if (geq) return Desirability::kGreater;
  if (leq) return Desirability::kLess;
  return Desirability::kIncomparable;
}

std::optional<std::vector<int>> is_complete(const ExplicitGame& g) {
  const int n = g.voters();
  std::vector<std::vector<Desirability>> rel(n + 1, std::vector<Desirability>(n + 1, Desirability::kEqual));
  for (int i = 1; i <= n; ++i) {
    for (int j = i + 1; j <= n; ++j) {
      const Desirability d = desirability(g, i, j);
      if (d == Desirability::kIncomparable) return std::nullopt;
      rel[i][j] = d;
      rel[j][i] = d == Desirability::kGreater ? Desirability::kLess
                  : d == Desirability::kLess  ? Desirability::kGreater
                                              : d;
    }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return rel[a][b] == Desirability::kGreater; });
  return order;
}

ExplicitGame permute(const ExplicitGame& g, std::span<const int> order) {
  const int n = g.voters();
  if (static_cast<int>(order.size()) != n) throw Error(Errc::kInvalidArgument, "permutation size mismatch");
  std::vector<std::uint64_t> table(table_words(n), 0);
  const std::uint64_t size = g.table_size();
  for (std::uint64_t s = 0; s < size; ++s) {
    if (!g.winning(Coalition(s))) continue;
    std::uint64_t t = 0;
    for (int k = 0; k < n; ++k) {
      if ((s >> (order[k] - 1)) & 1U) t |= std::uint64_t{1} << k;
    }
    set_table_bit(table, t);
  }
  return ExplicitGame::unchecked(n, std::move(table));
}

CompleteGame shift_minimal_winning(const ExplicitGame& g) {
  const int n = g.voters();
  for (int i = 1; i < n; ++i) {
    const Desirability d = desirability(g, i, i + 1);
    if (d != Desirability::kGreater && d != Desirability::kEqual) {
      throw Error(Errc::kInvalidArgument,
                  "game is not complete with voters ordered by desirability (voter " +
                      std::to_string(i) + " vs " + std::to_string(i + 1) + ")");
    }
  }
  std::vector<Coalition> family;
  const std::uint64_t size = g.table_size();
  for (std::uint64_t s = 1; s < size; ++s) {
    if (!g.winning(Coalition(s))) continue;
    bool minimal = true;
    for (int b = 0; b < n && minimal; ++b) {
      const std::uint64_t bit = std::uint64_t{1} << b;
      if (!(s & bit)) continue;
      if (g.winning(Coalition(s ^ bit))) minimal = false;
      if (b + 1 < n && !(s & (bit << 1)) && g.winning(Coalition((s ^ bit) | (bit << 1)))) minimal = false;
    }
    if (minimal) family.emplace_back(s);
  }
  return CompleteGame(n, std::move(family));
}

std::vector<Coalition> shift_maximal_losing(const ExplicitGame& g) {
  const int n = g.voters();
  std::vector<Coalition> out;
  const std::uint64_t size = g.table_size();
  for (std::uint64_t t = 0; t < size; ++t) {
    if (g.winning(Coalition(t))) continue;
    bool maximal = true;
    for (int b = 0; b < n && maximal; ++b) {
      const std::uint64_t bit = std::uint64_t{1} << b;
      if (!(t & bit)) {
        if (!g.winning(Coalition(t | bit))) maximal = false;
      } else if (b > 0 && !(t & (bit >> 1)) && !g.winning(Coalition((t ^ bit) | (bit >> 1)))) {
        maximal = false;
      }
    }
    if (maximal) out.emplace_back(t);
  }
  return out;
}

std::vector<Coalition> minimal_winning(const ExplicitGame& g) {
  std::vector<Coalition> out;
  const std::uint64_t size = g.table_size();
  for (std::uint64_t s = 1; s < size; ++s) {
    if (!g.winning(Coalition(s))) continue;
    bool minimal = true;
    for (std::uint64_t b = s; b != 0 && minimal; b &= b - 1) {
      if (g.winning(Coalition(s & ~(b & -b)))) minimal = false;
    }
    if (minimal) out.emplace_back(s);
  }
  std::sort(out.begin(), out.end(), member_list_less);
  return out;
}

std::vector<Coalition> maximal_losing(const ExplicitGame& g) {
  std::vector<Coalition> out;
  const std::uint64_t size = g.table_size();
  const std::uint64_t all = Coalition::all(g.voters()).bits();
  for (std::uint64_t t = 0; t < size; ++t) {
    if (g.winning(Coalition(t))) continue;
    bool maximal = true;
    for (std::uint64_t rest = all & ~t; rest != 0 && maximal; rest &= rest - 1) {
      if (!g.winning(Coalition(t | (rest & -rest)))) maximal = false;
    }
    if (maximal) out.emplace_back(t);
  }
  std::sort(out.begin(), out.end(), member_list_less);
  return out;
}

bool is_null_voter(const ExplicitGame& g, int voter) {
  bool null = true;
  detail::for_each_pair_word(g.words(), g.voters(), voter - 1,
                             [&](std::size_t, std::uint64_t lo, std::uint64_t hi) {
                               if (lo != hi) null = false;
                             });
  return null;
}

int null_voter_count(const ExplicitGame& g) {
  int count = 0;
  for (int i = 1; i <= g.voters(); ++i) count += is_null_voter(g, i);
  return count;
}

// ---------------------------------------------------------------- algebra

Game add_null_voters(const Game& g, int k) {
  if (k < 0) throw Error(Errc::kInvalidArgument, "null voter count must be non-negative");
  if (k == 0) return g;
  const int n = g.voters();
  require_voter_count(n + k);
  auto pad = [k](const WeightedGame& w) {
    std::vector<Rational> weights = w.weights();
    weights.resize(weights.size() + k, Rational(0));
    return WeightedGame(w.quota(), std::move(weights));
  };
  if (const auto* w = g.get_if<WeightedGame>()) return Game(pad(*w));
  if (const auto* c = g.get_if<BoolCombo>()) {
    std::vector<WeightedGame> leaves;
    for (const auto& leaf : c->leaves()) leaves.push_back(pad(leaf));
    return Game(BoolCombo(std::move(leaves), c->root()));
  }
  if (const auto* c = g.get_if<CompleteGame>()) return Game(CompleteGame(n + k, c->shift_minimal_winning()));
  const auto& e = std::get<ExplicitGame>(g.repr());
  if (n + k > kMaxExplicitVoters) throw Error(Errc::kTooLarge, "too many voters for an explicit table");
  std::vector<std::uint64_t> table(table_words(n + k), 0);
  const std::uint64_t size = std::uint64_t{1} << (n + k);
  const std::uint64_t mask = Coalition::all(n).bits();
  for (std::uint64_t s = 0; s < size; ++s) {
    if (e.winning(Coalition(s & mask))) set_table_bit(table, s);
  }
  return Game(ExplicitGame(n + k, std::move(table)));
}

namespace {

Game combine(const Game& a, const Game& b, ComboOp op) {
  if (a.voters() != b.voters()) {
    throw Error(Errc::kInvalidArgument, "cannot combine games with different voter counts");
  }
  auto as_combo = [](const Game& g, std::vector<WeightedGame>& leaves) -> std::optional<ComboNode> {
    if (const auto* w = g.get_if<WeightedGame>()) {
      leaves.push_back(*w);
      return ComboNode{ComboOp::kLeaf, leaves.size() - 1, {}};
    }
    if (const auto* c = g.get_if<BoolCombo>()) {
      const std::size_t offset = leaves.size();
      leaves.insert(leaves.end(), c->leaves().begin(), c->leaves().end());
      ComboNode root = c->root();
      auto shift = [&](const auto& self, ComboNode& node) -> void {
        if (node.op == ComboOp::kLeaf) node.leaf += offset;
        for (auto& child : node.operands) self(self, child);
      };
      shift(shift, root);
      return root;
    }
    return std::nullopt;
  };
  std::vector<WeightedGame> leaves;
  auto left = as_combo(a, leaves);
  auto right = as_combo(b, leaves);
  if (left && right) {
    ComboNode root{op, 0, {}};
    root.operands.push_back(std::move(*left));
    root.operands.push_back(std::move(*right));
    return Game(BoolCombo(std::move(leaves), std::move(root)));
  }
  const ExplicitGame x = to_explicit(a);
  const ExplicitGame y = to_explicit(b);
  std::vector<std::uint64_t> table(x.words().begin(), x.words().end());
  for (std::size_t i = 0; i < table.size(); ++i) {
    table[i] = op == ComboOp::kAnd ? (table[i] & y.words()[i]) : (table[i] | y.words()[i]);
  }
  return Game(ExplicitGame(x.voters(), std::move(table)));
}

bool table_less(std::span<const std::uint64_t> a, std::span<const std::uint64_t> b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == b[i]) continue;
    const std::uint64_t diff = a[i] ^ b[i];
    return (a[i] & (diff & -diff)) == 0;
  }
  return false;
}

}  // namespace

Game conjunction(const Game& a, const Game& b) { return combine(a, b, ComboOp::kAnd); }
Game disjunction(const Game& a, const Game& b) { return combine(a, b, ComboOp::kOr); }

ExplicitGame canonical(const ExplicitGame& g) {
  if (auto order = is_complete(g)) return permute(g, *order);
  const int n = g.voters();
  if (n > 7) {
    throw Error(Errc::kUnsupported, "canonical form of a non-complete game needs n <= 7");
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 1);
  ExplicitGame best = g;
  do {
    ExplicitGame candidate = permute(g, order);
    if (table_less(candidate.words(), best.words())) best = std::move(candidate);
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace votekit
