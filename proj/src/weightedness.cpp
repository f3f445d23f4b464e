#include "votekit/weightedness.hpp"

#include "votekit/error.hpp"

#include <numeric>

namespace votekit {

namespace {

using i128 = __int128;

// One constraint coef . (w_1..w_n, q) >= rhs, rhs in {0, 1}.
struct Constraint {
  std::vector<std::int64_t> coef;
  std::int64_t rhs;
};

std::int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) {
    throw Error(Errc::kTooLarge, "weightedness test overflowed 64-bit tableau entries");
  }
  return static_cast<std::int64_t>(v);
}

// Phase-one simplex on an integer tableau (Edmonds/Bareiss pivoting: each
// entry is the true value times the last pivot, divisions are exact). Bland's
// rule guarantees termination. Returns the basic solution scaled by the
// final pivot when the system is feasible.
class FeasibilitySolver {
 public:
  FeasibilitySolver(int vars, const std::vector<Constraint>& rows) : vars_(vars) {
    const int m = static_cast<int>(rows.size());
    int artificials = 0;
    for (const auto& r : rows) artificials += r.rhs > 0;
    cols_ = vars_ + m + artificials;
    rhs_col_ = cols_;
    width_ = cols_ + 1;
    table_.assign(static_cast<std::size_t>(m + 1) * width_, 0);
    basis_.resize(m);
    int art = 0;
    for (int i = 0; i < m; ++i) {
      const auto& r = rows[i];
      if (r.rhs == 0) {
        for (int j = 0; j < vars_; ++j) at(i, j) = -r.coef[j];
        at(i, vars_ + i) = 1;
        basis_[i] = vars_ + i;
      } else {
        for (int j = 0; j < vars_; ++j) at(i, j) = r.coef[j];
        at(i, vars_ + i) = -1;
        const int col = vars_ + m + art++;
        at(i, col) = 1;
        at(i, rhs_col_) = r.rhs;
        basis_[i] = col;
        for (int j = 0; j < width_; ++j) {
          if (j != col) at(m, j) -= at(i, j);
        }
      }
    }
    rows_ = m;
  }

  std::optional<std::vector<std::int64_t>> solve() {
    for (int iteration = 0;; ++iteration) {
      if (iteration > 100000) throw Error(Errc::kTooLarge, "simplex iteration limit reached");
      int entering = -1;
      for (int j = 0; j < cols_; ++j) {
        if (at(rows_, j) < 0) {
          entering = j;
          break;
        }
      }
      if (entering < 0) break;
      int leave = -1;
      for (int i = 0; i < rows_; ++i) {
        const std::int64_t a = at(i, entering);
        if (a <= 0) continue;
        if (leave < 0) {
          leave = i;
          continue;
        }
        const i128 lhs = static_cast<i128>(at(i, rhs_col_)) * at(leave, entering);
        const i128 rhs = static_cast<i128>(at(leave, rhs_col_)) * a;
        if (lhs < rhs || (lhs == rhs && basis_[i] < basis_[leave])) leave = i;
      }
      // phase-one objective is bounded below by zero
      if (leave < 0) throw Error(Errc::kInvalidArgument, "unbounded phase-one problem");
      pivot(leave, entering);
    }
    if (at(rows_, rhs_col_) != 0) return std::nullopt;
    std::vector<std::int64_t> x(vars_, 0);
    for (int i = 0; i < rows_; ++i) {
      if (basis_[i] < vars_) x[basis_[i]] = at(i, rhs_col_);
    }
    return x;
  }

 private:
  std::int64_t& at(int r, int c) { return table_[static_cast<std::size_t>(r) * width_ + c]; }

  void pivot(int r, int c) {
    const std::int64_t p = at(r, c);
    for (int i = 0; i <= rows_; ++i) {
      if (i == r) continue;
      const std::int64_t factor = at(i, c);
      for (int j = 0; j < width_; ++j) {
        const i128 v = static_cast<i128>(at(i, j)) * p - static_cast<i128>(factor) * at(r, j);
        at(i, j) = narrow(v / last_pivot_);
      }
    }
    last_pivot_ = p;
    basis_[r] = c;
  }

  int vars_;
  int cols_ = 0;
  int rhs_col_ = 0;
  int width_ = 0;
  int rows_ = 0;
  std::int64_t last_pivot_ = 1;
  std::vector<std::int64_t> table_;
  std::vector<int> basis_;
};

Constraint winning_row(int n, Coalition s) {
  Constraint c{std::vector<std::int64_t>(n + 1, 0), 0};
  for (int v : s.members()) c.coef[v - 1] = 1;
  c.coef[n] = -1;
  return c;
}

Constraint losing_row(int n, Coalition t) {
  Constraint c{std::vector<std::int64_t>(n + 1, 0), 1};
  for (int v : t.members()) c.coef[v - 1] = -1;
  c.coef[n] = 1;
  return c;
}

std::optional<IntegerRepresentation> solve(int n, const std::vector<Constraint>& rows,
                                           const ExplicitGame& g) {
  auto x = FeasibilitySolver(n + 1, rows).solve();
  if (!x) return std::nullopt;
  std::int64_t common = 0;
  for (std::int64_t v : *x) common = std::gcd(common, v);
  IntegerRepresentation rep;
  rep.quota = (*x)[n] / common;
  for (int i = 0; i < n; ++i) rep.weights.push_back((*x)[i] / common);
  if (!represents(rep, g)) {
    throw Error(Errc::kInvalidArgument, "internal error: weightedness certificate failed verification");
  }
  return rep;
}

}  // namespace

WeightedGame IntegerRepresentation::to_game() const {
  std::vector<Rational> w(weights.begin(), weights.end());
  return WeightedGame(Rational(quota), std::move(w));
}

bool represents(const IntegerRepresentation& rep, const ExplicitGame& g) {
  const int n = g.voters();
  if (static_cast<int>(rep.weights.size()) != n || rep.quota <= 0) return false;
  const std::uint64_t size = g.table_size();
  std::int64_t sum = 0;
  std::uint64_t code = 0;
  if (g.winning(Coalition(0))) return false;
  for (std::uint64_t i = 1; i < size; ++i) {
    const int b = std::countr_zero(i);
    code ^= std::uint64_t{1} << b;
    sum += (code >> b & 1U) ? rep.weights[b] : -rep.weights[b];
    if ((sum >= rep.quota) != g.winning(Coalition(code))) return false;
  }
  return true;
}

std::optional<IntegerRepresentation> weighted_certificate(const ExplicitGame& g) {
  const int n = g.voters();
  std::vector<Constraint> rows;
  for (Coalition s : minimal_winning(g)) rows.push_back(winning_row(n, s));
  for (Coalition t : maximal_losing(g)) rows.push_back(losing_row(n, t));
  return solve(n, rows, g);
}

std::optional<IntegerRepresentation> weighted_certificate_sorted(const ExplicitGame& g) {
  const int n = g.voters();
  std::vector<Constraint> rows;
  const CompleteGame c = shift_minimal_winning(g);
  for (Coalition s : c.shift_minimal_winning()) rows.push_back(winning_row(n, s));
  for (Coalition t : shift_maximal_losing(g)) rows.push_back(losing_row(n, t));
  for (int i = 0; i + 1 < n; ++i) {
    Constraint c{std::vector<std::int64_t>(n + 1, 0), 0};
    c.coef[i] = 1;
    c.coef[i + 1] = -1;
    rows.push_back(std::move(c));
  }
  return solve(n, rows, g);
}

std::optional<IntegerRepresentation> minimal_representation(const ExplicitGame& g,
                                                            std::int64_t max_quota) {
  const int n = g.voters();
  IntegerRepresentation rep;
  rep.weights.assign(n, 0);
  std::optional<IntegerRepresentation> best;
  std::int64_t best_sum = 0;
  // weights non-increasing, each at most the quota
  auto search = [&](const auto& self, int i, std::int64_t cap, std::int64_t sum) -> void {
    if (best && sum > best_sum) return;
    if (i == n) {
      if (sum < rep.quota) return;
      if (best && sum == best_sum) return;
      if (represents(rep, g)) {
        best = rep;
        best_sum = sum;
      }
      return;
    }
    for (std::int64_t w = 0; w <= cap; ++w) {
      rep.weights[i] = w;
      self(self, i + 1, w, sum + w);
    }
    rep.weights[i] = 0;
  };
  for (std::int64_t q = 1; q <= max_quota && !best; ++q) {
    rep.quota = q;
    search(search, 0, q, 0);
  }
  return best;
}

}  // namespace votekit
