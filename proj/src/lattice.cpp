#include "affdbg/lattice.hpp"

#include <algorithm>
#include <cstdlib>
#include <utility>

namespace affdbg {

IntMatrix identity_matrix(int n) {
  IntMatrix m(n, std::vector<long long>(n, 0));
  for (int i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

IntMatrix mat_mul(const IntMatrix& a, const IntMatrix& b) {
  size_t m = a.size(), k = b.size(), n = k ? b[0].size() : 0;
  IntMatrix c(m, std::vector<long long>(n, 0));
  for (size_t i = 0; i < m; ++i)
    for (size_t t = 0; t < k; ++t) {
      if (!a[i][t]) continue;
      for (size_t j = 0; j < n; ++j) c[i][j] = add_ck(c[i][j], mul_ck(a[i][t], b[t][j]));
    }
  return c;
}

IntMatrix transpose(const IntMatrix& a) {
  if (a.empty()) return {};
  IntMatrix t(a[0].size(), std::vector<long long>(a.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[0].size(); ++j) t[j][i] = a[i][j];
  return t;
}

Coweight mat_apply(const IntMatrix& a, const Coweight& x) {
  Coweight r(static_cast<int>(a.size()));
  for (size_t i = 0; i < a.size(); ++i) {
    long long s = 0;
    for (int j = 0; j < x.n; ++j)
      if (a[i][j]) s = add_ck(s, mul_ck(a[i][j], x[j]));
    r[static_cast<int>(i)] = s;
  }
  return r;
}

bool is_identity(const IntMatrix& a) {
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a[i].size(); ++j)
      if (a[i][j] != (i == j ? 1 : 0)) return false;
  return true;
}

namespace {

void row_op(IntMatrix& m, size_t dst, size_t src, long long q) {  // row dst -= q*row src
  if (!q) return;
  for (size_t j = 0; j < m[dst].size(); ++j) m[dst][j] = sub_ck(m[dst][j], mul_ck(q, m[src][j]));
}
void col_op(IntMatrix& m, size_t dst, size_t src, long long q) {  // col dst -= q*col src
  if (!q) return;
  for (auto& row : m) row[dst] = sub_ck(row[dst], mul_ck(q, row[src]));
}
void swap_cols(IntMatrix& m, size_t a, size_t b) {
  if (a == b) return;
  for (auto& row : m) std::swap(row[a], row[b]);
}

}  // namespace

SmithForm smith_normal_form(const IntMatrix& a0) {
  SmithForm sf;
  IntMatrix a = a0;
  size_t m = a.size();
  size_t n = m ? a[0].size() : 0;
  sf.U = identity_matrix(static_cast<int>(m));
  sf.V = identity_matrix(static_cast<int>(n));
  size_t t = 0;
  for (; t < std::min(m, n); ++t) {
    while (true) {
      // smallest nonzero entry of the lower-right block becomes the pivot
      long long best = 0;
      size_t bi = t, bj = t;
      for (size_t i = t; i < m; ++i)
        for (size_t j = t; j < n; ++j)
          if (a[i][j] && (best == 0 || std::llabs(a[i][j]) < best)) {
            best = std::llabs(a[i][j]);
            bi = i;
            bj = j;
          }
      if (best == 0) goto done;
      std::swap(a[t], a[bi]);
      std::swap(sf.U[t], sf.U[bi]);
      swap_cols(a, t, bj);
      swap_cols(sf.V, t, bj);
      bool dirty = false;
      for (size_t i = t + 1; i < m; ++i) {
        long long q = floor_div(a[i][t], a[t][t]);
        row_op(a, i, t, q);
        row_op(sf.U, i, t, q);
        if (a[i][t]) dirty = true;
      }
      for (size_t j = t + 1; j < n; ++j) {
        long long q = floor_div(a[t][j], a[t][t]);
        col_op(a, j, t, q);
        col_op(sf.V, j, t, q);
        if (a[t][j]) dirty = true;
      }
      if (dirty) continue;
      // divisibility: fold an offending row into the pivot row
      size_t bad = m;
      for (size_t i = t + 1; i < m && bad == m; ++i)
        for (size_t j = t + 1; j < n; ++j)
          if (a[i][j] % a[t][t]) {
            bad = i;
            break;
          }
      if (bad == m) break;
      row_op(a, t, bad, -1);
      row_op(sf.U, t, bad, -1);
    }
    if (a[t][t] < 0) {
      for (auto& x : a[t]) x = -x;
      for (auto& x : sf.U[t]) x = -x;
    }
    sf.d.push_back(a[t][t]);
  }
done:
  sf.rank = static_cast<int>(sf.d.size());
  return sf;
}

std::optional<IntSolution> solve_integer(const IntMatrix& a, const std::vector<long long>& b) {
  size_t m = a.size();
  size_t n = m ? a[0].size() : 0;
  SmithForm sf = smith_normal_form(a);
  std::vector<long long> c(m, 0);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = 0; j < m; ++j) c[i] = add_ck(c[i], mul_ck(sf.U[i][j], b[j]));
  std::vector<long long> y(n, 0);
  for (size_t i = 0; i < m; ++i) {
    if (static_cast<int>(i) < sf.rank) {
      if (c[i] % sf.d[i]) return std::nullopt;
      y[i] = c[i] / sf.d[i];
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  IntSolution sol;
  sol.particular.assign(n, 0);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) sol.particular[i] = add_ck(sol.particular[i], mul_ck(sf.V[i][j], y[j]));
  for (size_t j = static_cast<size_t>(sf.rank); j < n; ++j) {
    std::vector<long long> k(n);
    for (size_t i = 0; i < n; ++i) k[i] = sf.V[i][j];
    sol.kernel.push_back(std::move(k));
  }
  return sol;
}

int rank_q(const IntMatrix& a) {
  if (a.empty()) return 0;
  return smith_normal_form(a).rank;
}

std::optional<std::vector<Rational>> solve_rational(const std::vector<std::vector<Rational>>& a0,
                                                    const std::vector<Rational>& b0) {
  size_t m = a0.size();
  size_t n = m ? a0[0].size() : 0;
  std::vector<std::vector<Rational>> a = a0;
  for (size_t i = 0; i < m; ++i) a[i].push_back(b0[i]);
  std::vector<size_t> pivcol;
  size_t row = 0;
  for (size_t col = 0; col < n && row < m; ++col) {
    size_t p = row;
    while (p < m && a[p][col].num == 0) ++p;
    if (p == m) continue;
    std::swap(a[p], a[row]);
    Rational inv = Rational(1) / a[row][col];
    for (auto& x : a[row]) x = x * inv;
    for (size_t i = 0; i < m; ++i) {
      if (i == row || a[i][col].num == 0) continue;
      Rational f = a[i][col];
      for (size_t j = col; j <= n; ++j) a[i][j] = a[i][j] - f * a[row][j];
    }
    pivcol.push_back(col);
    ++row;
  }
  if (pivcol.size() != n) throw InternalError("solve_rational: matrix lacks full column rank");
  for (size_t i = row; i < m; ++i)
    if (a[i][n].num != 0) return std::nullopt;
  std::vector<Rational> x(n);
  for (size_t i = 0; i < n; ++i) x[pivcol[i]] = a[i][n];
  return x;
}

LatticeQuotient::LatticeQuotient(int r, const std::vector<Coweight>& gens) : r_(r) {
  IntMatrix a(r, std::vector<long long>(gens.size(), 0));
  for (size_t j = 0; j < gens.size(); ++j)
    for (int i = 0; i < r; ++i) a[i][j] = gens[j][i];
  SmithForm sf;
  if (gens.empty()) {
    sf.U = identity_matrix(r);
  } else {
    sf = smith_normal_form(a);
  }
  U_ = sf.U;
  for (int i = 0; i < r; ++i) {
    if (i < sf.rank) {
      if (sf.d[i] > 1) {
        torsion_rows_.push_back(i);
        torsion_.push_back(sf.d[i]);
      }
    } else {
      free_rows_.push_back(i);
    }
  }
  free_rank_ = static_cast<int>(free_rows_.size());
  // U^{-1} via solving, needed for lift()
  Uinv_ = IntMatrix(r, std::vector<long long>(r, 0));
  for (int j = 0; j < r; ++j) {
    std::vector<long long> e(r, 0);
    e[j] = 1;
    auto sol = solve_integer(U_, e);
    AFFDBG_ASSERT(sol.has_value(), "unimodular inverse");
    for (int i = 0; i < r; ++i) Uinv_[i][j] = sol->particular[i];
  }
}

std::vector<long long> LatticeQuotient::class_of(const Coweight& x) const {
  std::vector<long long> out;
  out.reserve(torsion_rows_.size() + free_rows_.size());
  auto rowdot = [&](int i) {
    long long s = 0;
    for (int j = 0; j < r_; ++j) s = add_ck(s, mul_ck(U_[i][j], x[j]));
    return s;
  };
  for (size_t t = 0; t < torsion_rows_.size(); ++t) out.push_back(mod_pos(rowdot(torsion_rows_[t]), torsion_[t]));
  for (int i : free_rows_) out.push_back(rowdot(i));
  return out;
}

bool LatticeQuotient::contains(const Coweight& x) const {
  for (long long c : class_of(x))
    if (c) return false;
  return true;
}

long long LatticeQuotient::order() const {
  if (free_rank_) return 0;
  long long o = 1;
  for (long long d : torsion_) o = mul_ck(o, d);
  return o;
}

Coweight LatticeQuotient::lift(const std::vector<long long>& cls) const {
  Coweight y(r_);
  size_t k = 0;
  for (size_t t = 0; t < torsion_rows_.size(); ++t) y[torsion_rows_[t]] = cls[k++];
  for (int i : free_rows_) y[i] = cls[k++];
  return mat_apply(Uinv_, y);
}

std::vector<std::vector<long long>> LatticeQuotient::elements() const {
  if (!finite()) throw PreconditionError("lattice quotient is infinite");
  std::vector<std::vector<long long>> out{{}};
  for (long long d : torsion_) {
    std::vector<std::vector<long long>> nxt;
    for (auto& p : out)
      for (long long c = 0; c < d; ++c) {
        auto q = p;
        q.push_back(c);
        nxt.push_back(std::move(q));
      }
    out = std::move(nxt);
  }
  return out;
}

}  // namespace affdbg
