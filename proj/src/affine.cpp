#include "affdbg/affine.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace affdbg {

std::string kappa_str(const std::vector<long long>& k) {
  std::string s = "[";
  for (size_t i = 0; i < k.size(); ++i) s += (i ? "," : "") + std::to_string(k[i]);
  return s + "]";
}

std::string ClassKey::str() const { return "w" + std::to_string(w) + ":" + kappa_str(cls); }

std::string BGPoint::key_str() const { return "nu=" + nu.str() + " kappa=" + kappa_str(kappa); }

namespace {

RatVec ratvec_from(const std::vector<Rational>& xs) {
  long long den = 1;
  for (auto& x : xs) den = lcm_ll(den, x.den);
  Coweight c(static_cast<int>(xs.size()));
  for (size_t i = 0; i < xs.size(); ++i) c[static_cast<int>(i)] = mul_ck(xs[i].num, den / xs[i].den);
  return RatVec(c, den);
}

}  // namespace

AffineWeyl::AffineWeyl(const RootDatum& d) : d_(d) {
  int l = d.ss_rank();
  for (int i = 0; i < l; ++i) {
    gens_.push_back(finite(d.s(i)));
    gen_roots_.push_back({d.simple(i), 0});
  }
  for (size_t c = 0; c < d.components().size(); ++c) {
    AffineRoot a{d.neg(d.highest_roots()[c]), 1};
    gen_roots_.push_back(a);
    gens_.push_back(reflection(a));
  }
  for (int g = 0; g < num_gens(); ++g) {
    if (g < l) {
      sigma_gen_.push_back(d.sigma_simple(g));
    } else {
      int c = g - l;
      int i = d.components()[c][0];
      sigma_gen_.push_back(l + d.component_of(d.sigma_simple(i)));
    }
  }
  for (int g = 0; g < num_gens(); ++g) {
    AFFDBG_ASSERT(length(gens_[g]) == 1, "simple affine reflection has length one");
    AFFDBG_ASSERT(sigma(gens_[g]) == gens_[sigma_gen_[g]], "sigma permutes simple affine reflections");
  }
  // Omega generators from the Smith presentation of pi_1
  const auto& q = d.pi1();
  size_t ncoords = q.torsion().size() + static_cast<size_t>(q.free_rank());
  for (size_t t = 0; t < ncoords; ++t) {
    std::vector<long long> e(ncoords, 0);
    e[t] = 1;
    AffineElement tau = omega_of_pi1(e);
    omega_gens_.push_back(tau);
    AffineElement ti = inverse(tau);
    if (ti != tau) omega_gens_.push_back(ti);
  }
  // quotients X / (sigma - w^{-1}) X for class keys
  int r = d.rank();
  conjq_.reserve(d.W_size());
  for (WIdx w = 0; w < d.W_size(); ++w) {
    const IntMatrix& mi = d.matrix(d.inv(w));
    std::vector<Coweight> g;
    for (int j = 0; j < r; ++j) {
      Coweight c(r);
      for (int i = 0; i < r; ++i) c[i] = d.sigma_matrix()[i][j] - mi[i][j];
      if (!c.is_zero()) g.push_back(c);
    }
    conjq_.emplace_back(r, g);
  }
}

AffineElement AffineWeyl::compose(const AffineElement& a, const AffineElement& b) const {
  return {d_.mul(a.w, b.w), d_.act(d_.inv(b.w), a.mu) + b.mu};
}

AffineElement AffineWeyl::inverse(const AffineElement& a) const { return {d_.inv(a.w), -d_.act(a.w, a.mu)}; }

AffineElement AffineWeyl::sigma(const AffineElement& a) const { return {d_.sigma_w(a.w), d_.sigma(a.mu)}; }

AffineElement AffineWeyl::sigma_inv(const AffineElement& a) const {
  return {d_.sigma_w_inv(a.w), d_.sigma_inv(a.mu)};
}

AffineElement AffineWeyl::sigma_conjugate(const AffineElement& x, const AffineElement& y) const {
  return compose(compose(inverse(y), x), sigma(y));
}

AffineRoot AffineWeyl::act(const AffineElement& x, const AffineRoot& a) const {
  return {d_.act_root(x.w, a.alpha), sub_ck(a.k, pairing(x.mu, d_.root(a.alpha)))};
}

int AffineWeyl::length(const AffineElement& x) const {
  long long s = 0;
  int N = d_.num_pos();
  for (int b = 0; b < N; ++b) {
    long long a = pairing(x.mu, d_.root(b)) + (d_.act_root(x.w, b) >= N ? 1 : 0);
    s += a < 0 ? -a : a;
  }
  return static_cast<int>(s);
}

std::string AffineWeyl::gen_name(int g) const {
  int l = d_.ss_rank();
  if (g < l) return "s" + std::to_string(g + 1);
  if (g == l) return "s0";
  return "s0_" + std::to_string(g - l + 1);
}

bool AffineWeyl::left_descent(const AffineElement& x, int g) const {
  const AffineRoot& a = gen_roots_[g];
  int gam = d_.act_root(d_.inv(x.w), a.alpha);
  long long k = a.k + pairing(x.mu, d_.root(gam));
  return k < (d_.is_pos(gam) ? 0 : 1);
}

bool AffineWeyl::right_descent(const AffineElement& x, int g) const {
  const AffineRoot& a = gen_roots_[g];
  int gam = d_.act_root(x.w, a.alpha);
  long long k = a.k - pairing(x.mu, d_.root(a.alpha));
  return k < (d_.is_pos(gam) ? 0 : 1);
}

std::pair<std::vector<int>, AffineElement> AffineWeyl::reduced_word(const AffineElement& x0) const {
  std::vector<int> word;
  AffineElement x = x0;
  int len = length(x);
  while (len > 0) {
    int g = 0;
    while (g < num_gens() && !left_descent(x, g)) ++g;
    AFFDBG_ASSERT(g < num_gens(), "element of positive length has a left descent");
    word.push_back(g);
    x = lmul(g, x);
    --len;
  }
  AFFDBG_ASSERT(length(x) == 0, "reduced word bookkeeping");
  return {word, x};
}

AffineElement AffineWeyl::reflection(const AffineRoot& a) const {
  int pa = d_.is_pos(a.alpha) ? a.alpha : d_.neg(a.alpha);
  return {d_.reflection(pa), d_.coroot(a.alpha) * a.k};
}

AffineElement AffineWeyl::reduce_to_omega(AffineElement x) const { return reduced_word(x).second; }

AffineElement AffineWeyl::omega_of_pi1(const std::vector<long long>& cls) const {
  return reduce_to_omega(translation(d_.pi1().lift(cls)));
}

bool AffineWeyl::bruhat_leq(const AffineElement& y0, const AffineElement& x0) const {
  if (kappa(y0) != kappa(x0)) return false;
  AffineElement y = y0, x = x0;
  int ly = length(y), lx = length(x);
  while (true) {
    if (ly > lx) return false;
    if (lx == 0) return y == x;
    int g = 0;
    while (!left_descent(x, g)) ++g;
    x = lmul(g, x);
    --lx;
    if (left_descent(y, g)) {
      y = lmul(g, y);
      --ly;
    }
  }
}

AffineElement AffineWeyl::demazure(const AffineElement& x, const AffineElement& y) const {
  auto [word, tau] = reduced_word(y);
  AffineElement z = x;
  for (int g : word)
    if (!right_descent(z, g)) z = rmul(z, g);
  return compose(z, tau);
}

long long AffineWeyl::lp_value(const AffineElement& x, WIdx v) const {
  return d_.pair_2rho(d_.act(d_.inv(v), x.mu)) - d_.length(v) + d_.length(d_.mul(x.w, v));
}

std::vector<WIdx> AffineWeyl::lp_set(const AffineElement& x) const {
  long long best = -(1LL << 60);
  std::vector<WIdx> out;
  for (WIdx v = 0; v < d_.W_size(); ++v) {
    long long val = lp_value(x, v);
    if (val > best) {
      best = val;
      out.clear();
    }
    if (val == best) out.push_back(v);
  }
  AFFDBG_ASSERT(best == length(x), "length-positive maximum equals the length");
  return out;
}

long long AffineWeyl::regularity(const AffineElement& x) const {
  long long m = -1;
  for (int b = 0; b < d_.num_pos(); ++b) {
    long long p = pairing(x.mu, d_.root(b));
    if (p < 0) p = -p;
    if (m < 0 || p < m) m = p;
  }
  return m;
}

RatVec AffineWeyl::newton_point(const AffineElement& x) const {
  AffineElement p = x, sx = x;
  int ord = d_.sigma_order();
  long long bound = static_cast<long long>(d_.W_size()) * ord;
  for (long long n = 1; n <= bound; ++n) {
    if (p.w == 0 && n % ord == 0) return RatVec(d_.dominantize(p.mu).first, n);
    sx = sigma(sx);
    p = compose(p, sx);
  }
  throw InternalError("newton point: power did not close up");
}

bool AffineWeyl::is_straight(const AffineElement& x) const {
  RatVec nu = newton_point(x);
  return nu.pair(d_.two_rho()) == Rational(length(x));
}

RatVec AffineWeyl::pi_J(const Coweight& mu, const std::vector<int>& J) const {
  for (int j : J)
    if (std::find(J.begin(), J.end(), d_.sigma_simple(j)) == J.end())
      throw PreconditionError("pi_J needs a sigma-stable subset");
  RatVec a = d_.sigma_average(mu);
  if (J.empty()) return a;
  size_t n = J.size();
  std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
  std::vector<Rational> rhs(n);
  for (size_t i = 0; i < n; ++i) {
    const Covector& ai = d_.root(d_.simple(J[i]));
    rhs[i] = a.pair(ai);
    for (size_t j = 0; j < n; ++j) m[i][j] = Rational(d_.pairing_matrix()[J[j]][J[i]]);
  }
  auto c = solve_rational(m, rhs);
  AFFDBG_ASSERT(c.has_value(), "pi_J system is nonsingular");
  std::vector<Rational> out(d_.rank());
  for (int k = 0; k < d_.rank(); ++k) {
    Rational v = a[k];
    for (size_t j = 0; j < n; ++j) v = v - (*c)[j] * Rational(d_.coroot(d_.simple(J[j]))[k]);
    out[k] = v;
  }
  return ratvec_from(out);
}

RatVec AffineWeyl::dominant_majorant(const RatVec& xi) const {
  if (d_.is_dominant(xi)) return xi;
  // The Cartan matrix has nonpositive off-diagonal entries, so the feasible
  // coefficient vectors form a meet-semilattice; its least element is tight
  // exactly on its support J. Try every sigma-stable J.
  int l = d_.ss_rank();
  std::optional<RatVec> best;
  Rational best_sum;
  for (unsigned mask = 1; mask < (1u << l); ++mask) {
    bool stable = true;
    for (int i = 0; i < l; ++i)
      if ((mask >> i & 1) && !(mask >> d_.sigma_simple(i) & 1)) stable = false;
    if (!stable) continue;
    std::vector<int> J;
    for (int i = 0; i < l; ++i)
      if (mask >> i & 1) J.push_back(i);
    size_t n = J.size();
    std::vector<std::vector<Rational>> m(n, std::vector<Rational>(n));
    std::vector<Rational> rhs(n);
    for (size_t i = 0; i < n; ++i) {
      rhs[i] = -xi.pair(d_.root(d_.simple(J[i])));
      for (size_t j = 0; j < n; ++j) m[i][j] = Rational(d_.pairing_matrix()[J[j]][J[i]]);
    }
    auto c = solve_rational(m, rhs);
    AFFDBG_ASSERT(c.has_value(), "Cartan submatrix is nonsingular");
    Rational sum;
    bool ok = true;
    for (auto& ci : *c) {
      if (ci < Rational(0)) ok = false;
      sum = sum + ci;
    }
    if (!ok) continue;
    std::vector<Rational> out(d_.rank());
    for (int k = 0; k < d_.rank(); ++k) {
      Rational v = xi[k];
      for (size_t j = 0; j < n; ++j) v = v + (*c)[j] * Rational(d_.coroot(d_.simple(J[j]))[k]);
      out[k] = v;
    }
    RatVec nu = ratvec_from(out);
    if (!d_.is_dominant(nu)) continue;
    if (!best || sum < best_sum) {
      best = nu;
      best_sum = sum;
    }
  }
  AFFDBG_ASSERT(best.has_value(), "a dominant majorant exists");
  return *best;
}

int AffineWeyl::defect_of_straight(const AffineElement& x) const {
  int r = d_.rank();
  IntMatrix ws = mat_mul(d_.matrix(x.w), d_.sigma_matrix());
  IntMatrix s1 = d_.sigma_matrix();
  for (int i = 0; i < r; ++i) {
    ws[i][i] -= 1;
    s1[i][i] -= 1;
  }
  return rank_q(ws) - rank_q(s1);
}

ClassKey AffineWeyl::class_key(const AffineElement& x) const {
  ClassKey best;
  bool have = false;
  for (WIdx u = 0; u < d_.W_size(); ++u) {
    WIdx su = d_.sigma_w(u);
    WIdx w2 = d_.mul(d_.mul(d_.inv(u), x.w), su);
    if (have && w2 > best.w) continue;
    Coweight mu2 = d_.act(d_.inv(su), x.mu);
    ClassKey k{w2, conjq_[w2].class_of(mu2)};
    if (!have || k < best) {
      best = std::move(k);
      have = true;
    }
  }
  return best;
}

// ---------------------------------------------------------------- text

namespace {

std::vector<long long> parse_int_list(const std::string& s, size_t& pos, char open, char close) {
  if (pos >= s.size() || s[pos] != open) throw ParseError("expected '" + std::string(1, open) + "' in '" + s + "'");
  ++pos;
  std::vector<long long> out;
  std::string cur;
  auto flush = [&] {
    size_t a = cur.find_first_not_of(" \t");
    if (a == std::string::npos) {
      cur.clear();
      return false;
    }
    size_t b = cur.find_last_not_of(" \t");
    std::string t = cur.substr(a, b - a + 1);
    try {
      size_t used = 0;
      out.push_back(std::stoll(t, &used));
      if (used != t.size()) throw ParseError("bad integer '" + t + "'");
    } catch (const std::logic_error&) {
      throw ParseError("bad integer '" + t + "'");
    }
    cur.clear();
    return true;
  };
  while (pos < s.size() && s[pos] != close) {
    if (s[pos] == ',') {
      if (!flush()) throw ParseError("empty list entry in '" + s + "'");
    } else {
      cur += s[pos];
    }
    ++pos;
  }
  if (pos >= s.size()) throw ParseError("unterminated list in '" + s + "'");
  ++pos;
  flush();
  return out;
}

}  // namespace

AffineElement AffineWeyl::parse(const std::string& s) const {
  size_t pos = s.find_first_not_of(" \t");
  if (pos == std::string::npos) throw ParseError("empty element");
  if (s.compare(pos, 2, "w:") == 0) {
    pos += 2;
    auto w = parse_int_list(s, pos, '[', ']');
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    if (s.compare(pos, 3, "mu:") != 0) throw ParseError("expected 'mu:' in '" + s + "'");
    pos += 3;
    auto mu = parse_int_list(s, pos, '[', ']');
    if (s.find_first_not_of(" \t", pos) != std::string::npos) throw ParseError("trailing text in '" + s + "'");
    if (static_cast<int>(mu.size()) != d_.rank()) throw ParseError("mu has the wrong length");
    std::vector<int> word;
    for (auto i : w) {
      if (i < 1 || i > d_.ss_rank()) throw ParseError("simple reflection index out of range");
      word.push_back(static_cast<int>(i) - 1);
    }
    return {d_.from_word(word), Coweight::from(mu)};
  }
  AffineElement x = identity();
  while (pos < s.size()) {
    char c = s[pos];
    if (std::isspace(static_cast<unsigned char>(c)) || c == '*' || c == '.') {
      ++pos;
      continue;
    }
    if (c == 't') {
      ++pos;
      auto mu = parse_int_list(s, pos, '[', ']');
      if (static_cast<int>(mu.size()) != d_.rank()) throw ParseError("translation has the wrong length");
      x = compose(x, translation(Coweight::from(mu)));
    } else if (c == 's') {
      ++pos;
      size_t st = pos;
      while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
      if (st == pos) throw ParseError("expected an index after 's' in '" + s + "'");
      int i = std::stoi(s.substr(st, pos - st));
      int g;
      if (i == 0) {
        int comp = 1;
        if (pos < s.size() && s[pos] == '_') {
          size_t st2 = ++pos;
          while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
          if (st2 == pos) throw ParseError("bad affine generator in '" + s + "'");
          comp = std::stoi(s.substr(st2, pos - st2));
        }
        if (comp < 1 || comp > static_cast<int>(d_.components().size())) throw ParseError("bad affine generator");
        g = d_.ss_rank() + comp - 1;
      } else {
        if (i > d_.ss_rank()) throw ParseError("simple reflection s" + std::to_string(i) + " out of range");
        g = i - 1;
      }
      x = compose(x, gens_[g]);
    } else if (s.compare(pos, 2, "w0") == 0) {
      pos += 2;
      x = compose(x, finite(d_.w0()));
    } else if (c == '1' || c == 'e') {
      ++pos;
    } else {
      throw ParseError("cannot parse element '" + s + "'");
    }
  }
  return x;
}

std::string AffineWeyl::format_word(const AffineElement& x) const {
  std::string s;
  if (x.w != 0) s = d_.word_str(x.w);
  if (!x.mu.is_zero()) s += (s.empty() ? "t" : " t") + x.mu.str();
  return s.empty() ? "1" : s;
}

std::string AffineWeyl::format_wmu(const AffineElement& x) const {
  std::string s = "w:[";
  const auto& w = d_.word(x.w);
  for (size_t k = 0; k < w.size(); ++k) s += (k ? "," : "") + std::to_string(w[k] + 1);
  return s + "] mu:" + x.mu.str();
}

std::string AffineWeyl::format_affine_word(const AffineElement& x) const {
  auto [word, tau] = reduced_word(x);
  std::string s;
  for (size_t k = 0; k < word.size(); ++k) s += (k ? " " : "") + gen_name(word[k]);
  if (tau != identity()) s += (s.empty() ? "" : " ") + std::string("tau{") + format_wmu(tau) + "}";
  return s.empty() ? "1" : s;
}

// ---------------------------------------------------------------- B(G)

std::optional<Coweight> BGTable::find_lambda(const RatVec& nu, const std::vector<long long>& kg) const {
  const RootDatum& d = aw_.datum();
  int r = d.rank(), l = d.ss_rank(), ord = d.sigma_order();
  // ord * nu must be integral
  Coweight target(r);
  for (int i = 0; i < r; ++i) {
    Rational v = nu[i] * Rational(ord);
    if (!v.is_integer()) return std::nullopt;
    target[i] = v.num;
  }
  // sigma-orbits on simple indices with their pairing totals
  std::vector<std::vector<int>> orbits;
  std::vector<int> seen(l, 0);
  for (int i = 0; i < l; ++i) {
    if (seen[i]) continue;
    std::vector<int> o;
    for (int j = i; !seen[j]; j = d.sigma_simple(j)) {
      seen[j] = 1;
      o.push_back(j);
    }
    orbits.push_back(o);
  }
  std::vector<long long> totals;
  for (auto& o : orbits) {
    Rational t = nu.pair(d.root(d.simple(o[0]))) * Rational(static_cast<long long>(o.size()));
    if (!t.is_integer() || t.num < 0) return std::nullopt;
    totals.push_back(t.num);
  }
  Coweight tlift = d.pi1_gamma().lift(kg);
  // unknowns: lambda (r), c (l), y (r)
  int nv = 2 * r + l;
  IntMatrix A;
  std::vector<long long> rhsfix;
  for (int i = 0; i < r; ++i) {  // orbit sum of lambda
    std::vector<long long> row(nv, 0);
    IntMatrix pw = identity_matrix(r);
    IntMatrix sum(r, std::vector<long long>(r, 0));
    for (int k = 0; k < ord; ++k) {
      for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) sum[a][b] += pw[a][b];
      pw = mat_mul(d.sigma_matrix(), pw);
    }
    for (int b = 0; b < r; ++b) row[b] = sum[i][b];
    A.push_back(row);
    rhsfix.push_back(target[i]);
  }
  for (int i = 0; i < r; ++i) {  // lambda - sum c a^v - (S - 1) y = tlift
    std::vector<long long> row(nv, 0);
    row[i] = 1;
    for (int j = 0; j < l; ++j) row[r + j] = -d.coroot(d.simple(j))[i];
    for (int b = 0; b < r; ++b) row[r + l + b] = -(d.sigma_matrix()[i][b] - (i == b ? 1 : 0));
    A.push_back(row);
    rhsfix.push_back(tlift[i]);
  }
  for (int i = 0; i < l; ++i) {  // pairings
    std::vector<long long> row(nv, 0);
    for (int b = 0; b < r; ++b) row[b] = d.root(d.simple(i))[b];
    A.push_back(row);
  }
  std::vector<long long> a(l, 0);
  std::optional<Coweight> found;
  std::function<void(size_t)> rec = [&](size_t oi) {
    if (found) return;
    if (oi == orbits.size()) {
      std::vector<long long> rhs = rhsfix;
      for (int i = 0; i < l; ++i) rhs.push_back(a[i]);
      auto sol = solve_integer(A, rhs);
      if (sol) {
        Coweight lam(r);
        for (int i = 0; i < r; ++i) lam[i] = sol->particular[i];
        found = lam;
      }
      return;
    }
    const auto& o = orbits[oi];
    std::function<void(size_t, long long)> comp = [&](size_t j, long long left) {
      if (found) return;
      if (j + 1 == o.size()) {
        a[o[j]] = left;
        rec(oi + 1);
        return;
      }
      for (long long v = left; v >= 0; --v) {
        a[o[j]] = v;
        comp(j + 1, left - v);
      }
    };
    comp(0, totals[oi]);
  };
  rec(0);
  if (found) {
    AFFDBG_ASSERT(d.is_dominant(*found), "lambda is dominant");
    AFFDBG_ASSERT(aw_.conv(*found) == nu, "conv(lambda) = nu");
  }
  return found;
}

void BGTable::grow(Layers& L, const std::vector<long long>& kg, long long upto) {
  if (L.layers.empty()) {
    const RootDatum& d = aw_.datum();
    Coweight lift = d.pi1_gamma().lift(kg);
    AffineElement tau = aw_.omega_of_pi1(d.pi1().class_of(lift));
    L.layers.push_back({tau});
    L.straight.emplace(std::make_pair(aw_.newton_point(tau), kg), tau);
  }
  while (static_cast<long long>(L.layers.size()) <= upto) {
    long long len = static_cast<long long>(L.layers.size());
    ElementSet next;
    for (const auto& y : L.layers.back())
      for (int g = 0; g < aw_.num_gens(); ++g)
        if (!aw_.left_descent(y, g)) next.insert(aw_.lmul(g, y));
    std::vector<AffineElement> layer(next.begin(), next.end());
    std::sort(layer.begin(), layer.end());
    for (const auto& x : layer) {
      RatVec nu = aw_.newton_point(x);
      if (nu.pair(aw_.datum().two_rho()) == Rational(len)) L.straight.emplace(std::make_pair(nu, kg), x);
    }
    L.layers.push_back(std::move(layer));
  }
}

BGPoint BGTable::point(const RatVec& nu, const std::vector<long long>& kg) {
  auto key = std::make_pair(nu, kg);
  {
    std::lock_guard<std::mutex> lk(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  BGPoint p;
  p.nu = nu;
  p.kappa = kg;
  p.lambda = find_lambda(nu, kg);
  if (p.lambda) {
    p.defect = 0;
    p.straight = aw_.translation(*p.lambda);
    p.resolved = true;
  } else {
    Rational len = nu.pair(aw_.datum().two_rho());
    if (len.is_integer() && len.num >= 0) {
      std::lock_guard<std::mutex> lk(mu_);
      Layers& L = layers_[kg];
      grow(L, kg, len.num);
      auto it = L.straight.find(key);
      if (it != L.straight.end()) {
        p.straight = it->second;
        p.defect = aw_.defect_of_straight(it->second);
        p.resolved = true;
      }
    }
  }
  std::lock_guard<std::mutex> lk(mu_);
  cache_.emplace(key, p);
  return p;
}

BGPoint BGTable::point_of(const AffineElement& x) {
  BGPoint p = point(aw_.newton_point(x), aw_.kappa_gamma(x));
  if (!p.resolved) throw InternalError("no straight representative found for the class of " + aw_.format_word(x));
  return p;
}

std::vector<BGPoint> BGTable::catalog(const std::vector<long long>& kg, long long bound) {
  std::vector<std::pair<RatVec, std::vector<long long>>> keys;
  {
    std::lock_guard<std::mutex> lk(mu_);
    Layers& L = layers_[kg];
    grow(L, kg, bound);
    for (auto& [k, x] : L.straight)
      if (k.first.pair(aw_.datum().two_rho()) <= Rational(bound)) keys.push_back(k);
  }
  std::vector<BGPoint> out;
  for (auto& k : keys) out.push_back(point(k.first, k.second));
  std::sort(out.begin(), out.end());
  return out;
}

BGPoint BGTable::basic(const std::vector<long long>& kg) {
  const RootDatum& d = aw_.datum();
  std::vector<int> all(d.ss_rank());
  for (int i = 0; i < d.ss_rank(); ++i) all[i] = i;
  RatVec nu = aw_.pi_J(d.pi1_gamma().lift(kg), all);
  BGPoint p = point(nu, kg);
  if (!p.resolved) throw InternalError("basic class has no straight representative");
  return p;
}

}  // namespace affdbg
