#include "affdbg/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <memory>
#include <sstream>

#include "affdbg/dbg.hpp"
#include "affdbg/hecke.hpp"

namespace affdbg {

nlohmann::json SuiteResult::to_json() const {
  return {{"name", name}, {"checks", checks}, {"failures", failures}, {"passed", passed()}, {"samples", samples}};
}

AffineElement random_element(const AffineWeyl& aw, std::mt19937_64& rng, int max_gens) {
  AffineElement x = aw.identity();
  const auto& om = aw.omega_generators();
  if (!om.empty() && rng() % 2) x = om[rng() % om.size()];
  int k = max_gens > 0 ? static_cast<int>(rng() % (max_gens + 1)) : 0;
  for (int i = 0; i < k; ++i) x = aw.lmul(static_cast<int>(rng() % aw.num_gens()), x);
  return x;
}

namespace {

struct Ctx {
  SuiteResult& r;
  std::mt19937_64 rng;

  void check(bool ok, const std::function<std::string()>& what) {
    ++r.checks;
    if (ok) return;
    ++r.failures;
    if (r.samples.size() < 5) r.samples.push_back(what());
  }
};

struct Env {
  RootDatum d;
  AffineWeyl aw;
  Dbg dbg;
  Hecke H;
  explicit Env(const std::string& type)
      : d(RootDatum::load_json({{"type", {type}}, {"lattice", "adjoint"}})), aw(d), dbg(d), H(aw) {}
};

std::string slice_diff(const WtsSlice& a, const WtsSlice& b) {
  std::ostringstream os;
  os << "lhs total " << a.total() << ", rhs total " << b.total();
  return os.str();
}

// wts is independent of the reflection order
void suite_order_invariance(Ctx& c) {
  for (const char* t : {"A1", "A2", "B2", "G2"}) {
    Env e(t);
    auto words = e.d.reduced_words(e.d.w0());
    for (WIdx u = 0; u < e.d.W_size(); ++u)
      for (WIdx v = 0; v < e.d.W_size(); ++v) {
        WtsSlice ref = e.dbg.wts_window(u, v, v, 0, 10);
        for (auto& w : words) {
          auto o = e.d.reflection_order_from_word(w);
          WtsSlice s = e.dbg.wts_window_order(u, v, o, e.d.num_pos(), 0, 10);
          c.check(s == ref, [&] { return std::string(t) + " u=" + e.d.word_str(u) + " v=" + e.d.word_str(v) + ": " + slice_diff(s, ref); });
        }
      }
  }
  // sampled rank 3
  for (const char* t : {"A3", "B3"}) {
    Env e(t);
    auto words = e.d.reduced_words(e.d.w0(), 400);
    for (int it = 0; it < 20; ++it) {
      WIdx u = c.rng() % e.d.W_size(), v = c.rng() % e.d.W_size();
      WtsSlice ref = e.dbg.wts_window(u, v, v, 0, 8);
      for (int k = 0; k < 3; ++k) {
        auto o = e.d.reflection_order_from_word(words[c.rng() % words.size()]);
        WtsSlice s = e.dbg.wts_window_order(u, v, o, e.d.num_pos(), 0, 8);
        c.check(s == ref, [&] { return std::string(t) + " u=" + e.d.word_str(u) + " v=" + e.d.word_str(v) + ": " + slice_diff(s, ref); });
      }
    }
  }
}

// simple affine reflection recursion, both cases
void suite_recursion(Ctx& c) {
  for (const char* t : {"A1", "A2", "B2", "G2"}) {
    Env e(t);
    int done = 0;
    while (done < 60) {
      WIdx u = c.rng() % e.d.W_size(), v = c.rng() % e.d.W_size(), vp = c.rng() % e.d.W_size();
      int g = static_cast<int>(c.rng() % e.aw.num_gens());
      if (e.d.is_pos(e.d.act_root(e.d.inv(vp), e.aw.gen_root(g).alpha))) continue;
      ++done;
      auto rc = dbg_recursion_check(e.dbg, e.aw, u, v, vp, g, 0, 10);
      c.check(rc.equal(), [&] {
        return std::string(t) + " u=" + e.d.word_str(u) + " v=" + e.d.word_str(v) + " v'=" + e.d.word_str(vp) + " " +
               e.aw.gen_name(g) + ": " + slice_diff(rc.lhs, rc.rhs);
      });
    }
  }
}

void suite_q0(Ctx& c) {
  for (const char* t : {"A1", "A2", "B2", "G2"}) {
    Env e(t);
    for (int it = 0; it < 40; ++it) {
      auto x = random_element(e.aw, c.rng, 8), y = random_element(e.aw, c.rng, 8);
      auto q0 = Hecke::at_q0(e.H.mul_basis(x, y));
      std::map<AffineElement, long long> want{{e.aw.compose(x, y), 1}};
      c.check(q0 == want, [&] { return std::string(t) + " x=" + e.aw.format_word(x) + " y=" + e.aw.format_word(y); });
    }
  }
}

void suite_associativity(Ctx& c) {
  for (const char* t : {"A1", "A2", "B2", "G2"}) {
    Env e(t);
    for (int it = 0; it < 25; ++it) {
      auto a = Hecke::basis(random_element(e.aw, c.rng, 8));
      auto b = Hecke::basis(random_element(e.aw, c.rng, 8));
      auto z = Hecke::basis(random_element(e.aw, c.rng, 8));
      // sums, so the check is not only on basis elements
      b[e.aw.gen(0)] += QPoly::monomial(1, 2);
      c.check(e.H.mul(e.H.mul(a, b), z) == e.H.mul(a, e.H.mul(b, z)),
              [&] { return std::string(t) + " x=" + e.aw.format_word(a.begin()->first); });
    }
  }
}

// degree/parity bound and independence of the reduction path
void suite_class_polys(Ctx& c) {
  for (const char* t : {"A1", "A2", "B2"}) {
    Env e(t);
    ClassPolyEngine ref(e.aw);
    std::vector<std::unique_ptr<ClassPolyEngine>> alt;
    for (int s = 0; s < 3; ++s) alt.push_back(std::make_unique<ClassPolyEngine>(e.aw, 0, c.rng()));
    for (int it = 0; it < 40; ++it) {
      auto x = random_element(e.aw, c.rng, 10);
      int lx = e.aw.length(x);
      auto f = ref.class_polynomials(x);
      for (auto& [k, p] : f) {
        int lo = ref.info(k).min_len;
        bool ok = p.degree() <= lx - lo;
        for (int deg = 0; deg <= p.degree(); ++deg)
          if (p.coeff(deg) && (lx - lo - deg) % 2) ok = false;
        c.check(ok, [&] { return std::string(t) + " x=" + e.aw.format_word(x) + " class " + k.str() + " f=" + p.str(); });
      }
      for (auto& a : alt)
        c.check(a->class_polynomials(x) == f, [&] { return std::string(t) + " reduction path dependence at x=" + e.aw.format_word(x); });
    }
  }
}

// n_{y,e} bounded by wts multiplicities
void suite_product_bound(Ctx& c) {
  for (const char* t : {"A1", "A2", "B2"}) {
    Env e(t);
    const RootDatum& d = e.d;
    for (int it = 0; it < 25; ++it) {
      auto x = random_element(e.aw, c.rng, 6), z = random_element(e.aw, c.rng, 6);
      auto prod = e.H.mul_basis(x, z);
      auto zinv = e.aw.inverse(z);
      auto lpx = e.aw.lp_set(x), lpz = e.aw.lp_set(z);
      for (auto& [target, p] : prod) {
        auto y = e.aw.compose(target, zinv);
        for (WIdx vx : lpx)
          for (WIdx vz : lpz) {
            Coweight om = d.act(d.inv(vx), x.mu - d.act(d.mul(d.inv(x.w), y.w), y.mu));
            auto m = e.dbg.wts_bounded_at(vx, d.mul(d.mul(d.inv(y.w), x.w), vx), d.mul(z.w, vz), om);
            for (int deg = 0; deg <= p.degree(); ++deg) {
              long long n = p.coeff(deg);
              long long bound = m.count(deg) ? m.at(deg) : 0;
              c.check(n <= bound, [&] {
                return std::string(t) + " x=" + e.aw.format_word(x) + " z=" + e.aw.format_word(z) + " y=" +
                       e.aw.format_word(y) + " e=" + std::to_string(deg);
              });
            }
          }
      }
    }
  }
}

Coweight coroot_sum(const RootDatum& d, const std::vector<int>& J, const std::vector<long long>& c) {
  Coweight s = d.zero();
  for (size_t i = 0; i < J.size(); ++i) s += d.coroot(d.simple(J[i])) * c[i];
  return s;
}

void for_coeffs(size_t n, long long hi, const std::function<void(const std::vector<long long>&)>& f) {
  std::vector<long long> c(n, 0);
  while (true) {
    f(c);
    size_t i = 0;
    while (i < n && c[i] == hi) c[i++] = 0;
    if (i == n) return;
    ++c[i];
  }
}

// special estimates (a), (b)
void suite_special_estimates(Ctx& c) {
  for (const char* t : {"A1", "A2", "B2", "G2"}) {
    Env e(t);
    const RootDatum& d = e.d;
    for (WIdx u = 0; u < d.W_size(); ++u)
      for (WIdx v = 0; v < d.W_size(); ++v) {
        WIdx uv = d.mul(d.inv(u), v);
        auto J = d.support(uv);
        int len = d.length(uv);
        Coweight rhoJ = d.zero();
        for (int k = 0; k < d.num_pos(); ++k) {
          bool in = true;
          for (int i = 0; i < d.ss_rank(); ++i)
            if (d.root_coeffs(k)[i] && std::find(J.begin(), J.end(), i) == J.end()) in = false;
          if (in) rhoJ += d.coroot(k);
        }
        auto [dq, wq] = d.qbg_distance_weight(u, v);
        for_coeffs(J.size(), 2, [&](const std::vector<long long>& cf) {
          Coweight add = coroot_sum(d, J, cf);
          if (dq == len && d.in_coroot_span(wq, J)) {
            auto m = e.dbg.wts_at(u, v, wq + add);
            c.check(m.count(len) > 0, [&] { return std::string(t) + " (a) u=" + d.word_str(u) + " v=" + d.word_str(v); });
          }
          auto m = e.dbg.wts_at(u, v, rhoJ + add);
          c.check(m.count(len) > 0, [&] { return std::string(t) + " (b) u=" + d.word_str(u) + " v=" + d.word_str(v); });
        });
      }
  }
}

// minimum of wts(u => v) against the quantum Bruhat graph distance and weight
void suite_qbg_minimum(Ctx& c) {
  for (const char* t : {"A1", "A2", "B2", "G2", "A3"}) {
    Env e(t);
    const RootDatum& d = e.d;
    for (WIdx u = 0; u < d.W_size(); ++u)
      for (WIdx v = 0; v < d.W_size(); ++v) {
        auto [dq, wq] = d.qbg_distance_weight(u, v);
        long long h = d.pair_2rho(wq);
        WtsSlice s = e.dbg.wts_window(u, v, v, h, h + 4);
        // wq is the least weight; at wq the longest paths have length dq and are unique
        bool ok = true;
        for (auto& [k, m] : s.entries)
          if (!d.leq(RatVec(wq), RatVec(k.first))) ok = false;
        auto at = s.at(wq);
        if (at.empty() || at.rbegin()->first != dq || at.rbegin()->second != 1) ok = false;
        c.check(ok, [&] { return std::string(t) + " u=" + d.word_str(u) + " v=" + d.word_str(v) + " wt=" + wq.str(); });
        // nothing strictly below in the 2rho-grading
        if (h > 0) {
          WtsSlice below = e.dbg.wts_window(u, v, v, 0, h - 1);
          c.check(below.entries.empty(), [&] { return std::string(t) + " entries below qbg weight, u=" + d.word_str(u) + " v=" + d.word_str(v); });
        }
      }
  }
}

void suite_support_bound(Ctx& c) {
  for (const char* t : {"A1", "A2", "B2", "G2", "A3"}) {
    Env e(t);
    const RootDatum& d = e.d;
    for (WIdx w = 0; w < d.W_size(); ++w) {
      auto J = d.support(w);
      WtsSlice s = e.dbg.wts_window(0, w, w, 0, 12);
      for (auto& [k, m] : s.entries)
        c.check(d.in_coroot_span(k.first, J) && k.second <= d.length(w),
                [&] { return std::string(t) + " w=" + d.word_str(w) + " omega=" + k.first.str(); });
    }
  }
}

// wts(v_x => u1 ~> u2) in terms of Y(x, u2)
void suite_wts_y_identity(Ctx& c) {
  for (const char* t : {"A1", "A2", "B2"}) {
    Env e(t);
    const RootDatum& d = e.d;
    int done = 0;
    while (done < 30) {
      AffineElement x{static_cast<WIdx>(c.rng() % d.W_size()), d.zero()};
      for (int i = 0; i < d.rank(); ++i) x.mu[i] = static_cast<long long>(c.rng() % 5) - 2;
      if (e.aw.length(x) > 7) continue;
      ++done;
      auto lp = e.aw.lp_set(x);
      WIdx vx = lp[c.rng() % lp.size()];
      WIdx u1 = c.rng() % d.W_size(), u2 = c.rng() % d.W_size();
      const long long H = 8;
      WtsSlice lhs = e.dbg.wts_window(vx, u1, u2, 0, H);
      WtsSlice rhs;
      Coweight ax = d.act(d.inv(vx), x.mu);
      for (auto& [ye, m] : e.H.y_multiset(x, u2)) {
        auto& [y, ey] = ye;
        Coweight delta = ax - d.act(d.inv(u1), y.mu);
        long long sh = d.pair_2rho(delta);
        WtsSlice p = e.dbg.wts_window(d.mul(x.w, vx), d.mul(y.w, u1), d.mul(y.w, u2), -sh, H - sh);
        for (auto& [k, mm] : p.entries) rhs.add(k.first + delta, k.second + ey, mm * m);
      }
      c.check(lhs.entries == rhs.entries, [&] { return std::string(t) + " x=" + e.aw.format_word(x) + ": " + slice_diff(lhs, rhs); });
    }
  }
}

// Y-set recursion and inversion
void suite_y_sets(Ctx& c) {
  for (const char* t : {"A1", "A2", "B2"}) {
    Env e(t);
    const RootDatum& d = e.d;
    for (int it = 0; it < 30; ++it) {
      auto x = random_element(e.aw, c.rng, 6);
      WIdx w = c.rng() % d.W_size();
      auto Y = e.H.y_multiset(x, w);
      for (int g = 0; g < e.aw.num_gens(); ++g) {
        if (!e.aw.right_descent(x, g)) continue;
        auto r = e.aw.gen(g);
        auto xr = e.aw.rmul(x, g);
        int alpha = e.aw.gen_root(g).alpha;
        WIdx sw = d.mul(d.reflection(alpha), w);
        YMultiset rhs;
        for (auto& [ye, m] : e.H.y_multiset(xr, sw)) rhs[{e.aw.compose(ye.first, r), ye.second}] += m;
        if (!d.is_pos(d.act_root(d.inv(w), alpha)))
          for (auto& [ye, m] : e.H.y_multiset(xr, w)) rhs[{ye.first, ye.second + 1}] += m;
        c.check(rhs == Y, [&] { return std::string(t) + " recursion x=" + e.aw.format_word(x) + " " + e.aw.gen_name(g); });
      }
      auto xinv = e.aw.inverse(x);
      for (auto& [ye, m] : Y) {
        auto Yi = e.H.y_multiset(xinv, d.mul(ye.first.w, w));
        auto it2 = Yi.find({e.aw.inverse(ye.first), ye.second});
        long long mi = it2 == Yi.end() ? 0 : it2->second;
        c.check(mi == m, [&] { return std::string(t) + " inversion x=" + e.aw.format_word(x) + " y=" + e.aw.format_word(ye.first); });
      }
    }
  }
}

struct Suite {
  const char* name;
  void (*fn)(Ctx&);
};

const std::vector<Suite>& suites() {
  static const std::vector<Suite> s{
      {"order_invariance", suite_order_invariance},
      {"recursion", suite_recursion},
      {"q0_degeneration", suite_q0},
      {"associativity", suite_associativity},
      {"class_poly_bounds", suite_class_polys},
      {"product_bound", suite_product_bound},
      {"special_estimates", suite_special_estimates},
      {"qbg_minimum", suite_qbg_minimum},
      {"support_bound", suite_support_bound},
      {"wts_y_identity", suite_wts_y_identity},
      {"y_sets", suite_y_sets},
  };
  return s;
}

}  // namespace

std::vector<std::string> selftest_suite_names() {
  std::vector<std::string> out;
  for (auto& s : suites()) out.emplace_back(s.name);
  return out;
}

std::vector<SuiteResult> run_selftest(const SelftestOptions& opt,
                                      const std::function<void(const SuiteResult&)>& progress) {
  auto names = selftest_suite_names();
  for (auto& n : opt.only)
    if (std::find(names.begin(), names.end(), n) == names.end()) throw PreconditionError("unknown selftest suite '" + n + "'");
  std::vector<SuiteResult> out;
  for (auto& s : suites()) {
    if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), s.name) == opt.only.end()) continue;
    SuiteResult r;
    r.name = s.name;
    unsigned long long h = 1469598103934665603ULL;  // fnv1a of the suite name
    for (char ch : std::string(s.name)) h = (h ^ static_cast<unsigned char>(ch)) * 1099511628211ULL;
    std::seed_seq seq{static_cast<unsigned>(opt.seed), static_cast<unsigned>(opt.seed >> 32), static_cast<unsigned>(h),
                      static_cast<unsigned>(h >> 32)};
    Ctx c{r, std::mt19937_64(seq)};
    auto t0 = std::chrono::steady_clock::now();
    try {
      s.fn(c);
    } catch (const std::exception& ex) {
      ++r.failures;
      r.samples.push_back(std::string("exception: ") + ex.what());
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (progress) progress(r);
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace affdbg
