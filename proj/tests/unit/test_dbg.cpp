#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "affdbg/dbg.hpp"
#include "helpers.hpp"

using namespace affdbg;
using testutil::datum;

namespace {

// (end vertex, length) -> number of subsets of betas[0..n) walked from u
std::map<std::pair<WIdx, int>, long long> subset_paths(const RootDatum& d, const ReflectionOrder& o, int n, WIdx u) {
  std::map<std::pair<WIdx, int>, long long> out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    WIdx w = u;
    int len = 0;
    for (int i = 0; i < n; ++i)
      if (mask >> i & 1) {
        w = d.mul(w, d.reflection(o.betas[i]));
        ++len;
      }
    ++out[{w, len}];
  }
  return out;
}

// every labelling with entries up to cap, kept when <wt,2rho> lies in [lo, hi]
WtsSlice brute_labels(const RootDatum& d, const std::vector<UPath>& paths, long long lo, long long hi, long long cap) {
  WtsSlice s;
  s.lo = lo;
  s.hi = hi;
  for (auto& p : paths) {
    std::vector<long long> m(p.length());
    for (int i = 0; i < p.length(); ++i) m[i] = p.lower[i];
    while (true) {
      Coweight w = d.zero();
      for (int i = 0; i < p.length(); ++i) w += d.coroot(p.roots[i]) * m[i];
      long long h = d.pair_2rho(w);
      if (h >= lo && h <= hi) s.add(w, p.length(), 1);
      int i = 0;
      while (i < p.length() && ++m[i] > cap) m[i] = p.lower[i], ++i;
      if (i == p.length()) break;
    }
  }
  return s;
}

}  // namespace

TEST(Dbg, IncreasingPathsAgainstSubsets) {
  for (auto* t : {"A2", "B2", "G2"}) {
    auto d = datum(t);
    Dbg dbg(d);
    auto& o = dbg.default_order();
    for (WIdx u = 0; u < d.W_size(); ++u) {
      auto want = subset_paths(d, o, d.num_pos(), u);
      std::map<std::pair<WIdx, int>, long long> got;
      for (WIdx v = 0; v < d.W_size(); ++v)
        for (auto& p : dbg.increasing_paths(u, v, o, d.num_pos())) {
          EXPECT_EQ(p.start, u);
          EXPECT_EQ(p.end(), v);
          ++got[{v, p.length()}];
        }
      EXPECT_EQ(got, want) << t;
    }
  }
}

TEST(Dbg, LabelsAgainstBruteForce) {
  for (auto* t : {"A1", "A2", "B2"}) {
    auto d = datum(t);
    Dbg dbg(d);
    auto& o = dbg.default_order();
    for (WIdx u = 0; u < d.W_size(); ++u)
      for (WIdx v = 0; v < d.W_size(); ++v) {
        auto paths = dbg.increasing_paths(u, v, o, d.num_pos());
        const long long hi = 8;
        // labels above hi cannot stay inside the window
        auto want = brute_labels(d, paths, 0, hi, hi);
        auto got = dbg.wts_window(u, v, v, 0, hi);
        EXPECT_EQ(got.entries, want.entries) << t << " " << u << " " << v;
        for (auto& [k, m] : want.entries) {
          auto at = dbg.wts_at(u, v, k.first);
          EXPECT_EQ(at[k.second], m);
        }
      }
  }
}

TEST(Dbg, OrderIndependence) {
  for (auto* t : {"A2", "B2", "G2"}) {
    auto d = datum(t);
    Dbg dbg(d);
    auto words = d.reduced_words(d.w0());
    for (WIdx u = 0; u < d.W_size(); ++u)
      for (WIdx v = 0; v < d.W_size(); ++v) {
        auto base = dbg.wts_window(u, v, v, 0, 8);
        for (auto& w : words) {
          auto o = d.reflection_order_from_word(w);
          EXPECT_EQ(dbg.wts_window_order(u, v, o, d.num_pos(), 0, 8).entries, base.entries) << t;
        }
      }
  }
}

TEST(Dbg, QuantumDistanceFromWeightMinimum) {
  auto d = datum("A2");
  Dbg dbg(d);
  Coweight theta = d.coroot(d.highest_roots()[0]);
  auto at = dbg.wts_at(d.w0(), 0, theta);
  ASSERT_FALSE(at.empty());
  EXPECT_EQ(at.begin()->first, 1);
  EXPECT_EQ(at.begin()->second, 1);
  EXPECT_TRUE(dbg.wts_at(d.w0(), 0, d.zero()).empty());
  auto up = dbg.wts_at(0, d.w0(), d.zero());
  EXPECT_EQ(up.rbegin()->first, 3);
  EXPECT_EQ(up.rbegin()->second, 1);
  for (auto* t : {"A2", "B2", "G2"}) {
    auto e = datum(t);
    Dbg g(e);
    for (WIdx u = 0; u < e.W_size(); ++u)
      for (WIdx v = 0; v < e.W_size(); ++v) {
        auto [dq, wq] = e.qbg_distance_weight(u, v);
        long long h = e.pair_2rho(wq);
        auto s = g.wts_window(u, v, v, 0, h + 4);
        for (auto& [k, m] : s.entries) EXPECT_TRUE(e.leq(RatVec(wq), RatVec(k.first))) << t;
        auto m = g.wts_at(u, v, wq);
        ASSERT_FALSE(m.empty());
        EXPECT_EQ(m.rbegin()->first, dq);
        EXPECT_EQ(m.rbegin()->second, 1);
      }
  }
}

TEST(Dbg, BoundedVariant) {
  auto d = datum("A2");
  Dbg dbg(d);
  for (WIdx u = 0; u < d.W_size(); ++u)
    for (WIdx v = 0; v < d.W_size(); ++v) {
      auto full = dbg.wts_window(u, v, v, 0, 6);
      for (WIdx vp = 0; vp < d.W_size(); ++vp) {
        auto b = dbg.wts_window(u, v, vp, 0, 6);
        for (auto& [k, m] : b.entries) {
          auto it = full.entries.find(k);
          ASSERT_NE(it, full.entries.end());
          EXPECT_LE(m, it->second);
        }
      }
      // v' = v w0 leaves no roots, so only the empty path survives
      auto none = dbg.wts_window(u, v, d.mul(v, d.w0()), 0, 6);
      EXPECT_EQ(none.total(), u == v ? 1 : 0) << u << " " << v;
    }
}

TEST(Dbg, SimpleAffineRecursion) {
  for (auto* t : {"A1", "A2", "B2"}) {
    auto d = datum(t);
    Dbg dbg(d);
    AffineWeyl aw(d);
    std::mt19937_64 rng(6);
    int done = 0;
    for (int it = 0; it < 200 && done < 30; ++it) {
      WIdx u = rng() % d.W_size(), v = rng() % d.W_size(), vp = rng() % d.W_size();
      int g = rng() % aw.num_gens();
      if (d.is_pos(d.act_root(d.inv(vp), aw.gen_root(g).alpha))) continue;
      auto rc = dbg_recursion_check(dbg, aw, u, v, vp, g, 0, 8);
      EXPECT_TRUE(rc.equal()) << t << " u=" << u << " v=" << v << " v'=" << vp << " g=" << g;
      ++done;
    }
    EXPECT_GE(done, 10);
  }
}

TEST(Dbg, AffineLiftRoundTrip) {
  auto d = datum("A2");
  Dbg dbg(d);
  AffineWeyl aw(d);
  auto paths = dbg.labelled_paths(0, d.w0(), d.w0(), 6);
  ASSERT_FALSE(paths.empty());
  for (auto& p : paths) {
    EXPECT_TRUE(p.valid(d, &dbg.default_order()));
    auto ys = affine_path(aw, p, aw.identity());
    ASSERT_EQ(static_cast<int>(ys.size()), p.length() + 1);
    for (size_t i = 0; i + 1 < ys.size(); ++i) EXPECT_TRUE(semi_infinite_step(aw, ys[i], ys[i + 1]));
    auto back = path_from_affine(aw, ys);
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(back->edges, p.edges);
  }
}

TEST(Dbg, CsvOutput) {
  auto d = datum("A1");
  Dbg dbg(d);
  auto s = dbg.wts_window(0, 0, 0, 0, 4);
  std::ostringstream os;
  write_wts_csv(os, d, s, true);
  std::string out = os.str();
  EXPECT_EQ(out.substr(0, out.find('\n')), "u,v,vprime,omega,e,multiplicity");
  // A1: 1 => 1 is the empty path and the two-edge loops
  EXPECT_EQ(s.at(d.zero()).at(0), 1);
  EXPECT_EQ(std::count(out.begin(), out.end(), '\n'), static_cast<long>(s.entries.size()) + 1);
}
