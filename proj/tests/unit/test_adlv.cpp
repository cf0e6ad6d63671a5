#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "affdbg/adlv.hpp"
#include "affdbg/selftest.hpp"
#include "helpers.hpp"

using namespace affdbg;
using testutil::datum;

namespace {

struct Env {
  RootDatum d;
  AffineWeyl aw;
  Dbg dbg;
  BGTable bt;
  ClassPolyEngine eng;
  Adlv adlv;
  explicit Env(RootDatum dd) : d(std::move(dd)), aw(d), dbg(d), bt(aw), eng(aw), adlv(aw, dbg, bt, eng) {}
};

RatVec generic_newton(const RootDatum& d, const std::vector<BGPoint>& pts) {
  RatVec best = pts.front().nu;
  for (auto& p : pts)
    if (d.leq(best, p.nu)) best = p.nu;
  return best;
}

}  // namespace

TEST(Adlv, TranslationsAreZeroDimensional) {
  Env e(datum("A2"));
  std::mt19937_64 rng(1);
  for (int it = 0; it < 10; ++it) {
    auto x = e.aw.translation(testutil::random_x(e.d, rng, 3).mu);
    auto b = e.bt.point_of(x);
    EXPECT_EQ(e.eng.f_x_b(x, b), QPoly::monomial(e.aw.length(x)));
    auto r = e.adlv.report(x, b);
    ASSERT_TRUE(r.nonempty);
    EXPECT_EQ(*r.dim, 0);
    auto pts = e.adlv.bg_x(x);
    ASSERT_EQ(pts.size(), 1u);
    EXPECT_TRUE(pts[0].same(b));
  }
}

TEST(Adlv, FiniteWeylElementsInTheBasicLocus) {
  // X_w(1) is a union of classical Deligne-Lusztig varieties of dimension l(w)
  Env e(datum("A2"));
  auto one = e.bt.point_of(e.aw.identity());
  for (WIdx w = 0; w < e.d.W_size(); ++w) {
    auto r = e.adlv.report(e.aw.finite(w), one);
    ASSERT_TRUE(r.nonempty);
    EXPECT_EQ(*r.dim, e.d.length(w));
  }
}

TEST(Adlv, ReportInvariants) {
  for (auto* f : {"a2.json", "gl3.json", "g2.json", "a4tw.json"}) {
    Env e(testutil::data_file(f));
    std::mt19937_64 rng(17);
    for (int it = 0; it < 15; ++it) {
      auto x = random_element(e.aw, rng, 8);
      auto pts = e.adlv.bg_x(x);
      ASSERT_FALSE(pts.empty());
      // [x] itself always occurs
      bool has_x = false;
      for (auto& b : pts) {
        has_x |= b.same(e.bt.point_of(x));
        auto r = e.adlv.report(x, b);
        ASSERT_TRUE(r.nonempty) << f;
        long long nu2 = 0;
        Rational q = b.nu.pair(e.d.two_rho());
        ASSERT_TRUE(q.is_integer());
        nu2 = q.num;
        EXPECT_EQ(2 * *r.dim, e.aw.length(x) + r.f.degree() - 2 * nu2);
        EXPECT_EQ(*r.D, 2 * *r.dim - e.aw.length(x) + b.defect + nu2);
        EXPECT_EQ(*r.D, residue_D(e.aw, x, b, *r.dim));
        EXPECT_GT(*r.components, 0);
        EXPECT_LE(*r.dim, e.aw.length(x));
      }
      EXPECT_TRUE(has_x) << f;
      // candidates add only empty loci
      for (auto& b : e.adlv.candidates(x)) {
        bool in = false;
        for (auto& p : pts) in |= p.same(b);
        if (!in) EXPECT_FALSE(e.adlv.report(x, b).nonempty);
      }
    }
  }
}

TEST(Adlv, LengthZeroElements) {
  Env e(testutil::data_file("gl3.json"));
  for (auto& t : e.aw.omega_generators()) {
    auto pts = e.adlv.bg_x(t);
    ASSERT_EQ(pts.size(), 1u);
    EXPECT_TRUE(pts[0].same(e.bt.point_of(t)));
    EXPECT_EQ(*e.adlv.report(t, pts[0]).dim, 0);
  }
  EXPECT_EQ(e.d.pi1().free_rank(), 1);
  EXPECT_EQ(e.d.pi1().torsion().size(), 0u);
}

TEST(Adlv, GenericNewtonPointFromQuantumBruhatGraph) {
  for (auto* f : {"a2.json", "gl3.json", "b2.json"}) {
    Env e(testutil::data_file(f));
    std::mt19937_64 rng(1);
    int done = 0;
    for (int it = 0; it < 400 && done < 20; ++it) {
      auto x = testutil::random_x(e.d, rng, 3);
      if (e.aw.regularity(x) < 2 || e.aw.length(x) > 16) continue;
      RatVec gen = generic_newton(e.d, e.adlv.bg_x(x));
      for (WIdx v : e.aw.lp_set(x)) {
        auto [dq, wq] = e.d.qbg_distance_weight(v, e.d.sigma_w(e.d.mul(x.w, v)));
        EXPECT_EQ(e.aw.conv(e.d.act(e.d.inv(v), x.mu) - wq), gen) << f << " " << e.aw.format_wmu(x);
      }
      ++done;
    }
    EXPECT_GE(done, 10) << f;
  }
}

TEST(Adlv, E1IsContainedInE2) {
  Env e(datum("A2"));
  std::mt19937_64 rng(5);
  int done = 0;
  long long C = e.d.reg_constant();
  for (int it = 0; it < 500 && done < 10; ++it) {
    auto x = testutil::random_x(e.d, rng, C + 2);
    if (e.aw.regularity(x) < C || e.aw.length(x) > 24) continue;
    for (auto& b : e.adlv.candidates(x)) {
      if (!b.lambda) continue;
      auto p1 = e.adlv.predict_regular(x, b, Variant::E1);
      auto p2 = e.adlv.predict_regular(x, b, Variant::E2);
      for (auto& [len, m] : p1.E) {
        ASSERT_TRUE(p2.E.count(len));
        EXPECT_LE(m, p2.E.at(len));
      }
      EXPECT_TRUE(check_regular(e.adlv.report(x, b), p1).empty());
      EXPECT_TRUE(check_regular(e.adlv.report(x, b), p2).empty());
    }
    ++done;
  }
  EXPECT_GE(done, 5);
}

TEST(Adlv, PredictRegularNeedsSingletonLp) {
  Env e(datum("A2"));
  auto x = e.aw.parse("w:[2] mu:[0,-1]");
  ASSERT_GT(e.aw.lp_set(x).size(), 1u);
  EXPECT_THROW(e.adlv.predict_regular(x, e.bt.point_of(x), Variant::E2), PreconditionError);
}

TEST(Adlv, ElementsUpTo) {
  auto d = datum("A1");
  AffineWeyl aw(d);
  // affine A1 adjoint: two elements of each positive length per Omega coset
  auto xs = elements_up_to(aw, 0, 6);
  std::map<int, int> per;
  for (auto& x : xs) ++per[aw.length(x)];
  EXPECT_EQ(per[0], 2);
  for (int l = 1; l <= 6; ++l) EXPECT_EQ(per[l], 4) << l;
  // sorted by (length, element)
  for (size_t i = 1; i < xs.size(); ++i) {
    int a = aw.length(xs[i - 1]), b = aw.length(xs[i]);
    EXPECT_TRUE(a < b || (a == b && xs[i - 1] < xs[i]));
  }
  // brute force in a box
  std::set<AffineElement> box;
  for (WIdx w = 0; w < d.W_size(); ++w)
    for (long long m = -8; m <= 8; ++m) {
      AffineElement x{w, Coweight{m}};
      if (aw.length(x) <= 6) box.insert(x);
    }
  EXPECT_EQ(std::set<AffineElement>(xs.begin(), xs.end()), box);
}

TEST(Scan, ConfigValidation) {
  nlohmann::json ok{{"datum", {{"type", {"A1"}}}}, {"max_length", 3}};
  auto c = ScanConfig::from_json(ok);
  EXPECT_EQ(ScanConfig::from_json(c.to_json()).to_json(), c.to_json());
  auto bad = ok;
  bad["colour"] = "red";
  EXPECT_THROW(ScanConfig::from_json(bad), ParseError);
  bad = ok;
  bad["predictions"] = {"bogus"};
  EXPECT_THROW(ScanConfig::from_json(bad), ParseError);
  bad = ok;
  bad.erase("max_length");
  EXPECT_THROW(ScanConfig::from_json(bad), ParseError);
  bad = ok;
  bad["workers"] = 0;
  EXPECT_THROW(ScanConfig::from_json(bad), ParseError);
}

TEST(Scan, EmptyWindow) {
  auto c = ScanConfig::from_json({{"datum", {{"type", {"A1"}}}}, {"min_length", 5}, {"max_length", 4}});
  auto r = run_scan(c);
  EXPECT_TRUE(r.records.empty());
  EXPECT_EQ(r.violations, 0);
  EXPECT_EQ(r.summary["records"], 0);
}

TEST(Scan, DeterministicAcrossWorkers) {
  nlohmann::json j{{"datum", {{"type", {"A2"}}}},
                   {"max_length", 6},
                   {"predictions", {"shrunken", "integral", "regular"}},
                   {"regularity", 1}};
  std::string first;
  for (int w : {1, 3, 8}) {
    j["workers"] = w;
    auto r = run_scan(ScanConfig::from_json(j));
    std::ostringstream os;
    write_jsonl(os, r.records);
    if (first.empty())
      first = os.str();
    else
      EXPECT_EQ(os.str(), first) << w;
    EXPECT_EQ(r.violations, 0);
    EXPECT_FALSE(r.partial);
  }
  EXPECT_FALSE(first.empty());
}

TEST(Scan, ResourceLimitMarksPartial) {
  auto c = ScanConfig::from_json({{"datum", {{"type", {"A2"}}}}, {"max_length", 8}, {"max_elements", 5}});
  auto r = run_scan(c);
  EXPECT_TRUE(r.partial);
  EXPECT_EQ(r.summary["partial"], true);
}
