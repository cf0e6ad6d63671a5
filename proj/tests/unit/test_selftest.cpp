#include <gtest/gtest.h>

#include "affdbg/selftest.hpp"

using namespace affdbg;

TEST(Selftest, AllSuitesPass) {
  auto res = run_selftest({});
  EXPECT_EQ(res.size(), selftest_suite_names().size());
  for (auto& s : res) {
    EXPECT_TRUE(s.passed()) << s.name << ": " << s.to_json().dump();
    EXPECT_GT(s.checks, 0) << s.name;
  }
}

TEST(Selftest, SeedChangesSamplesNotVerdicts) {
  SelftestOptions a, b;
  a.only = b.only = {"recursion", "associativity"};
  b.seed = 12345;
  auto ra = run_selftest(a), rb = run_selftest(b), ra2 = run_selftest(a);
  ASSERT_EQ(ra.size(), 2u);
  for (size_t i = 0; i < ra.size(); ++i) {
    EXPECT_TRUE(rb[i].passed());
    EXPECT_EQ(ra[i].to_json(), ra2[i].to_json());
  }
}

TEST(Selftest, UnknownSuite) {
  SelftestOptions o;
  o.only = {"no_such_suite"};
  EXPECT_THROW(run_selftest(o), PreconditionError);
}
