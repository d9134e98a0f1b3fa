#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "mhd/beltrami.hpp"
#include "mhd/constants.hpp"
#include "mhd/errors.hpp"

using namespace mhd;

namespace {

// sqrt of sum_{0 < max|h_i| <= R} |h|^{-2s}: a lower bound for the lattice sum
double partial_zeta(int dim, double s, int R) {
  double sum = 0.0;
  if (dim == 2) {
    for (int a = -R; a <= R; ++a)
      for (int b = -R; b <= R; ++b)
        if (a || b) sum += std::pow(a * a + b * b, -s);
  } else {
    for (int a = -R; a <= R; ++a)
      for (int b = -R; b <= R; ++b)
        for (int c = -R; c <= R; ++c)
          if (a || b || c) sum += std::pow(a * a + b * b + c * c, -s);
  }
  return std::sqrt(sum);
}

}  // namespace

TEST(LatticeZeta, UpperBoundCloseToPartialSum) {
  const double z3 = lattice_zeta_bound(3, 3.0);
  const double lower3 = partial_zeta(3, 3.0, 40);
  EXPECT_GE(z3, lower3);
  EXPECT_LE(z3, lower3 * (1.0 + 1e-4));
  // frozen reference: radius-80 cube sum, sqrt(8.401919164870867)
  EXPECT_NEAR(lower3, 2.8986064177240185, 1e-5);

  const double z2 = lattice_zeta_bound(2, 2.5);
  const double lower2 = partial_zeta(2, 2.5, 300);
  EXPECT_GE(z2, lower2);
  EXPECT_LE(z2, lower2 * (1.0 + 1e-4));
  EXPECT_NEAR(lower2, 2.256160063796273, 1e-6);
  EXPECT_THROW(lattice_zeta_bound(3, 1.5), InputError);
}

TEST(AnalyticConstants, FrozenValuesD3) {
  const ConstantsTable t = analytic_constants(3, {{3.0, 3.0}, {4.0, 3.0}});
  // K_33 = 8 (2pi)^{-3/2} Z_3 with Z_3 = 2.8986064 (independent lattice sum)
  const double ref_K33 = 8.0 * std::pow(2.0 * std::numbers::pi, -1.5) * 2.8986064177240185;
  EXPECT_NEAR(t.K(3.0), ref_K33, 1e-4 * ref_K33);
  EXPECT_GE(t.K(3.0), ref_K33);
  EXPECT_NEAR(t.K(3.0), 1.47235, 1e-5);
  EXPECT_NEAR(t.G(3.0), 3.10658, 1e-5);
  EXPECT_NEAR(t.G(4.0, 3.0), 8.28422, 1e-5);
  EXPECT_DOUBLE_EQ(t.K(4.0, 3.0), 2.0 * t.K(3.0));
  EXPECT_DOUBLE_EQ(t.K_hat(3.0), std::sqrt(2.0) * t.K(3.0));
  EXPECT_DOUBLE_EQ(t.G_hat(4.0, 3.0), std::sqrt(2.0) * t.G(4.0, 3.0));
  EXPECT_THROW(analytic_constants(3, {{2.5, 2.5}}), InputError);
  EXPECT_THROW(analytic_constants(3, {{3.0, 4.0}}), InputError);
}

TEST(ConstantsTable, SetAndLookupRules) {
  ConstantsTable t(3);
  EXPECT_THROW(t.set(3.0, 3.0, 0.0, 1.0), InputError);
  EXPECT_THROW(t.set(3.0, 3.0, 1.0, -1.0), InputError);
  EXPECT_THROW(t.set(2.0, 3.0, 1.0, 1.0), InputError);
  t.set(3.0, 3.0, 1.5, 2.5);
  t.set(2.0, 2.0, 1.0, 1.0);
  EXPECT_TRUE(t.contains(3.0, 3.0));
  EXPECT_FALSE(t.contains(4.0, 3.0));
  EXPECT_DOUBLE_EQ(t.K(3.0), 1.5);
  EXPECT_THROW(t.K(4.0, 3.0), InputError);
  EXPECT_DOUBLE_EQ(t.K(2.0), 1.0);  // n = 2 > d/2 is fine for K
  EXPECT_THROW(t.G(2.0), InputError);  // but G needs n > d/2 + 1
  t.set(3.0, 3.0, 1.75, 2.5);
  EXPECT_DOUBLE_EQ(t.K(3.0), 1.75);
  EXPECT_EQ(t.entries().size(), 2u);
}

TEST(ConstantsTable, JsonRoundTripAndDigest) {
  const ConstantsTable t = analytic_constants(2, {{2.5, 2.5}, {3.5, 2.5}});
  const ConstantsTable back = ConstantsTable::from_json(t.to_json());
  EXPECT_EQ(back.dim(), 2);
  EXPECT_DOUBLE_EQ(back.G(3.5, 2.5), t.G(3.5, 2.5));
  EXPECT_EQ(back.digest(), t.digest());
  ConstantsTable other = back;
  other.set(2.5, 2.5, 9.0, 9.0);
  EXPECT_NE(other.digest(), t.digest());
  EXPECT_THROW(ConstantsTable::from_json(nlohmann::json{{"d", 3}}), InputError);
}

TEST(EstimateConstants, MonotoneAndExtensible) {
  const ConstantsEstimate short_run = estimate_constants(3.0, 3.0, 3, 2, 6, 11);
  const ConstantsEstimate long_run = estimate_constants(3.0, 3.0, 3, 2, 12, 11);
  ASSERT_EQ(long_run.K_trace.size(), 12u);
  for (std::size_t i = 1; i < long_run.K_trace.size(); ++i) {
    EXPECT_GE(long_run.K_trace[i], long_run.K_trace[i - 1]);
    EXPECT_GE(long_run.G_trace[i], long_run.G_trace[i - 1]);
  }
  for (std::size_t i = 0; i < short_run.K_trace.size(); ++i) EXPECT_EQ(short_run.K_trace[i], long_run.K_trace[i]);
  EXPECT_GE(long_run.K_lower, short_run.K_lower);
}

TEST(EstimateConstants, BelowAnalyticTable) {
  const ConstantsTable t = analytic_constants(3, {{3.0, 3.0}, {4.0, 3.0}});
  for (auto [p, n] : {std::pair{3.0, 3.0}, std::pair{4.0, 3.0}}) {
    const ConstantsEstimate e = estimate_constants(p, n, 3, 2, 20, 5);
    EXPECT_GT(e.K_lower, 0.0);
    EXPECT_LE(e.K_lower, t.K(p, n));
    EXPECT_LE(e.G_lower, t.G(p, n));
  }
}

TEST(EstimateConstants, BeltramiSampleContributesZero) {
  const SpectralField w = make_beltrami_3d(1.0, 2.0, 1, 1, 2);
  const auto [kr, gr] = inequality_ratios(w, w, 3.0, 3.0);
  EXPECT_LE(kr, 1e-14);
  EXPECT_LE(gr, 1e-14);
  const SpectralField z(3, 2);
  const auto [kz, gz] = inequality_ratios(z, z, 3.0, 3.0);
  EXPECT_EQ(kz, 0.0);
  EXPECT_EQ(gz, 0.0);
}

TEST(PairTransfer, NoViolationsWithAnalyticConstants) {
  const ConstantsTable t = analytic_constants(3, {{3.0, 3.0}, {4.0, 3.0}});
  for (auto [p, n] : {std::pair{3.0, 3.0}, std::pair{4.0, 3.0}}) {
    const TransferCheck c = check_pair_transfer(t, p, n, 2, 15, 3);
    EXPECT_EQ(c.samples, 15u);
    EXPECT_EQ(c.violations, 0u);
    EXPECT_LT(c.worst_ratio, 1.0);
  }
}
