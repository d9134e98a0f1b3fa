#include <cmath>
#include <map>
#include <vector>

#include <gtest/gtest.h>

#include "../common/synthetic.hpp"
#include "mhd/beltrami.hpp"
#include "mhd/constants.hpp"
#include "mhd/errors.hpp"
#include "mhd/integrator.hpp"
#include "mhd/spectral.hpp"
#include "mhd/stability.hpp"

using namespace mhd;
using synthetic::hatted_table;
using synthetic::uniform_grid;

namespace {

using Norms = std::map<double, double>;

DecayBudget flat_budget(double n, double p, double Jn, double Jn1, double Jp, double Jp1) {
  DecayBudget b;
  b.set(n, Jn, "user");
  b.set(n + 1.0, Jn1, "user");
  b.set(p, Jp, "user");
  b.set(p + 1.0, Jp1, "user");
  return b;
}

BeltramiSolution trkal_base() {
  BeltramiPairSpec s;
  s.alpha = 0.3;
  s.beta = 0.4;
  s.gamma = 0.1;
  s.kappa = 1;
  s.lambda = 2;
  return BeltramiSolution(make_gb_pair(s, 2));
}

Trajectory constant_trajectory(double value, double t_end, std::size_t steps) {
  Trajectory traj;
  traj.times = uniform_grid(t_end, steps);
  traj.orders = {3.0, 4.0};
  traj.norms.assign(2, std::vector<double>(traj.times.size(), value));
  return traj;
}

// composite Simpson of the closed-form pair norm on [0, 40]
double reference_integral(const BeltramiSolution& sol, double p) {
  const int steps = 400000;
  const double h = 40.0 / steps;
  double sum = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double w = (i == 0 || i == steps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    sum += w * sol.norm(1.0, 1.0, i * h, p);
  }
  return sum * h / 3.0;
}

ConstantsTable d3_table() { return analytic_constants(3, required_constant_orders(3.0, {4.0})); }

}  // namespace

TEST(Radius, ZeroBudgetGivesThreshold) {
  const auto table = hatted_table(3.0, 5.0, 0.7, 0.4, 1.0, 1.0, 1.0);
  EXPECT_DOUBLE_EQ(stability_radius(flat_budget(3.0, 5.0, 0, 0, 0, 0), 3.0, 1.3, table), 1.3 / 0.7);
}

TEST(Radius, HandEvaluated) {
  const auto table = hatted_table(3.0, 5.0, 1.0, 1.0, 1.0, 1.0, 1.0);
  const double l2 = std::log(2.0);
  EXPECT_NEAR(stability_radius(flat_budget(3.0, 5.0, l2, l2, 0, 0), 3.0, 1.0, table), 0.25, 1e-15);
}

TEST(Radius, BoundedAndMonotoneInBudget) {
  const auto table = hatted_table(3.0, 5.0, 0.9, 0.6, 1.0, 1.0, 1.0);
  double prev = 1.0 / 0.9;
  for (int k = 1; k <= 20; ++k) {
    const double J = 0.1 * k;
    const double rho = stability_radius(flat_budget(3.0, 5.0, J, 0.5 * J, 0, 0), 3.0, 1.0, table);
    EXPECT_LE(rho, 1.0 / 0.9);
    EXPECT_LT(rho, prev);
    prev = rho;
  }
}

TEST(Radius, TrkalBaseFrozen) {
  const BeltramiSolution sol = trkal_base();
  const auto table = d3_table();
  EXPECT_NEAR(1.0 / table.G_hat(3.0), 0.2276, 1e-4);
  const double rho = stability_radius(analytic_budget(sol, 1.0, 1.0, {3.0, 4.0}), 3.0, 1.0, table);
  EXPECT_NEAR(rho, 1.613e-3, 1e-6);
}

TEST(Radius, MissingBudgetEntryIsInputError) {
  DecayBudget b;
  b.set(3.0, 0.1, "user");
  EXPECT_THROW(stability_radius(b, 3.0, 1.0, d3_table()), InputError);
}

TEST(Envelopes, SimplifiedMatchesGeneralAtHalfRadius) {
  const auto table = hatted_table(3.0, 5.0, 0.9, 0.6, 1.1, 0.5, 1.3);
  const DecayBudget b = flat_budget(3.0, 5.0, 0.2, 0.1, 0.3, 0.2);
  const double rho = stability_radius(b, 3.0, 1.0, table);
  const StabilityReport r = perturbation_envelopes(0.5 * rho, {5.0}, b, 3.0, 1.0, table);
  ASSERT_TRUE(r.has_envelopes);
  ASSERT_TRUE(r.has_simplified);
  EXPECT_EQ(r.regime, Regime::InsideHalf);
  EXPECT_NEAR(r.C_n, r.C_n_simplified, 1e-12 * r.C_n);
  EXPECT_NEAR(r.C_n, 2.0 * std::exp(0.9 * 0.2 + 0.6 * 0.1), 1e-12);
  EXPECT_NEAR(r.C_p.at(5.0), r.C_p_simplified.at(5.0), 1e-12 * r.C_p.at(5.0));
  EXPECT_NEAR(r.C_p.at(5.0), std::exp(1.1 * 0.3 + 0.5 * 0.2 + 1.3 / 0.9), 1e-12);
}

TEST(Envelopes, Regimes) {
  const auto table = hatted_table(3.0, 5.0, 0.9, 0.6, 1.1, 0.5, 1.3);
  const DecayBudget b = flat_budget(3.0, 5.0, 0.2, 0.1, 0.3, 0.2);
  const double rho = stability_radius(b, 3.0, 1.0, table);
  EXPECT_EQ(perturbation_envelopes(0.0, {5.0}, b, 3.0, 1.0, table).regime, Regime::InsideHalf);
  EXPECT_EQ(perturbation_envelopes(0.4 * rho, {5.0}, b, 3.0, 1.0, table).regime, Regime::InsideHalf);
  const StabilityReport inside = perturbation_envelopes(0.75 * rho, {5.0}, b, 3.0, 1.0, table);
  EXPECT_EQ(inside.regime, Regime::Inside);
  EXPECT_TRUE(inside.has_envelopes);
  EXPECT_FALSE(inside.has_simplified);
  EXPECT_NEAR(inside.C_n, std::exp(0.9 * 0.2 + 0.6 * 0.1) / 0.25, 1e-12);
  const StabilityReport edge = perturbation_envelopes(rho, {5.0}, b, 3.0, 1.0, table);
  EXPECT_EQ(edge.regime, Regime::Outside);
  EXPECT_FALSE(edge.has_envelopes);
  EXPECT_EQ(perturbation_envelopes(2.0 * rho, {5.0}, b, 3.0, 1.0, table).regime, Regime::Outside);
  EXPECT_THROW(perturbation_envelopes(-1.0, {5.0}, b, 3.0, 1.0, table), InputError);
  EXPECT_THROW(perturbation_envelopes(0.1 * rho, {3.0}, b, 3.0, 1.0, table), InputError);
}

TEST(Envelopes, GrowWithDatum) {
  const auto table = hatted_table(3.0, 5.0, 0.9, 0.6, 1.1, 0.5, 1.3);
  const DecayBudget b = flat_budget(3.0, 5.0, 0.2, 0.1, 0.3, 0.2);
  const double rho = stability_radius(b, 3.0, 1.0, table);
  double prev_n = 0.0, prev_p = 0.0;
  for (int k = 0; k < 10; ++k) {
    const StabilityReport r = perturbation_envelopes(0.095 * k * rho, {5.0}, b, 3.0, 1.0, table);
    EXPECT_GT(r.C_n, prev_n);
    EXPECT_GT(r.C_p.at(5.0), prev_p);
    prev_n = r.C_n;
    prev_p = r.C_p.at(5.0);
  }
}

TEST(SmallData, ZeroPairAndThreshold) {
  const auto table = d3_table();
  const SmallDataResult zero = small_data_check(FieldPair(3, 2), 3.0, 1.0, table, {3.0, 4.0});
  EXPECT_TRUE(zero.admissible);
  EXPECT_EQ(zero.C_p.at(3.0), 0.0);
  EXPECT_EQ(zero.C_p.at(4.0), 0.0);
  const double th = 1.0 / table.G_hat(3.0);
  EXPECT_DOUBLE_EQ(zero.threshold, th);
  EXPECT_FALSE(small_data_check(Norms{{3.0, th}, {4.0, 1.0}}, 3.0, 1.0, table, {4.0}).admissible);
  EXPECT_TRUE(small_data_check(Norms{{3.0, 0.99 * th}, {4.0, 1.0}}, 3.0, 1.0, table, {4.0}).admissible);
  EXPECT_THROW(small_data_check(Norms{{3.0, 0.1}}, 3.0, 1.0, table, {4.0}), InputError);
}

TEST(SmallData, HandEvaluatedCoefficients) {
  const auto table = hatted_table(3.0, 4.0, 2.0, 1.0, 1.0, 1.0, 3.0);
  // base = 1 - 2 * 0.25 / 1 = 1/2
  const SmallDataResult r = small_data_check(Norms{{3.0, 0.25}, {4.0, 0.5}, {2.0, 0.1}}, 3.0, 1.0, table, {2.0, 4.0});
  ASSERT_TRUE(r.admissible);
  EXPECT_NEAR(r.C_p.at(2.0), 0.5, 1e-15);
  EXPECT_NEAR(r.C_p.at(4.0), 0.5 * std::pow(0.5, -1.5), 1e-14);
}

TEST(SmallData, EnvelopeHoldsAlongIntegration) {
  const auto table = d3_table();
  FieldPair u0{random_field(11, 3, 2, 1.0), random_field(12, 3, 2, 1.0)};
  u0 *= 0.5 / (table.G_hat(3.0) * pair_norm(u0, 3.0));
  const SmallDataResult r = small_data_check(u0, 3.0, 1.0, table, {3.0, 4.0});
  ASSERT_TRUE(r.admissible);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 2.0;
  cfg.cutoff = 2;
  cfg.recorded_orders = {3.0, 4.0};
  const Trajectory traj = integrate(u0, cfg);
  for (double p : {3.0, 4.0}) {
    const auto s = traj.norm_series(p);
    for (std::size_t i = 0; i < s.size(); ++i) {
      EXPECT_LE(s[i], r.C_p.at(p) * std::exp(-traj.times[i])) << "p=" << p << " t=" << traj.times[i];
    }
  }
}

TEST(Decay, BeltramiDecaysAtViscousRate) {
  const BeltramiSolution sol = trkal_base();
  const Trajectory traj = exact_trajectory(sol, 1.0, 1.0, uniform_grid(6.0, 600), {3.0, 4.0});
  const DecayReport r = decay_diagnostics(traj, 3.0, 1.0, d3_table());
  EXPECT_EQ(r.verdict, "decaying");
  EXPECT_TRUE(r.condition_a);
  // first grid time below the small-data threshold, from the closed form
  const double th = 1.0 / d3_table().G_hat(3.0);
  double first = -1.0;
  for (double t : traj.times) {
    if (sol.norm(1.0, 1.0, t, 3.0) < th) {
      first = t;
      break;
    }
  }
  EXPECT_GT(first, 0.0);
  EXPECT_EQ(r.t_a, first);
  EXPECT_GE(r.fitted_rate, 0.99);
  EXPECT_LE(r.fitted_rate, 1.01);
  EXPECT_GT(r.decades, 2.0);
}

TEST(Decay, ZeroIsDecayingConstantIsInconclusive) {
  const auto table = d3_table();
  const DecayReport zero = decay_diagnostics(constant_trajectory(0.0, 1.0, 10), 3.0, 1.0, table);
  EXPECT_EQ(zero.verdict, "decaying");
  const DecayReport flat = decay_diagnostics(constant_trajectory(0.01, 5.0, 50), 3.0, 1.0, table);
  EXPECT_TRUE(flat.condition_a);
  EXPECT_EQ(flat.verdict, "inconclusive");
  EXPECT_NEAR(flat.running_integral, 0.05, 1e-14);
}

TEST(Budget, QuadraturePlusTailBoundsAnalytic) {
  const BeltramiSolution sol = trkal_base();
  const auto table = d3_table();
  const std::vector<double> orders = {3.0, 4.0, 5.0};
  const DecayBudget exact = analytic_budget(sol, 1.0, 1.0, orders);
  const Trajectory fine = exact_trajectory(sol, 1.0, 1.0, uniform_grid(8.0, 1600), orders);
  const Trajectory coarse = exact_trajectory(sol, 1.0, 1.0, uniform_grid(8.0, 800), orders);
  const DecayBudget bf = budget_from_trajectory(fine, orders, 3.0, 1.0, table);
  const DecayBudget bc = budget_from_trajectory(coarse, orders, 3.0, 1.0, table);
  for (double p : orders) {
    const double ref = reference_integral(sol, p);
    EXPECT_GE(bf.J(p), ref) << p;
    EXPECT_LE(bf.J(p), 1.01 * ref) << p;
    // the closed-form budget sums the two components and bounds the pair norm integral
    EXPECT_GE(exact.J(p), ref) << p;
    EXPECT_LT(std::abs(bf.J(p) - bc.J(p)), 1e-6 * bf.J(p)) << p;
    EXPECT_EQ(bf.provenance(p), "quadrature+tail");
  }
}

TEST(Budget, ZeroAndRefusal) {
  const auto table = d3_table();
  const DecayBudget zero = budget_from_trajectory(constant_trajectory(0.0, 1.0, 10), {3.0, 4.0}, 3.0, 1.0, table);
  EXPECT_EQ(zero.J(3.0), 0.0);
  EXPECT_EQ(zero.J(4.0), 0.0);
  EXPECT_THROW(budget_from_trajectory(constant_trajectory(0.01, 5.0, 50), {3.0}, 3.0, 1.0, table), InputError);
  EXPECT_THROW(budget_from_trajectory(constant_trajectory(1.0, 5.0, 50), {3.0}, 3.0, 1.0, table), InputError);
}
