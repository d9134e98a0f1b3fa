#include <cmath>
#include <cstdlib>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "mhd/beltrami.hpp"
#include "mhd/bilinear.hpp"
#include "mhd/errors.hpp"
#include "mhd/integrator.hpp"
#include "mhd/spectral.hpp"

using namespace mhd;

namespace {

double max_abs_diff(const SpectralField& a, const SpectralField& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) worst = std::max(worst, std::abs(a.data()[i] - b.data()[i]));
  return worst;
}

double pair_distance(const FieldPair& a, const FieldPair& b, double p) { return pair_norm(a - b, p); }

GBPair trkal(double a, double b, double g, double dl, int kappa, int lambda, int cutoff) {
  BeltramiPairSpec spec;
  spec.alpha = a;
  spec.beta = b;
  spec.gamma = g;
  spec.delta = dl;
  spec.kappa = kappa;
  spec.lambda = lambda;
  return make_gb_pair(spec, cutoff);
}

FieldPair random_pair(std::uint64_t seed, int dim, int cutoff, double amplitude) {
  FieldPair p{random_field(seed, dim, cutoff, 1.0), random_field(seed + 1000, dim, cutoff, 1.0)};
  p *= amplitude / pair_norm(p, 0.0);
  return p;
}

SolverConfig config(double nu, double eta, double dt, double t_end, int cutoff) {
  SolverConfig c;
  c.nu = nu;
  c.eta = eta;
  c.dt = dt;
  c.t_end = t_end;
  c.cutoff = cutoff;
  return c;
}

}  // namespace

TEST(Rhs, ZeroPair) {
  const FieldPair r = rhs(FieldPair(3, 2), 0.5, 0.5);
  EXPECT_TRUE(r.velocity.is_zero() && r.magnetic.is_zero());
}

TEST(Rhs, BeltramiPairIsLinear) {
  const GBPair gb = trkal(3.0, 4.0, 1.0, 0.5, 1, 2, 2);
  for (bool pseudo : {true, false}) {
    const FieldPair r = rhs(gb.pair, 0.1, 0.3, pseudo);
    EXPECT_LE(max_abs_diff(r.velocity, -0.1 * gb.pair.velocity), 1e-12);
    EXPECT_LE(max_abs_diff(r.magnetic, -4.0 * 0.3 * gb.pair.magnetic), 1e-12);
  }
}

TEST(Rhs, NavierStokesEmbedding) {
  const FieldPair u{random_field(3, 3, 2, 1.0), SpectralField(3, 2)};
  const FieldPair r = rhs(u, 0.2, 0.4);
  EXPECT_TRUE(r.magnetic.is_zero());
  const SpectralField ns = 0.2 * laplacian(u.velocity) + P(u.velocity, u.velocity).with_cutoff(2);
  EXPECT_LE(max_abs_diff(r.velocity, ns), 1e-13);
}

TEST(Integrate, BeltramiClosedForm) {
  const GBPair gb = trkal(3.0, 4.0, 1.0, 0.0, 1, 2, 2);
  SolverConfig c = config(0.1, 0.1, 1e-3, 1.0, 2);
  c.recorded_orders = {0.0, 3.0};
  const Trajectory traj = integrate(gb.pair, c);
  const BeltramiSolution sol(gb);
  ASSERT_EQ(traj.times.size(), 1001u);
  for (std::size_t i = 0; i < traj.times.size(); ++i) {
    for (double p : {0.0, 3.0}) {
      const double exact = sol.norm(0.1, 0.1, traj.times[i], p);
      EXPECT_NEAR(traj.norm_series(p)[i], exact, 1e-12 * exact);
    }
  }
  const FieldPair last = traj.snapshots.back();
  EXPECT_LE(pair_distance(last, sol.at(0.1, 0.1, 1.0), 0.0), 1e-12);
}

TEST(Integrate, ExactHeatFactorAnyStep) {
  // with the quadratic term inactive the scheme is exact for any dt
  const GBPair gb = trkal(1.0, 2.0, 0.5, -1.0, 1, 2, 2);
  const Trajectory traj = integrate(gb.pair, config(0.5, 0.2, 0.5, 5.0, 2));
  const FieldPair ref = exact_solution(gb.pair, 0.5, 0.2, 5.0);
  EXPECT_LE(pair_distance(traj.snapshots.back(), ref, 0.0), 1e-14 * pair_norm(ref, 0.0));
}

TEST(Integrate, ZeroDatum) {
  const Trajectory traj = integrate(FieldPair(2, 3), config(1.0, 1.0, 0.01, 0.1, 3));
  for (double v : traj.norm_series(0.0)) EXPECT_EQ(v, 0.0);
}

TEST(Integrate, FourthOrderSelfConvergence) {
  const FieldPair u0 = random_pair(7, 2, 3, 2.0);
  auto final_state = [&](double dt) { return integrate(u0, config(0.05, 0.08, dt, 0.4, 3)).snapshots.back(); };
  const FieldPair a = final_state(0.04), b = final_state(0.02), c = final_state(0.01);
  const double ratio = pair_distance(a, b, 0.0) / pair_distance(b, c, 0.0);
  EXPECT_GT(ratio, 14.0);
  EXPECT_LT(ratio, 18.0);
}

TEST(Integrate, StepCountAndSnapshots) {
  SolverConfig c = config(1.0, 1.0, 0.03, 0.1, 2);
  c.record_stride = 2;
  const Trajectory traj = integrate(random_pair(1, 3, 2, 0.5), c);
  ASSERT_EQ(traj.times.size(), 5u);  // dt shrunk to 0.025
  EXPECT_DOUBLE_EQ(traj.times.back(), 0.1);
  EXPECT_EQ(traj.snapshot_times, (std::vector<double>{0.0, traj.times[2], 0.1}));
  EXPECT_THROW(traj.norm_series(1.0), InputError);
}

TEST(Integrate, StructurePreservedAndEnergyDecays) {
  const FieldPair u0 = random_pair(9, 3, 2, 3.0);
  SolverConfig c = config(0.02, 0.03, 5e-3, 1.0, 2);
  c.record_stride = 1;
  const Trajectory traj = integrate(u0, c);
  const auto energy = traj.norm_series(0.0);
  for (std::size_t i = 1; i < energy.size(); ++i) EXPECT_LE(energy[i], energy[i - 1]);
  for (const FieldPair& s : traj.snapshots) {
    for (const SpectralField* f : {&s.velocity, &s.magnetic}) {
      const auto report = validate(*f);
      EXPECT_TRUE(report.ok());
      EXPECT_LE(report.divergence_residual, 1e-12);
    }
  }
}

TEST(Integrate, NavierStokesSlotStaysZero) {
  const FieldPair u0{random_field(4, 3, 2, 1.0), SpectralField(3, 2)};
  const Trajectory traj = integrate(u0, config(0.1, 0.1, 0.01, 0.2, 2));
  for (const FieldPair& s : traj.snapshots) EXPECT_TRUE(s.magnetic.is_zero());
}

TEST(Integrate, PseudoAndDirectAgree) {
  const FieldPair u0 = random_pair(5, 2, 2, 1.0);
  SolverConfig c = config(0.1, 0.1, 0.01, 0.2, 2);
  const FieldPair fast = integrate(u0, c).snapshots.back();
  c.pseudo_spectral = false;
  const FieldPair direct = integrate(u0, c).snapshots.back();
  EXPECT_LE(pair_distance(fast, direct, 0.0), 1e-13);
}

TEST(Integrate, IndependentOfThreadCount) {
  const FieldPair u0 = random_pair(6, 3, 2, 1.0);
  const SolverConfig c = config(0.1, 0.1, 0.01, 0.1, 2);
  setenv("MHD_CERTIFY_THREADS", "1", 1);
  const Trajectory one = integrate(u0, c);
  setenv("MHD_CERTIFY_THREADS", "4", 1);
  const Trajectory four = integrate(u0, c);
  unsetenv("MHD_CERTIFY_THREADS");
  EXPECT_EQ(one.to_csv(), four.to_csv());
}

TEST(Integrate, Rejections) {
  const FieldPair u0 = random_pair(2, 3, 2, 1.0);
  EXPECT_THROW(integrate(u0, config(0.0, 1.0, 0.1, 1.0, 2)), InputError);
  EXPECT_THROW(integrate(u0, config(1.0, 1.0, 2.0, 1.0, 2)), InputError);
  EXPECT_THROW(integrate(u0, config(1.0, 1.0, 0.1, 1.0, 3)), InputError);
  FieldPair bad = u0;
  bad.velocity.set_coefficient({1, 0, 0}, std::vector<Complex>{1.0, 0.0, 0.0});
  EXPECT_THROW(integrate(bad, config(1.0, 1.0, 0.1, 1.0, 2)), InputError);
}

TEST(Integrate, OverflowReportsLastFiniteTime) {
  const FieldPair u0 = random_pair(3, 2, 2, 1e4);
  try {
    integrate(u0, config(1e-3, 1e-3, 1.0, 200.0, 2));
    FAIL() << "expected NumericalError";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("last finite time"), std::string::npos);
  }
}

TEST(Trajectory, CsvAndJson) {
  SolverConfig c = config(1.0, 1.0, 0.05, 0.1, 2);
  c.recorded_orders = {0.0, 2.5};
  const Trajectory traj = integrate(random_pair(1, 2, 2, 1.0), c);
  const std::string csv = traj.to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "t,norm_0,norm_2.5");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 4);
  const auto doc = traj.to_json(true);
  EXPECT_EQ(doc["times"].size(), 3u);
  EXPECT_TRUE(doc.contains("snapshots"));
  EXPECT_FALSE(traj.to_json(false).contains("snapshots"));
}

TEST(GalerkinResidual, BeltramiAndZero) {
  const GBPair gb = trkal(1.0, 1.0, 1.0, 1.0, 1, 2, 2);
  SolverConfig c = config(0.1, 0.1, 0.1, 0.5, 2);
  c.recorded_orders = {0.0, 3.0};
  const ResidualSeries r = galerkin_residual(integrate(gb.pair, c), 3.0);
  EXPECT_LE(r.values.front(), 1e-13);
  const ResidualSeries z = galerkin_residual(integrate(FieldPair(3, 2), c), 3.0);
  for (double v : z.values) EXPECT_EQ(v, 0.0);
  EXPECT_THROW(galerkin_residual(integrate(gb.pair, c), 2.0), InputError);
}

TEST(GalerkinResidual, BoundsDefectInLargerSpace) {
  const FieldPair u0 = random_pair(12, 3, 2, 2.0);
  SolverConfig c = config(0.1, 0.1, 0.02, 0.2, 2);
  c.recorded_orders = {0.0, 2.0};
  c.record_stride = 2;
  const Trajectory traj = integrate(u0, c);
  const ResidualSeries res = galerkin_residual(traj, 2.0);
  ASSERT_EQ(res.values.size(), traj.snapshots.size());
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const FieldPair& u = traj.snapshots[i];
    // d/dt u_M in the M=4 space is the M=2 right-hand side padded with zeros;
    // the M=4 equations evaluated at u_M use the exact convolution
    const FieldPair lhs = rhs(u, 0.1, 0.1, false).with_cutoff(4);
    const FieldPair big = rhs(u.with_cutoff(4), 0.1, 0.1, false);
    const double defect = pair_norm(big - lhs, 2.0);
    EXPECT_GE(res.values[i], defect * (1.0 - 1e-12));
    EXPECT_LE(res.values[i], defect * (1.0 + 1e-10) + 1e-14);
  }
}

TEST(TrajectoryFromStates, NormsComputed) {
  const GBPair gb = trkal(1.0, 0.0, 0.0, 2.0, 1, 1, 2);
  const BeltramiSolution sol(gb);
  const std::vector<double> times = {0.0, 0.5, 1.0};
  const Trajectory t = exact_trajectory(sol, 1.0, 1.0, times, {0.0, 1.0});
  for (std::size_t i = 0; i < times.size(); ++i) {
    EXPECT_NEAR(t.norm_series(1.0)[i], sol.norm(1.0, 1.0, times[i], 1.0), 1e-15);
  }
  EXPECT_EQ(t.snapshots.size(), 3u);
}
