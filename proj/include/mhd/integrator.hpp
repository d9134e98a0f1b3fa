#pragma once

// Galerkin truncation of d u/dt = A u + P_mhd(u, u) on the cube of cutoff M,
// advanced by integrating-factor RK4 with exact heat factors.

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mhd/spectral.hpp"

namespace mhd {

struct SolverConfig {
  double nu = 1.0;
  double eta = 1.0;
  double dt = 1e-3;
  double t_end = 1.0;
  int cutoff = 2;
  std::vector<double> recorded_orders{0.0};
  int record_stride = 1;
  /// FFT evaluation of the quadratic term; the direct convolution otherwise.
  bool pseudo_spectral = true;

  /// Throws InputError on nonpositive parameters or dt > t_end.
  void validate() const;
  nlohmann::json to_json() const;
};

struct Trajectory {
  /// Every time step, starting at 0.
  std::vector<double> times;
  std::vector<double> orders;
  /// norms[j][i]: pair norm of order orders[j] at times[i].
  std::vector<std::vector<double>> norms;
  std::vector<double> snapshot_times;
  std::vector<FieldPair> snapshots;
  SolverConfig meta;

  bool has_order(double p) const;
  /// Throws InputError if the order was not recorded.
  std::span<const double> norm_series(double p) const;

  /// "t,<p0>,<p1>,..." with round-trip formatting, one row per time.
  std::string to_csv() const;
  nlohmann::json to_json(bool include_states) const;
};

/// A u + truncation to M of P_mhd(u, u).
FieldPair rhs(const FieldPair& pair, double nu, double eta, bool pseudo_spectral = true);

/// One integrating-factor RK4 step of size h.
FieldPair step(const FieldPair& u, double h, double nu, double eta, bool pseudo_spectral = true);

/// Fixed-step integration to t_end with dt shrunk so that it divides t_end.
/// Throws NumericalError (naming the last finite time) on overflow.
Trajectory integrate(const FieldPair& pair0, const SolverConfig& config);

/// Builds a trajectory from states at the given times (all stored).
Trajectory trajectory_from_states(std::vector<double> times, std::vector<FieldPair> states,
                                  const std::vector<double>& orders, const SolverConfig& meta);

struct ResidualSeries {
  std::vector<double> times;
  std::vector<double> values;
};

/// ||tail of P_mhd(u, u) beyond the cube of cutoff M||_p at every snapshot.
ResidualSeries galerkin_residual(const Trajectory& traj, double p);

/// ||f restricted to modes with max|k_i| > inner||_p.
double tail_norm(const SpectralField& field, int inner, double p);

}  // namespace mhd
