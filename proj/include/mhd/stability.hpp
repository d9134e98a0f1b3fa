#pragma once

// Stability radius of a decaying base flow v and explicit envelopes for
// perturbed solutions:
//   rho_n = (mu / G^_n) exp(-G^_n J_n - K^_n J_{n+1})
//   ||u(t) - v(t)||_n <= C_n delta_n e^{-mu t},  ||u(t) - v(t)||_p <= C_p delta_p e^{-mu t}

#include <limits>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "mhd/budget.hpp"
#include "mhd/certifier.hpp"
#include "mhd/constants.hpp"
#include "mhd/integrator.hpp"

namespace mhd {

double stability_radius(const DecayBudget& budget, double n, double mu, const ConstantsTable& constants);

enum class Regime { Inside, InsideHalf, Outside };
std::string regime_name(Regime r);

struct StabilityReport {
  double n = 0.0;
  double mu = 0.0;
  double rho_n = 0.0;
  double delta_n = 0.0;
  Regime regime = Regime::Outside;
  bool has_envelopes = false;
  double C_n = 0.0;
  std::map<double, double> C_p;
  /// Present when delta_n <= rho_n / 2.
  bool has_simplified = false;
  double C_n_simplified = 0.0;
  std::map<double, double> C_p_simplified;
  DecayBudget budget;
  std::vector<std::string> formulas;

  nlohmann::json to_json() const;
  std::string summary() const;
};

/// Envelope coefficients for every p in p_list (p > n). delta_n >= rho_n
/// yields regime Outside without envelopes.
StabilityReport perturbation_envelopes(double delta_n, const std::vector<double>& p_list, const DecayBudget& budget,
                                       double n, double mu, const ConstantsTable& constants);

struct SmallDataResult {
  bool admissible = false;
  double threshold = 0.0;  ///< mu / G^_n
  std::map<double, double> C_p;
};

/// Admissible iff ||w0||_n < mu / G^_n; then ||w(t)||_p <= C_p e^{-mu t} with
///   C_p = ||w0||_p (1 - G^_n ||w0||_n / mu)^{-G^_pn / G^_n}  (p >= n),  C_p = C_n (p < n).
SmallDataResult small_data_check(const FieldPair& pair0, double n, double mu, const ConstantsTable& constants,
                                 const std::vector<double>& orders);
/// Same from precomputed norms (norms must contain n and every order).
SmallDataResult small_data_check(const std::map<double, double>& norms, double n, double mu,
                                 const ConstantsTable& constants, const std::vector<double>& orders);

struct DecayReport {
  bool condition_a = false;
  double t_a = kNaN;  ///< first time with ||v||_n < mu / G^_n
  double fitted_rate = 0.0;
  double decades = 0.0;
  double running_integral = 0.0;
  double tail_estimate = 0.0;
  std::string verdict;  ///< "decaying" or "inconclusive"
  std::vector<std::string> notes;

  nlohmann::json to_json() const;

  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
};

DecayReport decay_diagnostics(const Trajectory& traj, double n, double mu, const ConstantsTable& constants);

/// J_p = Simpson on [0, t0] + C_p(v(t0)) / mu with t0 the final time, which
/// must satisfy ||v(t0)||_n < mu / G^_n. Refuses (InputError) unless the
/// diagnostics verdict is "decaying".
DecayBudget budget_from_trajectory(const Trajectory& traj, const std::vector<double>& orders, double n, double mu,
                                   const ConstantsTable& constants);

}  // namespace mhd
