#pragma once

// A-posteriori control of u - u_a for an approximate solution u_a with
// differential error eps_p(t), datum error delta_p and growth D_p(t):
//   R_n' = -mu R_n + (G^_n D_n + K^_n D_{n+1}) R_n + G^_n R_n^2 + eps_n,   R_n(0) = delta_n
//   R_p' = -mu R_p + (G^_p D_p + K^_p D_{p+1} + G^_pn R_n) R_p + eps_p,   R_p(0) = delta_p
// Then ||u(t) - u_a(t)||_q <= R_q(t) for t < T_c.

#include <limits>
#include <map>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "mhd/constants.hpp"
#include "mhd/integrator.hpp"

namespace mhd {

struct EstimatorSet {
  std::vector<double> t;
  std::map<double, std::vector<double>> eps;  ///< missing order means eps = 0
  std::map<double, double> delta;
  std::map<double, std::vector<double>> growth;

  /// Checks grid, lengths, nonnegativity and presence of the given orders.
  void validate(const std::vector<double>& orders) const;
  /// Zero series when absent.
  std::vector<double> eps_series(double p) const;
  bool eps_is_zero(double p) const;
  double delta_of(double p) const;
  const std::vector<double>& growth_of(double p) const;
  std::uint64_t digest() const;
};

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

struct RiccatiResult {
  std::vector<double> t;  ///< grid nodes before T_c
  std::vector<double> R;
  double T_c = kInfinity;  ///< +inf when R stays finite on the whole grid
  bool global() const { return T_c == kInfinity; }
};

struct ClosedFormResult : RiccatiResult {
  std::vector<double> L;
};

/// RK4 on the estimator grid (cubic interpolation for stage times), with a
/// reciprocal change of variable near blow-up and a step-halving check.
/// Throws RefinementError if the coarse and fine solutions disagree by more
/// than 1e-6 relative.
RiccatiResult riccati_certify(const EstimatorSet& est, double n, double mu, const ConstantsTable& constants);

/// Closed form for eps_n = 0:
///   R_n = delta_n e^{E} / (1 - G^_n delta_n L_n),  E = -mu t + G^_n J_n + K^_n J_{n+1},
///   L_n = int_0^t e^{E} (Gauss-Legendre per interval), T_c the root of G^_n delta_n L_n = 1 (bisection to 1e-10).
ClosedFormResult riccati_closed_form(const EstimatorSet& est, double n, double mu, const ConstantsTable& constants);

struct LinearBoundResult {
  std::vector<double> R;
  /// max over interval pairs of |R(t_{i+2}) - R(t_i) - int rhs| / scale.
  double residual = 0.0;
};

/// R_p = e^{-mu t + A_p}(delta_p + int_0^t e^{mu s - A_p} eps_p),
/// A_p = int_0^t (G^_p D_p + K^_p D_{p+1} + G^_pn R_n). Rn may be shorter
/// than the grid (finite T_c); the result has the same length.
/// Throws RefinementError if the residual exceeds 1e-8.
LinearBoundResult linear_bound(const EstimatorSet& est, double p, double n, std::span<const double> Rn, double mu,
                               const ConstantsTable& constants);

/// linear_bound on the full Rn when it passes, otherwise on the longest prefix
/// (at least 3 nodes) that does. Blow-up of R_n near a finite T_c is the usual
/// cause. Throws RefinementError if no prefix passes.
LinearBoundResult linear_bound_resolved(const EstimatorSet& est, double p, double n, std::span<const double> Rn,
                                        double mu, const ConstantsTable& constants);

struct Certificate {
  double n = 0.0;
  double mu = 0.0;
  double T_c = kInfinity;
  std::vector<double> t;
  std::vector<double> Rn;
  std::map<double, std::vector<double>> Rp;
  std::string method;
  std::vector<std::string> notes;
  std::string inputs_digest;

  bool global() const { return T_c == kInfinity; }
  nlohmann::json to_json() const;
  std::string to_csv() const;
};

struct CertifyOptions {
  /// Use galerkin_residual for eps (interpolated onto the norm grid);
  /// otherwise the approximant is treated as exact (eps = 0).
  bool galerkin_residual = false;
};

/// Tautological estimators from the trajectory norms, then the Riccati and
/// linear bounds. datum_error must contain n and every p.
Certificate certify(const Trajectory& approx, const std::map<double, double>& datum_error, double n,
                    const std::vector<double>& p_list, const ConstantsTable& constants,
                    const CertifyOptions& options = {});

/// Estimators of an approximant built from its norms; eps left empty.
EstimatorSet tautological_estimators(const Trajectory& approx, const std::map<double, double>& datum_error,
                                     const std::vector<double>& orders);

/// Order pairs (p, n) whose constants the certificate and radius computations use.
std::vector<std::pair<double, double>> required_constant_orders(double n, const std::vector<double>& p_list);

}  // namespace mhd
