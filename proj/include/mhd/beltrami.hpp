#pragma once

// Generalized Beltrami flows and pairs: divergence-free Laplacian
// eigenfields w with P(w, w) = 0, and pairs (v, c) that additionally satisfy
// (v . grad) c = (c . grad) v. Such data evolve as
//   (exp(-kappa^2 nu t) v, exp(-lambda^2 eta t) c).

#include <string>
#include <vector>

#include <json.hpp>

#include "mhd/budget.hpp"
#include "mhd/integrator.hpp"
#include "mhd/spectral.hpp"

namespace mhd {

/// sqrt(2) (2pi)^{-d/2} W sin(k.x + psi). Rejects W.k != 0 with
/// AdmissibilityError("W.k=0").
SpectralField make_gb_flow(const std::vector<double>& W, const WaveVector& k, double psi, int cutoff);

/// (2pi)^{-3/2} [eps (alpha, beta, 0) sin(kappa x3) + (-beta, alpha, 0) cos(kappa x3)],
/// with curl w = eps kappa w.
SpectralField make_beltrami_3d(double alpha, double beta, int eps, int kappa, int cutoff);

/// Coefficientwise i k x v_k (d = 3 only).
SpectralField curl3d(const SpectralField& field);

struct BeltramiPairSpec {
  enum class Kind { Scaled, Sinusoidal, Trkal };
  Kind kind = Kind::Trkal;
  int dim = 3;

  // scaled: base flow w0 (sine flow W, k, psi, or a 3D Beltrami flow),
  // pair (w0, alpha w0) for slot 0, (alpha w0, w0) for slot 1
  std::string base = "sine";  ///< "sine" or "beltrami3d"
  std::vector<double> W;
  std::vector<int> k;
  double psi = 0.0;
  double scale = 0.0;
  int slot = 0;

  // sinusoidal: sqrt(2)(2pi)^{-d/2} V sin(k.x), sqrt(2)(2pi)^{-d/2} C sin(l.x + phi)
  std::vector<double> V;
  std::vector<double> C;
  std::vector<int> ell;
  double phi = 0.0;

  // trkal (and the beltrami3d base): two 3D Beltrami flows
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double delta = 0.0;
  int eps = 1;
  int sigma = 1;
  int kappa = 1;
  int lambda = 1;

  nlohmann::json to_json() const;
  static BeltramiPairSpec from_json(const nlohmann::json& doc);
};

std::string kind_name(BeltramiPairSpec::Kind kind);
BeltramiPairSpec::Kind parse_kind(const std::string& name);

struct GBPair {
  FieldPair pair;
  double kappa = 1.0;
  double lambda = 1.0;
};

/// Builds the pair; violated admissibility conditions raise
/// AdmissibilityError naming the condition.
GBPair make_gb_pair(const BeltramiPairSpec& spec, int cutoff);

struct GBReport {
  bool velocity_eigen = true;
  bool magnetic_eigen = true;
  bool divergence_free = true;
  bool velocity_self_advection = true;  ///< P(v0, v0) = 0
  bool magnetic_self_advection = true;  ///< P(c0, c0) = 0
  bool cross_advection = true;          ///< (v0.grad)c0 = (c0.grad)v0
  double kappa = 1.0;
  double lambda = 1.0;
  double residual_velocity_self = 0.0;
  double residual_magnetic_self = 0.0;
  double residual_cross = 0.0;
  std::vector<std::string> failures;

  bool ok() const {
    return velocity_eigen && magnetic_eigen && divergence_free && velocity_self_advection &&
           magnetic_self_advection && cross_advection;
  }
  nlohmann::json to_json() const;
};

/// All checks to 1e-12 relative, using the exact convolution.
GBReport verify_gb_pair(const FieldPair& pair);

/// Closed-form evolution of a verified pair.
class BeltramiSolution {
 public:
  /// Verifies the pair; throws AdmissibilityError if any check fails.
  explicit BeltramiSolution(FieldPair pair0);
  BeltramiSolution(GBPair pair);

  const FieldPair& initial() const { return pair0_; }
  double kappa() const { return kappa_; }
  double lambda() const { return lambda_; }

  FieldPair at(double nu, double eta, double t) const;
  /// Analytic pair norm of order p at time t.
  double norm(double nu, double eta, double t, double p) const;

 private:
  FieldPair pair0_;
  double kappa_ = 1.0;
  double lambda_ = 1.0;
};

/// (exp(-kappa^2 nu t) v0, exp(-lambda^2 eta t) c0); verifies first.
FieldPair exact_solution(const FieldPair& pair0, double nu, double eta, double t);

/// Closed-form trajectory with states at every given time.
Trajectory exact_trajectory(const BeltramiSolution& sol, double nu, double eta, const std::vector<double>& times,
                            const std::vector<double>& orders);

/// J_p = kappa^{p-2}/nu ||v0||_0 + lambda^{p-2}/eta ||c0||_0.
DecayBudget analytic_budget(const BeltramiSolution& sol, double nu, double eta, const std::vector<double>& orders);

}  // namespace mhd
