#include "mhd/beltrami.hpp"

#include <algorithm>
#include <cmath>

#include "mhd/bilinear.hpp"
#include "mhd/errors.hpp"

namespace mhd {

namespace {

constexpr double kTol = 1e-12;

double dot(const std::vector<double>& a, const std::vector<int>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double length(const std::vector<double>& a) {
  double s = 0.0;
  for (double x : a) s += x * x;
  return std::sqrt(s);
}

double length(const std::vector<int>& a) {
  double s = 0.0;
  for (int x : a) s += static_cast<double>(x) * x;
  return std::sqrt(s);
}

// |a.b| <= tol |a||b| counts as zero
bool orthogonal(const std::vector<double>& a, const std::vector<int>& b) {
  return std::abs(dot(a, b)) <= kTol * length(a) * length(b);
}

void require_wave(const std::vector<int>& k, int dim, int cutoff, const std::string& name) {
  if (static_cast<int>(k.size()) != dim) throw InputError(name + " must have " + std::to_string(dim) + " components");
  const WaveVector w(k);
  if (w.is_zero()) throw InputError(name + " must be nonzero");
  if (w.max_abs() > cutoff) {
    throw InputError(name + " = " + w.to_string() + " exceeds cutoff " + std::to_string(cutoff));
  }
}

// sqrt(2)(2pi)^{-d/2} A sin(k.x + psi) without admissibility checks
SpectralField sine_field(const std::vector<double>& A, const std::vector<int>& k, double psi, int cutoff) {
  const int d = static_cast<int>(k.size());
  SpectralField f(d, cutoff);
  psi = std::remainder(psi, 2.0 * M_PI);
  // sin(theta) = (e^{i theta} - e^{-i theta}) / 2i; e^{ik.x} = (2pi)^{d/2} e_k
  const Complex c = Complex(0.0, -1.0) * std::polar(1.0, psi) / std::sqrt(2.0);
  std::vector<Complex> value(A.size());
  for (std::size_t r = 0; r < A.size(); ++r) value[r] = c * A[r];
  if (length(A) > 0.0) f.set_coefficient(WaveVector(k), value);
  f.mark_solenoidal(orthogonal(A, k));
  return f;
}

// Shell radius^2 of the support, 0 for the zero field, -1 if mixed.
double detect_shell(const SpectralField& f) {
  const auto& layout = f.layout();
  double max_m2 = 0.0;
  std::vector<double> m2(layout.size(), 0.0);
  for (std::size_t i = 0; i < layout.size(); ++i) {
    for (const auto& c : f.mode_coefficients(i)) m2[i] += std::norm(c);
    max_m2 = std::max(max_m2, m2[i]);
  }
  if (max_m2 == 0.0) return 0.0;
  double shell = 0.0;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (m2[i] <= 1e-24 * max_m2) continue;
    if (shell == 0.0) {
      shell = layout.norm2(i);
    } else if (layout.norm2(i) != shell) {
      return -1.0;
    }
  }
  return shell;
}

double field_L2_of_full(const SpectralField& f) {
  double s = sobolev_norm(f, 0.0);
  double m = 0.0;
  for (double x : f.mean_mode()) m += x * x;
  return std::sqrt(s * s + m);
}

}  // namespace

SpectralField make_gb_flow(const std::vector<double>& W, const WaveVector& k, double psi, int cutoff) {
  require_wave(k.components(), k.dim(), cutoff, "k");
  if (static_cast<int>(W.size()) != k.dim()) throw InputError("W and k differ in dimension");
  if (!orthogonal(W, k.components())) {
    throw AdmissibilityError("W.k=0", "sine flow needs W.k = 0, got W.k = " + std::to_string(dot(W, k.components())));
  }
  return sine_field(W, k.components(), psi, cutoff);
}

SpectralField make_beltrami_3d(double alpha, double beta, int eps, int kappa, int cutoff) {
  if (kappa < 1) throw InputError("kappa must be a positive integer");
  if (eps != 1 && eps != -1) throw InputError("eps must be +1 or -1");
  if (cutoff < kappa) throw InputError("cutoff must be >= kappa");
  SpectralField f(3, cutoff);
  // coefficient at (0,0,kappa): eps (alpha, beta, 0)/(2i) + (-beta, alpha, 0)/2
  const Complex half_i = Complex(0.0, -0.5) * static_cast<double>(eps);
  const std::vector<Complex> value = {half_i * alpha - 0.5 * beta, half_i * beta + 0.5 * alpha, 0.0};
  if (alpha != 0.0 || beta != 0.0) f.set_coefficient(WaveVector{0, 0, kappa}, value);
  f.mark_solenoidal(true);
  return f;
}

SpectralField curl3d(const SpectralField& field) {
  if (field.dim() != 3) throw InputError("curl3d needs d = 3");
  SpectralField out(3, field.cutoff());
  const auto& layout = field.layout();
  const Complex I(0.0, 1.0);
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const auto& k = layout.mode(i);
    const auto v = field.mode_coefficients(i);
    auto o = out.mode_coefficients(i);
    o[0] = I * (static_cast<double>(k[1]) * v[2] - static_cast<double>(k[2]) * v[1]);
    o[1] = I * (static_cast<double>(k[2]) * v[0] - static_cast<double>(k[0]) * v[2]);
    o[2] = I * (static_cast<double>(k[0]) * v[1] - static_cast<double>(k[1]) * v[0]);
  }
  out.mark_solenoidal(true);
  return out;
}

std::string kind_name(BeltramiPairSpec::Kind kind) {
  switch (kind) {
    case BeltramiPairSpec::Kind::Scaled: return "scaled";
    case BeltramiPairSpec::Kind::Sinusoidal: return "sinusoidal";
    case BeltramiPairSpec::Kind::Trkal: return "trkal";
  }
  return "trkal";
}

BeltramiPairSpec::Kind parse_kind(const std::string& name) {
  if (name == "scaled") return BeltramiPairSpec::Kind::Scaled;
  if (name == "sinusoidal") return BeltramiPairSpec::Kind::Sinusoidal;
  if (name == "trkal") return BeltramiPairSpec::Kind::Trkal;
  throw InputError("unknown Beltrami pair kind '" + name + "' (scaled, sinusoidal, trkal)");
}

nlohmann::json BeltramiPairSpec::to_json() const {
  nlohmann::json doc = {{"kind", kind_name(kind)}, {"d", dim}};
  switch (kind) {
    case Kind::Scaled:
      doc.update({{"base", base}, {"scale", scale}, {"slot", slot}});
      if (base == "sine") {
        doc.update({{"W", W}, {"k", k}, {"psi", psi}});
      } else {
        doc.update({{"alpha", alpha}, {"beta", beta}, {"eps", eps}, {"kappa", kappa}});
      }
      break;
    case Kind::Sinusoidal:
      doc.update({{"V", V}, {"C", C}, {"k", k}, {"ell", ell}, {"phi", phi}});
      break;
    case Kind::Trkal:
      doc.update({{"alpha", alpha}, {"beta", beta}, {"gamma", gamma}, {"delta", delta}, {"eps", eps},
                  {"sigma", sigma}, {"kappa", kappa}, {"lambda", lambda}});
      break;
  }
  return doc;
}

BeltramiPairSpec BeltramiPairSpec::from_json(const nlohmann::json& doc) {
  BeltramiPairSpec s;
  try {
    s.kind = parse_kind(doc.value("kind", std::string("trkal")));
    s.dim = doc.value("d", s.dim);
    s.base = doc.value("base", s.base);
    s.W = doc.value("W", s.W);
    s.k = doc.value("k", s.k);
    s.psi = doc.value("psi", s.psi);
    s.scale = doc.value("scale", s.scale);
    s.slot = doc.value("slot", s.slot);
    s.V = doc.value("V", s.V);
    s.C = doc.value("C", s.C);
    s.ell = doc.value("ell", s.ell);
    s.phi = doc.value("phi", s.phi);
    s.alpha = doc.value("alpha", s.alpha);
    s.beta = doc.value("beta", s.beta);
    s.gamma = doc.value("gamma", s.gamma);
    s.delta = doc.value("delta", s.delta);
    s.eps = doc.value("eps", s.eps);
    s.sigma = doc.value("sigma", s.sigma);
    s.kappa = doc.value("kappa", s.kappa);
    s.lambda = doc.value("lambda", s.lambda);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed Beltrami spec: ") + e.what());
  }
  return s;
}

GBPair make_gb_pair(const BeltramiPairSpec& spec, int cutoff) {
  using Kind = BeltramiPairSpec::Kind;
  switch (spec.kind) {
    case Kind::Scaled: {
      SpectralField w0;
      double eigen = 1.0;
      if (spec.base == "sine") {
        w0 = make_gb_flow(spec.W, WaveVector(spec.k), spec.psi, cutoff);
        eigen = length(spec.k);
      } else if (spec.base == "beltrami3d") {
        if (spec.kappa < 1) throw AdmissibilityError("kappa>=1", "kappa must be a positive integer");
        w0 = make_beltrami_3d(spec.alpha, spec.beta, spec.eps, spec.kappa, cutoff);
        eigen = spec.kappa;
      } else {
        throw InputError("scaled pair base must be 'sine' or 'beltrami3d'");
      }
      if (spec.slot != 0 && spec.slot != 1) throw InputError("scaled pair slot must be 0 or 1");
      SpectralField scaled = spec.scale * w0;
      scaled.mark_solenoidal(true);
      if (spec.slot == 0) return {{w0, scaled}, eigen, eigen};
      return {{scaled, w0}, eigen, eigen};
    }
    case Kind::Sinusoidal: {
      const int d = static_cast<int>(spec.k.size());
      require_wave(spec.k, d, cutoff, "k");
      require_wave(spec.ell, d, cutoff, "ell");
      if (static_cast<int>(spec.V.size()) != d || static_cast<int>(spec.C.size()) != d) {
        throw InputError("V, C, k and ell must share the dimension");
      }
      const double vl = dot(spec.V, spec.ell);
      const double ck = dot(spec.C, spec.k);
      if (!orthogonal(spec.V, spec.k)) throw AdmissibilityError("V.k=0", "sinusoidal pair needs V.k = 0");
      if (!orthogonal(spec.C, spec.ell)) throw AdmissibilityError("C.l=0", "sinusoidal pair needs C.l = 0");
      if (!orthogonal(spec.V, spec.ell) && length(spec.C) > 0.0) {
        throw AdmissibilityError("(V.l)C=0", "sinusoidal pair needs (V.l) C = 0, got V.l = " + std::to_string(vl));
      }
      if (!orthogonal(spec.C, spec.k) && length(spec.V) > 0.0) {
        throw AdmissibilityError("(C.k)V=0", "sinusoidal pair needs (C.k) V = 0, got C.k = " + std::to_string(ck));
      }
      SpectralField v = sine_field(spec.V, spec.k, 0.0, cutoff);
      SpectralField c = sine_field(spec.C, spec.ell, spec.phi, cutoff);
      v.mark_solenoidal(true);
      c.mark_solenoidal(true);
      return {{std::move(v), std::move(c)}, length(spec.k), length(spec.ell)};
    }
    case Kind::Trkal: {
      if (spec.kappa < 1) throw AdmissibilityError("kappa>=1", "kappa must be a positive integer");
      if (spec.lambda < 1) throw AdmissibilityError("lambda>=1", "lambda must be a positive integer");
      if (std::abs(spec.eps) != 1) throw AdmissibilityError("eps=+-1", "eps must be +1 or -1");
      if (std::abs(spec.sigma) != 1) throw AdmissibilityError("sigma=+-1", "sigma must be +1 or -1");
      if (cutoff < std::max(spec.kappa, spec.lambda)) throw InputError("cutoff must be >= max(kappa, lambda)");
      return {{make_beltrami_3d(spec.alpha, spec.beta, spec.eps, spec.kappa, cutoff),
               make_beltrami_3d(spec.gamma, spec.delta, spec.sigma, spec.lambda, cutoff)},
              static_cast<double>(spec.kappa),
              static_cast<double>(spec.lambda)};
    }
  }
  throw InputError("unknown pair kind");
}

nlohmann::json GBReport::to_json() const {
  return {{"ok", ok()},
          {"velocity_eigen", velocity_eigen},
          {"magnetic_eigen", magnetic_eigen},
          {"divergence_free", divergence_free},
          {"velocity_self_advection", velocity_self_advection},
          {"magnetic_self_advection", magnetic_self_advection},
          {"cross_advection", cross_advection},
          {"kappa", kappa},
          {"lambda", lambda},
          {"residual_velocity_self", residual_velocity_self},
          {"residual_magnetic_self", residual_magnetic_self},
          {"residual_cross", residual_cross},
          {"failures", failures}};
}

GBReport verify_gb_pair(const FieldPair& pair) {
  GBReport r;
  const auto& v = pair.velocity;
  const auto& c = pair.magnetic;
  for (const auto* f : {&v, &c}) {
    const auto rep = validate(*f, kTol);
    if (!rep.ok()) {
      r.divergence_free = false;
      r.failures.push_back("not divergence-free or not mean-zero");
      break;
    }
  }
  auto eigen = [&](const SpectralField& f, bool& flag, double& value, const char* name) {
    const double shell = detect_shell(f);
    if (shell < 0.0) {
      flag = false;
      r.failures.push_back(std::string(name) + ": not an eigenfield (support on several shells)");
      return;
    }
    value = shell == 0.0 ? 1.0 : std::sqrt(shell);
    SpectralField res = laplacian(f);
    res.axpy(value * value, f);
    if (sobolev_norm(res, 0.0) > kTol * value * value * sobolev_norm(f, 0.0)) {
      flag = false;
      r.failures.push_back(std::string(name) + ": Laplacian eigen-relation fails");
    }
  };
  eigen(v, r.velocity_eigen, r.kappa, "velocity");
  eigen(c, r.magnetic_eigen, r.lambda, "magnetic");

  const double v0 = sobolev_norm(v, 0.0), v1 = sobolev_norm(v, 1.0);
  const double c0 = sobolev_norm(c, 0.0), c1 = sobolev_norm(c, 1.0);
  r.residual_velocity_self = sobolev_norm(P(v, v), 0.0);
  r.residual_magnetic_self = sobolev_norm(P(c, c), 0.0);
  if (r.residual_velocity_self > kTol * v0 * v1) {
    r.velocity_self_advection = false;
    r.failures.push_back("P(v0, v0) != 0");
  }
  if (r.residual_magnetic_self > kTol * c0 * c1) {
    r.magnetic_self_advection = false;
    r.failures.push_back("P(c0, c0) != 0");
  }
  SpectralField diff = advect(v, c);
  diff -= advect(c, v);
  r.residual_cross = field_L2_of_full(diff);
  if (r.residual_cross > kTol * std::max(v0 * c1, c0 * v1)) {
    r.cross_advection = false;
    r.failures.push_back("(v0.grad)c0 != (c0.grad)v0");
  }
  return r;
}

BeltramiSolution::BeltramiSolution(FieldPair pair0) : pair0_(std::move(pair0)) {
  const auto report = verify_gb_pair(pair0_);
  if (!report.ok()) {
    throw AdmissibilityError("generalized-beltrami-pair", "not a generalized Beltrami pair: " + report.failures.front());
  }
  kappa_ = report.kappa;
  lambda_ = report.lambda;
}

BeltramiSolution::BeltramiSolution(GBPair pair) : BeltramiSolution(std::move(pair.pair)) {}

FieldPair BeltramiSolution::at(double nu, double eta, double t) const {
  if (!(nu > 0.0) || !(eta > 0.0)) throw InputError("nu and eta must be positive");
  FieldPair out = pair0_;
  out.velocity *= std::exp(-kappa_ * kappa_ * nu * t);
  out.magnetic *= std::exp(-lambda_ * lambda_ * eta * t);
  return out;
}

double BeltramiSolution::norm(double nu, double eta, double t, double p) const {
  const double a = std::exp(-kappa_ * kappa_ * nu * t) * std::pow(kappa_, p) * sobolev_norm(pair0_.velocity, 0.0);
  const double b = std::exp(-lambda_ * lambda_ * eta * t) * std::pow(lambda_, p) * sobolev_norm(pair0_.magnetic, 0.0);
  return std::sqrt(a * a + b * b);
}

FieldPair exact_solution(const FieldPair& pair0, double nu, double eta, double t) {
  return BeltramiSolution(pair0).at(nu, eta, t);
}

Trajectory exact_trajectory(const BeltramiSolution& sol, double nu, double eta, const std::vector<double>& times,
                            const std::vector<double>& orders) {
  std::vector<FieldPair> states;
  states.reserve(times.size());
  for (double t : times) states.push_back(sol.at(nu, eta, t));
  SolverConfig meta;
  meta.nu = nu;
  meta.eta = eta;
  meta.cutoff = sol.initial().cutoff();
  meta.t_end = times.empty() ? 0.0 : times.back();
  meta.dt = times.size() > 1 ? times[1] - times[0] : meta.t_end;
  meta.recorded_orders = orders;
  return trajectory_from_states(times, std::move(states), orders, meta);
}

DecayBudget analytic_budget(const BeltramiSolution& sol, double nu, double eta, const std::vector<double>& orders) {
  if (!(nu > 0.0) || !(eta > 0.0)) throw InputError("nu and eta must be positive");
  DecayBudget budget;
  const double v0 = sobolev_norm(sol.initial().velocity, 0.0);
  const double c0 = sobolev_norm(sol.initial().magnetic, 0.0);
  for (double p : orders) {
    const double J = std::pow(sol.kappa(), p - 2.0) / nu * v0 + std::pow(sol.lambda(), p - 2.0) / eta * c0;
    budget.set(p, J, "analytic-beltrami");
  }
  return budget;
}

}  // namespace mhd
