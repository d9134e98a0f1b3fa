#include "mhd/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mhd/digest.hpp"
#include "mhd/errors.hpp"
#include "mhd/quadrature.hpp"

namespace mhd {

namespace {

template <typename Map>
auto find_order(const Map& m, double p) {
  for (auto it = m.begin(); it != m.end(); ++it) {
    if (std::abs(it->first - p) < 1e-12) return it;
  }
  return m.end();
}

void require_n(double n, const ConstantsTable& constants) {
  if (!(n > 0.5 * constants.dim() + 1.0)) {
    throw InputError("order n must exceed d/2 + 1, got n = " + format_double(n));
  }
}

// Values of a node series at arbitrary times: exact at nodes, cubic between.
class Series {
 public:
  Series(std::span<const double> t, std::vector<double> v) : t_(t), v_(std::move(v)) {}

  double at(double s) const {
    const std::size_t i = bracket(t_, s);
    if (s == t_[i]) return v_[i];
    if (i + 1 < t_.size() && s == t_[i + 1]) return v_[i + 1];
    return interpolate_cubic(t_, v_, s);
  }
  double node(std::size_t i) const { return v_[i]; }
  const std::vector<double>& values() const { return v_; }

 private:
  std::span<const double> t_;
  std::vector<double> v_;
};

struct RiccatiProblem {
  std::span<const double> t;
  Series a;    // -mu + G^_n D_n + K^_n D_{n+1}
  Series eps;
  double G;
  double delta;
};

struct OdeRun {
  std::vector<std::size_t> nodes;  // grid indices reached before T_c
  std::vector<double> R;
  double T_c = kInfinity;
};

// R' = a R + G R^2 + eps; near blow-up y = 1/R with y' = -a y - G - eps y^2.
OdeRun run_riccati(const RiccatiProblem& pb, std::size_t stride) {
  const auto& t = pb.t;
  double amax = 0.0;
  for (double x : pb.a.values()) amax = std::max(amax, std::abs(x));
  const double switch_up = (2.0 * amax + 1.0) / pb.G;
  const double switch_down = 0.25 * switch_up;
  double eps_scale = 0.0;
  for (double x : pb.eps.values()) eps_scale = std::max(eps_scale, x);
  const double scale = std::max({pb.delta, eps_scale * (t.back() - t.front()), 1e-300});

  auto fR = [&](double s, double R) { return pb.a.at(s) * R + pb.G * R * R + pb.eps.at(s); };
  auto fy = [&](double s, double y) { return -pb.a.at(s) * y - pb.G - pb.eps.at(s) * y * y; };
  auto rk4 = [](auto&& f, double s, double x, double h) {
    const double k1 = f(s, x);
    const double k2 = f(s + 0.5 * h, x + 0.5 * h * k1);
    const double k3 = f(s + 0.5 * h, x + 0.5 * h * k2);
    const double k4 = f(s + h, x + h * k3);
    return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  };

  OdeRun run;
  double R = pb.delta;
  bool reciprocal = false;
  double y = 0.0;
  run.nodes.push_back(0);
  run.R.push_back(R);
  for (std::size_t i = 0; i + stride < t.size(); i += stride) {
    const double t0 = t[i];
    const double h = t[i + stride] - t0;
    if (!reciprocal && R > switch_up) {
      reciprocal = true;
      y = 1.0 / R;
    } else if (reciprocal && 1.0 / y < switch_down) {
      reciprocal = false;
      R = 1.0 / y;
    }
    if (reciprocal) {
      const double y_next = rk4(fy, t0, y, h);
      if (!(y_next > 0.0)) {
        // zero of y inside (t0, t0 + h]: bisect the step length
        double lo = 0.0, hi = h;
        while (hi - lo > 1e-10) {
          const double mid = 0.5 * (lo + hi);
          if (rk4(fy, t0, y, mid) > 0.0) lo = mid; else hi = mid;
        }
        run.T_c = t0 + lo;
        return run;
      }
      y = y_next;
      R = 1.0 / y;
    } else {
      const double R_next = rk4(fR, t0, R, h);
      if (!std::isfinite(R_next) || (R_next > 1e12 * scale && fR(t0 + h, R_next) > 0.0)) {
        run.T_c = t0;
        return run;
      }
      R = R_next;
    }
    run.nodes.push_back(i + stride);
    run.R.push_back(R);
  }
  return run;
}

RiccatiProblem make_problem(const EstimatorSet& est, double n, double mu, const ConstantsTable& constants) {
  const double G = constants.G_hat(n);
  const double K = constants.K_hat(n);
  const auto& Dn = est.growth_of(n);
  const auto& Dn1 = est.growth_of(n + 1.0);
  std::vector<double> a(est.t.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = -mu + G * Dn[i] + K * Dn1[i];
  return {est.t, Series(est.t, std::move(a)), Series(est.t, est.eps_series(n)), G, est.delta_of(n)};
}

double rel_diff(double a, double b) {
  const double den = std::max(std::abs(a), std::abs(b));
  return den == 0.0 ? 0.0 : std::abs(a - b) / den;
}

}  // namespace

// ---------------------------------------------------------------------------
// EstimatorSet

void EstimatorSet::validate(const std::vector<double>& orders) const {
  require_time_grid(t);
  auto check_series = [&](const std::vector<double>& s, const std::string& what) {
    if (s.size() != t.size()) throw InputError(what + " has the wrong length");
    for (double x : s) {
      if (!(x >= 0.0) || !std::isfinite(x)) throw InputError(what + " must be finite and nonnegative");
    }
  };
  for (const auto& [p, s] : eps) check_series(s, "eps_" + format_double(p));
  for (const auto& [p, s] : growth) check_series(s, "D_" + format_double(p));
  for (const auto& [p, d] : delta) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw InputError("delta_" + format_double(p) + " must be nonnegative");
  }
  for (double p : orders) {
    if (find_order(growth, p) == growth.end()) throw InputError("missing growth estimator D_" + format_double(p));
  }
}

std::vector<double> EstimatorSet::eps_series(double p) const {
  const auto it = find_order(eps, p);
  if (it == eps.end()) return std::vector<double>(t.size(), 0.0);
  return it->second;
}

bool EstimatorSet::eps_is_zero(double p) const {
  const auto it = find_order(eps, p);
  if (it == eps.end()) return true;
  return std::all_of(it->second.begin(), it->second.end(), [](double x) { return x == 0.0; });
}

double EstimatorSet::delta_of(double p) const {
  const auto it = find_order(delta, p);
  if (it == delta.end()) throw InputError("missing datum error delta_" + format_double(p));
  return it->second;
}

const std::vector<double>& EstimatorSet::growth_of(double p) const {
  const auto it = find_order(growth, p);
  if (it == growth.end()) throw InputError("missing growth estimator D_" + format_double(p));
  return it->second;
}

std::uint64_t EstimatorSet::digest() const {
  nlohmann::json doc = {{"t", t}};
  for (const auto& [p, s] : eps) doc["eps"][format_double(p)] = s;
  for (const auto& [p, d] : delta) doc["delta"][format_double(p)] = d;
  for (const auto& [p, s] : growth) doc["growth"][format_double(p)] = s;
  return fnv1a(doc.dump());
}

// ---------------------------------------------------------------------------
// Riccati bounds

RiccatiResult riccati_certify(const EstimatorSet& est, double n, double mu, const ConstantsTable& constants) {
  require_n(n, constants);
  if (!(mu > 0.0)) throw InputError("mu must be positive");
  est.validate({n, n + 1.0});
  const auto pb = make_problem(est, n, mu, constants);
  const OdeRun fine = run_riccati(pb, 1);

  if (est.t.size() >= 5) {
    const OdeRun coarse = run_riccati(pb, 2);
    const double H = 2.0 * (est.t.back() - est.t.front()) / static_cast<double>(est.t.size() - 1);
    const double horizon = std::min(fine.T_c, coarse.T_c) - 2.0 * H;
    for (std::size_t j = 0; j < coarse.nodes.size(); ++j) {
      const std::size_t i = coarse.nodes[j];
      if (i >= fine.R.size() || est.t[i] >= horizon) break;
      if (rel_diff(fine.R[i], coarse.R[j]) > 1e-6) {
        throw RefinementError("Riccati step-halving check failed at t=" + format_double(est.t[i]) +
                              ": refine the estimator grid");
      }
    }
    const double last_coarse = est.t[coarse.nodes.empty() ? 0 : (est.t.size() - 1) / 2 * 2];
    const bool fine_finite = fine.T_c != kInfinity;
    const bool coarse_finite = coarse.T_c != kInfinity;
    if (fine_finite && coarse_finite) {
      if (std::abs(fine.T_c - coarse.T_c) > 1e-6 * std::max(1.0, fine.T_c)) {
        throw RefinementError("Riccati step-halving check: T_c " + format_double(fine.T_c) + " vs " +
                              format_double(coarse.T_c));
      }
    } else if (fine_finite != coarse_finite) {
      const double tc = fine_finite ? fine.T_c : coarse.T_c;
      if (tc < last_coarse - H) {
        throw RefinementError("Riccati step-halving check: blow-up detected on one grid only");
      }
    }
  }

  RiccatiResult out;
  out.T_c = fine.T_c;
  out.R = fine.R;
  for (std::size_t i : fine.nodes) out.t.push_back(est.t[i]);
  return out;
}

ClosedFormResult riccati_closed_form(const EstimatorSet& est, double n, double mu, const ConstantsTable& constants) {
  require_n(n, constants);
  if (!(mu > 0.0)) throw InputError("mu must be positive");
  est.validate({n, n + 1.0});
  if (!est.eps_is_zero(n)) throw InputError("closed form needs eps_n = 0");
  const double G = constants.G_hat(n);
  const double K = constants.K_hat(n);
  const double delta = est.delta_of(n);
  const auto& t = est.t;
  const auto Jn = cumulative_simpson(t, est.growth_of(n));
  const auto Jn1 = cumulative_simpson(t, est.growth_of(n + 1.0));
  std::vector<double> E(t.size()), expE(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    E[i] = -mu * t[i] + G * Jn[i] + K * Jn1[i];
    expE[i] = std::exp(E[i]);
  }
  // L on each interval by Gauss-Legendre of exp(cubic interpolant of E)
  auto integrand = [&](double u) { return std::exp(interpolate_cubic(t, E, u)); };
  std::vector<double> L(t.size(), 0.0);
  for (std::size_t i = 1; i < t.size(); ++i) L[i] = L[i - 1] + gauss_legendre(integrand, t[i - 1], t[i]);

  ClosedFormResult out;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double q = G * delta * L[i];
    if (q >= 1.0) {
      // root of G delta L(s) = 1 in (t[i-1], t[i]]
      const double a = t[i - 1];
      auto Ls = [&](double s) {
        return L[i - 1] + gauss_legendre(integrand, a, s);
      };
      double lo = a, hi = t[i];
      while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (G * delta * Ls(mid) < 1.0) lo = mid; else hi = mid;
      }
      out.T_c = lo;
      break;
    }
    out.t.push_back(t[i]);
    out.L.push_back(L[i]);
    out.R.push_back(delta * expE[i] / (1.0 - q));
  }
  return out;
}

LinearBoundResult linear_bound(const EstimatorSet& est, double p, double n, std::span<const double> Rn, double mu,
                               const ConstantsTable& constants) {
  require_n(n, constants);
  if (!(p > n)) throw InputError("linear bound needs p > n");
  if (!(mu > 0.0)) throw InputError("mu must be positive");
  est.validate({p, p + 1.0});
  const std::size_t m = Rn.size();
  if (m == 0 || m > est.t.size()) throw InputError("R_n series does not fit the estimator grid");
  const double Gp = constants.G_hat(p);
  const double Kp = constants.K_hat(p);
  const double Gpn = constants.G_hat(p, n);
  const double delta = est.delta_of(p);
  const auto& Dp = est.growth_of(p);
  const auto& Dp1 = est.growth_of(p + 1.0);
  const auto eps_full = est.eps_series(p);

  const std::span<const double> t(est.t.data(), m);
  std::vector<double> c(m), eps(eps_full.begin(), eps_full.begin() + static_cast<std::ptrdiff_t>(m));
  for (std::size_t i = 0; i < m; ++i) c[i] = Gp * Dp[i] + Kp * Dp1[i] + Gpn * Rn[i];
  const auto A = cumulative_simpson(t, c);
  std::vector<double> g(m);
  for (std::size_t i = 0; i < m; ++i) g[i] = std::exp(mu * t[i] - A[i]) * eps[i];
  const auto Ig = cumulative_simpson(t, g);

  LinearBoundResult out;
  out.R.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.R[i] = std::exp(-mu * t[i] + A[i]) * (delta + Ig[i]);

  // integral form of the ODE over every pair of adjacent intervals
  std::vector<double> rhs(m);
  for (std::size_t i = 0; i < m; ++i) rhs[i] = (-mu + c[i]) * out.R[i] + eps[i];
  for (std::size_t i = 0; i + 2 < m; ++i) {
    const std::span<const double> ts(t.data() + i, 3);
    const std::span<const double> fs(rhs.data() + i, 3);
    const double integral = simpson(ts, fs);
    const double jump = out.R[i + 2] - out.R[i];
    const double scale = std::abs(out.R[i]) + std::abs(out.R[i + 2]);
    if (scale == 0.0) continue;
    out.residual = std::max(out.residual, std::abs(jump - integral) / scale);
  }
  if (out.residual > 1e-8) {
    throw RefinementError("linear bound residual " + format_double(out.residual) + " exceeds 1e-8 for p = " +
                          format_double(p) + ": refine the grid");
  }
  return out;
}

LinearBoundResult linear_bound_resolved(const EstimatorSet& est, double p, double n, std::span<const double> Rn,
                                        double mu, const ConstantsTable& constants) {
  try {
    return linear_bound(est, p, n, Rn, mu, constants);
  } catch (const RefinementError&) {
  }
  std::size_t good = 0, bad = Rn.size();
  LinearBoundResult best;
  while (bad - good > 1) {
    const std::size_t mid = (good + bad) / 2;
    if (mid < 3) {
      good = mid;
      continue;
    }
    try {
      best = linear_bound(est, p, n, Rn.first(mid), mu, constants);
      good = mid;
    } catch (const RefinementError&) {
      bad = mid;
    }
  }
  if (best.R.size() != good || good < 3) {
    throw RefinementError("linear bound for p = " + format_double(p) + " fails on every prefix of the grid; refine the grid");
  }
  return best;
}

// ---------------------------------------------------------------------------
// Certificates

std::vector<std::pair<double, double>> required_constant_orders(double n, const std::vector<double>& p_list) {
  std::vector<std::pair<double, double>> out = {{n, n}, {n + 1.0, n}};
  for (double p : p_list) {
    out.emplace_back(p, p);
    out.emplace_back(p, n);
    out.emplace_back(p + 1.0, n);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

EstimatorSet tautological_estimators(const Trajectory& approx, const std::map<double, double>& datum_error,
                                     const std::vector<double>& orders) {
  EstimatorSet est;
  est.t = approx.times;
  for (double q : orders) {
    const auto s = approx.norm_series(q);
    est.growth[q] = std::vector<double>(s.begin(), s.end());
  }
  for (const auto& [p, d] : datum_error) est.delta[p] = d;
  return est;
}

Certificate certify(const Trajectory& approx, const std::map<double, double>& datum_error, double n,
                    const std::vector<double>& p_list, const ConstantsTable& constants, const CertifyOptions& options) {
  require_n(n, constants);
  for (double p : p_list) {
    if (!(p > n)) throw InputError("every p must exceed n");
  }
  std::vector<double> orders = {n, n + 1.0};
  for (double p : p_list) {
    orders.push_back(p);
    orders.push_back(p + 1.0);
  }
  for (double q : orders) {
    if (!approx.has_order(q)) throw InputError("trajectory lacks norms of order " + format_double(q));
  }
  const double mu = std::min(approx.meta.nu, approx.meta.eta);
  EstimatorSet est = tautological_estimators(approx, datum_error, orders);
  est.delta_of(n);
  for (double p : p_list) est.delta_of(p);

  Certificate cert;
  cert.n = n;
  cert.mu = mu;
  if (options.galerkin_residual) {
    std::vector<double> eps_orders = {n};
    eps_orders.insert(eps_orders.end(), p_list.begin(), p_list.end());
    for (double q : eps_orders) {
      const auto res = galerkin_residual(approx, q);
      std::vector<double> s(est.t.size());
      for (std::size_t i = 0; i < s.size(); ++i) {
        s[i] = std::max(0.0, interpolate_cubic(res.times, res.values, est.t[i]));
      }
      est.eps[q] = std::move(s);
    }
    cert.notes.push_back("eps from the Galerkin residual at snapshot times, interpolated onto the norm grid");
  }

  if (est.eps_is_zero(n)) {
    const auto cf = riccati_closed_form(est, n, mu, constants);
    cert.method = "closed-form";
    cert.t = cf.t;
    cert.Rn = cf.R;
    cert.T_c = cf.T_c;
    try {
      const auto ode = riccati_certify(est, n, mu, constants);
      double worst = 0.0;
      const std::size_t m = std::min(ode.R.size(), cf.R.size());
      for (std::size_t i = 0; i < m; ++i) worst = std::max(worst, rel_diff(ode.R[i], cf.R[i]));
      cert.notes.push_back("ODE cross-check: max relative difference " + format_double(worst));
    } catch (const RefinementError& e) {
      cert.notes.push_back(std::string("ODE cross-check skipped: ") + e.what());
    }
  } else {
    const auto ode = riccati_certify(est, n, mu, constants);
    cert.method = "ode";
    cert.t = ode.t;
    cert.Rn = ode.R;
    cert.T_c = ode.T_c;
  }
  for (double p : p_list) {
    if (cert.global()) {
      cert.Rp[p] = linear_bound(est, p, n, cert.Rn, mu, constants).R;
      continue;
    }
    auto lb = linear_bound_resolved(est, p, n, cert.Rn, mu, constants);
    if (lb.R.size() < cert.Rn.size()) {
      cert.notes.push_back("Rp for p = " + format_double(p) + " truncated at t = " +
                           format_double(cert.t[lb.R.size() - 1]) + " where the quadrature stops resolving R_n");
    }
    cert.Rp[p] = std::move(lb.R);
  }

  nlohmann::json digest_doc = {{"estimators", hex_digest(est.digest())},
                               {"constants", hex_digest(constants.digest())},
                               {"mu", mu},
                               {"n", n},
                               {"p", p_list}};
  cert.inputs_digest = hex_digest(fnv1a(digest_doc.dump()));
  return cert;
}

nlohmann::json Certificate::to_json() const {
  nlohmann::json rp = nlohmann::json::object();
  for (const auto& [p, s] : Rp) rp[format_double(p)] = s;
  nlohmann::json doc = {{"n", n},
                        {"mu", mu},
                        {"T_c", global() ? nlohmann::json(nullptr) : nlohmann::json(T_c)},
                        {"global", global()},
                        {"method", method},
                        {"notes", notes},
                        {"series", {{"t", t}, {"Rn", Rn}, {"Rp", rp}}},
                        {"inputs_digest", inputs_digest}};
  return doc;
}

std::string Certificate::to_csv() const {
  std::ostringstream os;
  os << "t,Rn";
  for (const auto& [p, s] : Rp) os << ",Rp_" << format_double(p);
  os << '\n';
  for (std::size_t i = 0; i < t.size(); ++i) {
    os << format_double(t[i]) << ',' << format_double(Rn[i]);
    for (const auto& [p, s] : Rp) {
      os << ',';
      if (i < s.size()) os << format_double(s[i]);
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace mhd
