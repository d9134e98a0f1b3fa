#include "mhd/stability.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mhd/digest.hpp"
#include "mhd/errors.hpp"
#include "mhd/quadrature.hpp"

namespace mhd {

namespace {

void require_n(double n, const ConstantsTable& constants) {
  if (!(n > 0.5 * constants.dim() + 1.0)) {
    throw InputError("order n must exceed d/2 + 1, got n = " + format_double(n));
  }
}

nlohmann::json order_map(const std::map<double, double>& m) {
  nlohmann::json out = nlohmann::json::object();
  for (const auto& [p, v] : m) out[format_double(p)] = v;
  return out;
}

}  // namespace

double stability_radius(const DecayBudget& budget, double n, double mu, const ConstantsTable& constants) {
  require_n(n, constants);
  if (!(mu > 0.0)) throw InputError("mu must be positive");
  const double G = constants.G_hat(n);
  const double K = constants.K_hat(n);
  return mu / G * std::exp(-G * budget.J(n) - K * budget.J(n + 1.0));
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::Inside: return "inside";
    case Regime::InsideHalf: return "inside_half";
    case Regime::Outside: return "outside";
  }
  return "outside";
}

StabilityReport perturbation_envelopes(double delta_n, const std::vector<double>& p_list, const DecayBudget& budget,
                                       double n, double mu, const ConstantsTable& constants) {
  if (!(delta_n >= 0.0)) throw InputError("delta_n must be nonnegative");
  StabilityReport rep;
  rep.n = n;
  rep.mu = mu;
  rep.delta_n = delta_n;
  rep.budget = budget;
  rep.rho_n = stability_radius(budget, n, mu, constants);
  rep.formulas.push_back("rho_n = (mu/G^_n) exp(-G^_n J_n - K^_n J_{n+1})");
  if (delta_n >= rep.rho_n) {
    rep.regime = Regime::Outside;
    return rep;
  }
  rep.regime = 2.0 * delta_n <= rep.rho_n ? Regime::InsideHalf : Regime::Inside;
  rep.has_envelopes = true;

  const double Gn = constants.G_hat(n);
  const double Kn = constants.K_hat(n);
  const double base_n = Gn * budget.J(n) + Kn * budget.J(n + 1.0);
  const double ratio = delta_n / rep.rho_n;
  rep.C_n = std::exp(base_n) / (1.0 - ratio);
  rep.formulas.push_back("C_n = exp(G^_n J_n + K^_n J_{n+1}) / (1 - delta_n/rho_n)");
  for (double p : p_list) {
    if (!(p > n)) throw InputError("envelope orders must exceed n");
    const double Gp = constants.G_hat(p);
    const double Kp = constants.K_hat(p);
    const double Gpn = constants.G_hat(p, n);
    const double base_p = Gp * budget.J(p) + Kp * budget.J(p + 1.0);
    rep.C_p[p] = std::exp(base_p + Gpn * ratio / (Gn * (1.0 - ratio)));
    if (rep.regime == Regime::InsideHalf) rep.C_p_simplified[p] = std::exp(base_p + Gpn / Gn);
  }
  rep.formulas.push_back(
      "C_p = exp(G^_p J_p + K^_p J_{p+1} + G^_pn (delta_n/rho_n) / (G^_n (1 - delta_n/rho_n)))");
  if (rep.regime == Regime::InsideHalf) {
    rep.has_simplified = true;
    rep.C_n_simplified = 2.0 * std::exp(base_n);
    rep.formulas.push_back("simplified: C_n = 2 exp(G^_n J_n + K^_n J_{n+1}), C_p = exp(G^_p J_p + K^_p J_{p+1} + G^_pn/G^_n)");
  }
  return rep;
}

nlohmann::json StabilityReport::to_json() const {
  nlohmann::json doc = {{"n", n},
                        {"mu", mu},
                        {"rho_n", rho_n},
                        {"delta_n", delta_n},
                        {"regime", regime_name(regime)},
                        {"budget", budget.to_json()},
                        {"formulas", formulas}};
  if (has_envelopes) doc["envelopes"] = {{"C_n", C_n}, {"C_p", order_map(C_p)}};
  if (has_simplified) doc["simplified"] = {{"C_n", C_n_simplified}, {"C_p", order_map(C_p_simplified)}};
  return doc;
}

std::string StabilityReport::summary() const {
  std::ostringstream os;
  os << "n = " << format_double(n) << ", mu = " << format_double(mu) << '\n';
  for (const auto& e : budget.entries) {
    os << "J_" << format_double(e.p) << " = " << format_double(e.J) << " (" << e.provenance << ")\n";
  }
  os << "rho_n = " << format_double(rho_n) << '\n';
  os << "delta_n = " << format_double(delta_n) << ", regime: " << regime_name(regime) << '\n';
  if (has_envelopes) {
    os << "C_n = " << format_double(C_n) << '\n';
    for (const auto& [p, c] : C_p) os << "C_" << format_double(p) << " = " << format_double(c) << '\n';
  }
  if (has_simplified) {
    os << "simplified C_n = " << format_double(C_n_simplified) << '\n';
    for (const auto& [p, c] : C_p_simplified) {
      os << "simplified C_" << format_double(p) << " = " << format_double(c) << '\n';
    }
  }
  return os.str();
}

SmallDataResult small_data_check(const std::map<double, double>& norms, double n, double mu,
                                 const ConstantsTable& constants, const std::vector<double>& orders) {
  require_n(n, constants);
  if (!(mu > 0.0)) throw InputError("mu must be positive");
  auto norm_of = [&](double p) {
    for (const auto& [q, v] : norms) {
      if (std::abs(q - p) < 1e-12) return v;
    }
    throw InputError("missing norm of order " + format_double(p));
  };
  SmallDataResult out;
  const double Gn = constants.G_hat(n);
  out.threshold = mu / Gn;
  const double wn = norm_of(n);
  out.admissible = wn < out.threshold;
  if (!out.admissible) return out;
  const double base = 1.0 - Gn * wn / mu;
  const double Cn = wn / base;
  for (double p : orders) {
    if (p < n) {
      out.C_p[p] = Cn;
    } else {
      out.C_p[p] = norm_of(p) * std::pow(base, -constants.G_hat(p, n) / Gn);
    }
  }
  return out;
}

SmallDataResult small_data_check(const FieldPair& pair0, double n, double mu, const ConstantsTable& constants,
                                 const std::vector<double>& orders) {
  std::map<double, double> norms;
  norms[n] = pair_norm(pair0, n);
  for (double p : orders) norms[p] = pair_norm(pair0, p);
  return small_data_check(norms, n, mu, constants, orders);
}

nlohmann::json DecayReport::to_json() const {
  auto num = [](double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); };
  return {{"condition_a", condition_a},
          {"t_a", num(t_a)},
          {"fitted_rate", num(fitted_rate)},
          {"decades", num(decades)},
          {"running_integral", running_integral},
          {"tail_estimate", num(tail_estimate)},
          {"verdict", verdict},
          {"notes", notes}};
}

DecayReport decay_diagnostics(const Trajectory& traj, double n, double mu, const ConstantsTable& constants) {
  require_n(n, constants);
  if (!(mu > 0.0)) throw InputError("mu must be positive");
  const auto series = traj.norm_series(n);
  const auto& t = traj.times;
  DecayReport rep;
  const double threshold = mu / constants.G_hat(n);
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (series[i] < threshold) {
      rep.condition_a = true;
      rep.t_a = t[i];
      break;
    }
  }
  rep.running_integral = simpson(t, series);
  const double peak = *std::max_element(series.begin(), series.end());
  if (peak == 0.0) {
    rep.verdict = "decaying";
    rep.fitted_rate = kInfinity;
    rep.decades = kInfinity;
    rep.notes.push_back("zero trajectory");
    return rep;
  }
  const double last = series.back();
  rep.decades = last > 0.0 ? std::log10(peak / last) : kInfinity;

  // least-squares slope of log ||v||_n over the second half of the window
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t count = 0;
  for (std::size_t i = t.size() / 2; i < t.size(); ++i) {
    if (!(series[i] > 0.0)) continue;
    const double y = std::log(series[i]);
    sx += t[i];
    sy += y;
    sxx += t[i] * t[i];
    sxy += t[i] * y;
    ++count;
  }
  if (count >= 2) {
    const double c = static_cast<double>(count);
    const double den = c * sxx - sx * sx;
    if (den > 0.0) rep.fitted_rate = -(c * sxy - sx * sy) / den;
  }

  const bool final_small = last < threshold;
  if (final_small) {
    rep.tail_estimate = last / (1.0 - last / threshold) / mu;
    rep.notes.push_back("tail from the small-data envelope at the final time");
  } else if (rep.fitted_rate > 0.0) {
    rep.tail_estimate = last / rep.fitted_rate;
    rep.notes.push_back("tail from the fitted exponential rate (heuristic)");
  } else {
    rep.tail_estimate = kInfinity;
  }
  if (rep.decades < 1.0) rep.notes.push_back("less than one decade of decay in the window");
  if (!rep.condition_a) rep.notes.push_back("small-data condition never reached");
  rep.verdict = (rep.decades >= 1.0 && rep.condition_a) ? "decaying" : "inconclusive";
  return rep;
}

DecayBudget budget_from_trajectory(const Trajectory& traj, const std::vector<double>& orders, double n, double mu,
                                   const ConstantsTable& constants) {
  const auto diag = decay_diagnostics(traj, n, mu, constants);
  if (diag.verdict != "decaying") {
    throw InputError("decay budget refused: diagnostics verdict is '" + diag.verdict + "'");
  }
  const auto& t = traj.times;
  std::map<double, double> final_norms;
  final_norms[n] = traj.norm_series(n).back();
  for (double p : orders) final_norms[p] = traj.norm_series(p).back();
  const auto tail = small_data_check(final_norms, n, mu, constants, orders);
  if (!tail.admissible) {
    throw InputError("decay budget refused: small-data condition fails at the final time; extend t_end");
  }
  DecayBudget budget;
  for (double p : orders) {
    const double J = simpson(t, traj.norm_series(p)) + tail.C_p.at(p) / mu;
    budget.set(p, J, "quadrature+tail");
  }
  return budget;
}

}  // namespace mhd
