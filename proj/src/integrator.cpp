#include "mhd/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mhd/bilinear.hpp"
#include "mhd/digest.hpp"
#include "mhd/errors.hpp"
#include "mhd/field_io.hpp"

namespace mhd {

void SolverConfig::validate() const {
  if (!(nu > 0.0) || !(eta > 0.0)) throw InputError("nu and eta must be positive");
  if (!(dt > 0.0) || !(t_end > 0.0)) throw InputError("dt and t_end must be positive");
  if (dt > t_end) throw InputError("dt must not exceed t_end");
  if (cutoff < 1) throw InputError("cutoff must be >= 1");
  if (record_stride < 1) throw InputError("record_stride must be >= 1");
  for (double p : recorded_orders) {
    if (!std::isfinite(p)) throw InputError("recorded orders must be finite");
  }
}

nlohmann::json SolverConfig::to_json() const {
  return {{"nu", nu},
          {"eta", eta},
          {"dt", dt},
          {"t_end", t_end},
          {"cutoff", cutoff},
          {"recorded_orders", recorded_orders},
          {"record_stride", record_stride},
          {"pseudo_spectral", pseudo_spectral}};
}

bool Trajectory::has_order(double p) const {
  return std::any_of(orders.begin(), orders.end(), [p](double q) { return std::abs(q - p) < 1e-12; });
}

std::span<const double> Trajectory::norm_series(double p) const {
  for (std::size_t j = 0; j < orders.size(); ++j) {
    if (std::abs(orders[j] - p) < 1e-12) return norms[j];
  }
  throw InputError("order " + format_double(p) + " not recorded in trajectory");
}

std::string Trajectory::to_csv() const {
  std::ostringstream os;
  os << "t";
  for (double p : orders) os << ",norm_" << format_double(p);
  os << '\n';
  for (std::size_t i = 0; i < times.size(); ++i) {
    os << format_double(times[i]);
    for (const auto& series : norms) os << ',' << format_double(series[i]);
    os << '\n';
  }
  return os.str();
}

nlohmann::json Trajectory::to_json(bool include_states) const {
  nlohmann::json norm_obj = nlohmann::json::object();
  for (std::size_t j = 0; j < orders.size(); ++j) norm_obj[format_double(orders[j])] = norms[j];
  nlohmann::json doc = {{"meta", meta.to_json()}, {"times", times}, {"orders", orders}, {"norms", norm_obj}};
  if (include_states) {
    nlohmann::json snaps = nlohmann::json::array();
    for (std::size_t i = 0; i < snapshots.size(); ++i) {
      snaps.push_back({{"t", snapshot_times[i]}, {"state", pair_to_json(snapshots[i])}});
    }
    doc["snapshots"] = snaps;
  }
  return doc;
}

namespace {

// exp(-coef |k|^2 h) per canonical mode
std::vector<double> heat_factors(const ModeLayout& layout, double coef, double h) {
  std::vector<double> f(layout.size());
  for (std::size_t i = 0; i < layout.size(); ++i) f[i] = std::exp(-coef * layout.norm2(i) * h);
  return f;
}

void scale_modes(SpectralField& field, const std::vector<double>& factors) {
  for (std::size_t i = 0; i < factors.size(); ++i) {
    for (auto& c : field.mode_coefficients(i)) c *= factors[i];
  }
}

struct Heat {
  std::vector<double> v;
  std::vector<double> c;

  Heat(const ModeLayout& layout, double nu, double eta, double h)
      : v(heat_factors(layout, nu, h)), c(heat_factors(layout, eta, h)) {}

  FieldPair operator()(FieldPair u) const {
    scale_modes(u.velocity, v);
    scale_modes(u.magnetic, c);
    return u;
  }
};

FieldPair nonlinear(const FieldPair& u, bool pseudo) {
  if (pseudo) return P_mhd_pseudo_self(u, u.cutoff());
  return P_mhd(u, u).with_cutoff(u.cutoff());
}

bool finite(const FieldPair& u) {
  for (const auto* f : {&u.velocity, &u.magnetic}) {
    for (const auto& c : f->data()) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    }
  }
  return true;
}

FieldPair step_with(const FieldPair& u, double h, const Heat& half, const Heat& full, bool pseudo) {
  const FieldPair k1 = nonlinear(u, pseudo);
  FieldPair a = u;
  a.axpy(0.5 * h, k1);
  const FieldPair k2 = nonlinear(half(a), pseudo);
  FieldPair eu_half = half(u);
  FieldPair b = eu_half;
  b.axpy(0.5 * h, k2);
  const FieldPair k3 = nonlinear(b, pseudo);
  FieldPair c = full(u);
  c.axpy(h, half(k3));
  const FieldPair k4 = nonlinear(c, pseudo);

  FieldPair out = full(u);
  out.axpy(h / 6.0, full(k1));
  FieldPair mid = k2;
  mid += k3;
  out.axpy(h / 3.0, half(mid));
  out.axpy(h / 6.0, k4);
  out.velocity.mark_solenoidal(true);
  out.magnetic.mark_solenoidal(true);
  return out;
}

void record_norms(Trajectory& traj, const FieldPair& u) {
  for (std::size_t j = 0; j < traj.orders.size(); ++j) traj.norms[j].push_back(pair_norm(u, traj.orders[j]));
}

}  // namespace

FieldPair rhs(const FieldPair& pair, double nu, double eta, bool pseudo_spectral) {
  FieldPair out = apply_A(pair, nu, eta);
  out += nonlinear(pair, pseudo_spectral);
  return out;
}

FieldPair step(const FieldPair& u, double h, double nu, double eta, bool pseudo_spectral) {
  if (!(nu > 0.0) || !(eta > 0.0)) throw InputError("nu and eta must be positive");
  const Heat half(u.velocity.layout(), nu, eta, 0.5 * h);
  const Heat full(u.velocity.layout(), nu, eta, h);
  return step_with(u, h, half, full, pseudo_spectral);
}

Trajectory integrate(const FieldPair& pair0, const SolverConfig& config) {
  config.validate();
  if (pair0.cutoff() != config.cutoff) {
    throw InputError("datum cutoff " + std::to_string(pair0.cutoff()) + " differs from config cutoff " +
                     std::to_string(config.cutoff));
  }
  for (const auto* f : {&pair0.velocity, &pair0.magnetic}) {
    const auto report = validate(*f, 1e-12);
    if (!report.ok()) throw InputError("invalid datum: " + report.findings.front());
  }
  const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(config.t_end / config.dt - 1e-9)));
  const double h = config.t_end / static_cast<double>(steps);

  Trajectory traj;
  traj.meta = config;
  traj.orders = config.recorded_orders;
  traj.norms.assign(traj.orders.size(), {});
  traj.times.reserve(steps + 1);

  const Heat half(pair0.velocity.layout(), config.nu, config.eta, 0.5 * h);
  const Heat full(pair0.velocity.layout(), config.nu, config.eta, h);

  FieldPair u = pair0;
  traj.times.push_back(0.0);
  record_norms(traj, u);
  traj.snapshot_times.push_back(0.0);
  traj.snapshots.push_back(u);
  for (std::size_t s = 1; s <= steps; ++s) {
    FieldPair next = step_with(u, h, half, full, config.pseudo_spectral);
    const double t = (s == steps) ? config.t_end : static_cast<double>(s) * h;
    if (!finite(next)) {
      throw NumericalError("nonfinite state at t=" + format_double(t) + "; last finite time t=" +
                           format_double(traj.times.back()));
    }
    u = std::move(next);
    traj.times.push_back(t);
    record_norms(traj, u);
    if (s % static_cast<std::size_t>(config.record_stride) == 0 || s == steps) {
      traj.snapshot_times.push_back(t);
      traj.snapshots.push_back(u);
    }
  }
  return traj;
}

Trajectory trajectory_from_states(std::vector<double> times, std::vector<FieldPair> states,
                                  const std::vector<double>& orders, const SolverConfig& meta) {
  if (times.size() != states.size()) throw InputError("times and states differ in length");
  Trajectory traj;
  traj.meta = meta;
  traj.orders = orders;
  traj.norms.assign(orders.size(), {});
  for (const auto& u : states) record_norms(traj, u);
  traj.times = times;
  traj.snapshot_times = std::move(times);
  traj.snapshots = std::move(states);
  return traj;
}

double tail_norm(const SpectralField& field, int inner, double p) {
  const auto& layout = field.layout();
  double sum = 0.0;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (layout.mode(i).max_abs() <= inner) continue;
    double m2 = 0.0;
    for (const auto& c : field.mode_coefficients(i)) m2 += std::norm(c);
    if (m2 != 0.0) sum += std::pow(layout.norm2(i), p) * m2;
  }
  return std::sqrt(2.0 * sum);
}

ResidualSeries galerkin_residual(const Trajectory& traj, double p) {
  if (traj.snapshots.empty()) throw InputError("trajectory carries no states");
  if (!traj.has_order(p)) throw InputError("order " + format_double(p) + " not recorded in trajectory");
  ResidualSeries out;
  out.times = traj.snapshot_times;
  out.values.reserve(traj.snapshots.size());
  for (const auto& u : traj.snapshots) {
    const int M = u.cutoff();
    const FieldPair full = P_mhd_pseudo(u, u, 2 * M);
    const double a = tail_norm(full.velocity, M, p);
    const double b = tail_norm(full.magnetic, M, p);
    out.values.push_back(std::sqrt(a * a + b * b));
  }
  return out;
}

}  // namespace mhd
