// mhdcert: simulate, certify and analyse Galerkin MHD runs on the torus.
//
// Every option can also come from a TOML/INI file given with --config;
// command-line flags override file values, which override defaults.
//
// Exit codes: 0 success, 1 usage or configuration, 2 numerical or
// refinement failure, 3 admissibility rejection.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mhd/beltrami.hpp"
#include "mhd/certifier.hpp"
#include "mhd/constants.hpp"
#include "mhd/digest.hpp"
#include "mhd/errors.hpp"
#include "mhd/field_io.hpp"
#include "mhd/integrator.hpp"
#include "mhd/spectral.hpp"
#include "mhd/stability.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit : int { kOk = 0, kUsage = 1, kNumerical = 2, kAdmissibility = 3 };

struct RunConfig {
  std::string command;
  int d = 3;
  int cutoff = 2;
  double nu = 1.0;
  double eta = 1.0;
  double dt = 1e-3;
  double t_end = 1.0;
  std::optional<double> n;
  std::vector<double> p_list;
  std::string constants_path;
  bool analytic_constants = false;
  std::uint64_t seed = 1;
  std::string out = "out";
  std::string format = "both";
  int stride = 10;
  bool direct = false;
  bool states = false;

  // datum source
  std::string datum_path;
  std::string spec_path;
  bool random = false;
  double amplitude = 0.1;
  double decay = 1.0;
  mhd::BeltramiPairSpec spec;

  // certify / radius
  std::vector<std::string> datum_error;
  std::string perturbed_path;
  std::string residual = "auto";
  std::vector<double> n_sweep;

  // constants
  std::size_t samples = 0;

  double order_n() const { return n ? *n : d / 2.0 + 1.5; }
  bool writes_csv() const { return format == "csv" || format == "both"; }
  bool writes_json() const { return format == "json" || format == "both"; }
};

std::string file_digest(const std::string& path) {
  if (path.empty()) return "";
  std::ifstream in(path, std::ios::binary);
  if (!in) throw mhd::InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return mhd::hex_digest(mhd::fnv1a(ss.str()));
}

// Digest of everything that determines the outputs. File arguments enter by
// content, so moving a file does not change it; the output directory is left out.
std::string config_digest(const RunConfig& c) {
  json doc = {{"command", c.command},
              {"d", c.d},
              {"cutoff", c.cutoff},
              {"nu", mhd::format_double(c.nu)},
              {"eta", mhd::format_double(c.eta)},
              {"dt", mhd::format_double(c.dt)},
              {"t_end", mhd::format_double(c.t_end)},
              {"n", mhd::format_double(c.order_n())},
              {"p", json::array()},
              {"constants", c.analytic_constants ? "analytic" : file_digest(c.constants_path)},
              {"seed", c.seed},
              {"format", c.format},
              {"stride", c.stride},
              {"direct", c.direct},
              {"states", c.states},
              {"datum", file_digest(c.datum_path)},
              {"spec_file", file_digest(c.spec_path)},
              {"random", c.random},
              {"amplitude", mhd::format_double(c.amplitude)},
              {"decay", mhd::format_double(c.decay)},
              {"spec", c.spec.to_json()},
              {"datum_error", c.datum_error},
              {"perturbed", file_digest(c.perturbed_path)},
              {"residual", c.residual},
              {"n_sweep", json::array()},
              {"samples", c.samples}};
  for (double p : c.p_list) doc["p"].push_back(mhd::format_double(p));
  for (double n : c.n_sweep) doc["n_sweep"].push_back(mhd::format_double(n));
  return mhd::hex_digest(mhd::fnv1a(doc.dump()));
}

// ---------------------------------------------------------------------------
// inputs

struct Datum {
  mhd::FieldPair pair;
  std::optional<mhd::BeltramiSolution> exact;
  std::string source;
};

Datum load_datum(const RunConfig& c) {
  if (!c.datum_path.empty() && c.random) throw mhd::InputError("--datum and --random are exclusive");
  Datum out;
  if (!c.datum_path.empty()) {
    mhd::FieldPair pair = mhd::pair_from_json(mhd::read_json_file(c.datum_path));
    if (pair.dim() != c.d) throw mhd::InputError("datum dimension differs from --d");
    if (pair.cutoff() > c.cutoff) throw mhd::InputError("datum cutoff exceeds --cutoff");
    out.pair = pair.with_cutoff(c.cutoff);
    out.source = "file";
    return out;
  }
  if (c.random) {
    mhd::SpectralField v = mhd::random_field(c.seed, c.d, c.cutoff, c.decay);
    mhd::SpectralField b = mhd::random_field(c.seed + 1, c.d, c.cutoff, c.decay);
    mhd::FieldPair pair(std::move(v), std::move(b));
    const double norm = mhd::pair_norm(pair, 0.0);
    if (norm > 0.0) pair *= c.amplitude / norm;
    out.pair = std::move(pair);
    out.source = "random";
    return out;
  }
  mhd::BeltramiPairSpec spec = c.spec;
  if (!c.spec_path.empty()) spec = mhd::BeltramiPairSpec::from_json(mhd::read_json_file(c.spec_path));
  if (spec.dim != c.d) throw mhd::InputError("beltrami spec dimension differs from --d");
  mhd::GBPair gb = mhd::make_gb_pair(spec, c.cutoff);
  out.exact.emplace(gb);
  out.pair = out.exact->initial();
  out.source = "beltrami:" + mhd::kind_name(spec.kind);
  return out;
}

mhd::ConstantsTable load_constants(const RunConfig& c, const std::vector<double>& ns) {
  if (c.analytic_constants) {
    std::vector<std::pair<double, double>> orders;
    for (double n : ns) {
      const auto req = mhd::required_constant_orders(n, c.p_list);
      orders.insert(orders.end(), req.begin(), req.end());
    }
    return mhd::analytic_constants(c.d, orders);
  }
  if (c.constants_path.empty()) {
    throw mhd::InputError("this command needs --constants PATH (or --analytic-constants)");
  }
  mhd::ConstantsTable table = mhd::ConstantsTable::load(c.constants_path);
  if (table.dim() != c.d) throw mhd::InputError("constants file dimension differs from --d");
  return table;
}

void require_orders(const RunConfig& c) {
  const double n = c.order_n();
  if (!(n > c.d / 2.0 + 1.0)) throw mhd::InputError("n must exceed d/2 + 1");
  for (double p : c.p_list) {
    if (!(p > n)) throw mhd::InputError("every --p must exceed n");
  }
}

std::vector<double> time_grid(const RunConfig& c) {
  const long steps = std::max(1L, static_cast<long>(std::ceil(c.t_end / c.dt - 1e-9)));
  const double h = c.t_end / static_cast<double>(steps);
  std::vector<double> t(static_cast<std::size_t>(steps) + 1);
  for (long i = 0; i <= steps; ++i) t[static_cast<std::size_t>(i)] = h * static_cast<double>(i);
  t.back() = c.t_end;
  return t;
}

mhd::SolverConfig solver_config(const RunConfig& c, std::vector<double> orders) {
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
  mhd::SolverConfig s;
  s.nu = c.nu;
  s.eta = c.eta;
  s.dt = c.dt;
  s.t_end = c.t_end;
  s.cutoff = c.cutoff;
  s.recorded_orders = std::move(orders);
  s.record_stride = std::max(1, c.stride);
  s.pseudo_spectral = !c.direct;
  s.validate();
  return s;
}

// "q:value" / "q=value" entries, or a bare value for every order.
std::map<double, double> parse_datum_error(const std::vector<std::string>& entries, const std::vector<double>& orders) {
  std::map<double, double> out;
  for (double q : orders) out[q] = 0.0;
  for (const auto& e : entries) {
    const auto sep = e.find_first_of(":=");
    try {
      if (sep == std::string::npos) {
        const double v = std::stod(e);
        for (auto& [q, d] : out) d = v;
      } else {
        out[std::stod(e.substr(0, sep))] = std::stod(e.substr(sep + 1));
      }
    } catch (const std::logic_error&) {
      throw mhd::InputError("bad --datum-error entry '" + e + "'");
    }
  }
  for (const auto& [q, d] : out) {
    if (!(d >= 0.0) || !std::isfinite(d)) throw mhd::InputError("datum errors must be finite and nonnegative");
  }
  return out;
}

std::map<double, double> datum_errors(const RunConfig& c, const mhd::FieldPair& base0,
                                      const std::vector<double>& orders) {
  if (c.perturbed_path.empty()) return parse_datum_error(c.datum_error, orders);
  if (!c.datum_error.empty()) throw mhd::InputError("--perturbed and --datum-error are exclusive");
  mhd::FieldPair u0 = mhd::pair_from_json(mhd::read_json_file(c.perturbed_path));
  if (u0.dim() != c.d) throw mhd::InputError("perturbed datum dimension differs from --d");
  const int m = std::max(u0.cutoff(), base0.cutoff());
  const mhd::FieldPair diff = u0.with_cutoff(m) - base0.with_cutoff(m);
  std::map<double, double> out;
  for (double q : orders) out[q] = mhd::pair_norm(diff, q);
  return out;
}

// ---------------------------------------------------------------------------
// output

void write_json(const RunConfig& c, const std::string& name, json doc, const std::string& digest) {
  doc["config_digest"] = digest;
  mhd::write_text_file(fs::path(c.out) / name, doc.dump(2) + "\n");
}

void write_csv(const RunConfig& c, const std::string& name, const std::string& body, const std::string& digest) {
  mhd::write_text_file(fs::path(c.out) / name, "# config_digest " + digest + "\n" + body);
}

std::string fmt(double v, int prec = 6) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*e", prec, v);
  return buf;
}

// ---------------------------------------------------------------------------
// commands

int cmd_simulate(const RunConfig& c, const std::string& digest) {
  Datum datum = load_datum(c);
  std::vector<double> orders = {0.0, 1.0};
  if (c.n) orders.push_back(*c.n);
  orders.insert(orders.end(), c.p_list.begin(), c.p_list.end());
  const mhd::SolverConfig s = solver_config(c, orders);
  const mhd::Trajectory traj = mhd::integrate(datum.pair, s);

  if (c.writes_csv()) write_csv(c, "trajectory.csv", traj.to_csv(), digest);
  if (c.writes_json()) {
    json doc = traj.to_json(c.states);
    doc["source"] = datum.source;
    write_json(c, "trajectory.json", std::move(doc), digest);
  }

  std::cout << "simulate  d=" << c.d << " M=" << c.cutoff << " source=" << datum.source << " steps="
            << traj.times.size() - 1 << " config_digest=" << digest << "\n";
  std::cout << "         t";
  for (double p : traj.orders) std::cout << "  " << std::setw(13) << ("|u|_" + mhd::format_double(p));
  if (datum.exact) std::cout << "  " << std::setw(13) << "exact |u|_0";
  std::cout << "\n";
  const std::size_t last = traj.times.size() - 1;
  const std::size_t rows = std::min<std::size_t>(10, last);
  for (std::size_t r = 0; r <= rows; ++r) {
    const std::size_t i = rows == 0 ? 0 : r * last / rows;
    std::cout << std::setw(10) << std::fixed << std::setprecision(4) << traj.times[i] << std::defaultfloat;
    for (std::size_t j = 0; j < traj.orders.size(); ++j) std::cout << "  " << std::setw(13) << fmt(traj.norms[j][i]);
    if (datum.exact) std::cout << "  " << std::setw(13) << fmt(datum.exact->norm(c.nu, c.eta, traj.times[i], 0.0));
    std::cout << "\n";
  }
  return kOk;
}

mhd::Trajectory base_trajectory(const RunConfig& c, const Datum& datum, const std::vector<double>& orders) {
  if (datum.exact) return mhd::exact_trajectory(*datum.exact, c.nu, c.eta, time_grid(c), orders);
  return mhd::integrate(datum.pair, solver_config(c, orders));
}

int cmd_certify(const RunConfig& c, const std::string& digest) {
  require_orders(c);
  const double n = c.order_n();
  const mhd::ConstantsTable constants = load_constants(c, {n});
  Datum datum = load_datum(c);
  std::vector<double> orders = {0.0, n, n + 1.0};
  for (double p : c.p_list) {
    orders.push_back(p);
    orders.push_back(p + 1.0);
  }
  const mhd::Trajectory traj = base_trajectory(c, datum, orders);

  std::vector<double> delta_orders = {n};
  delta_orders.insert(delta_orders.end(), c.p_list.begin(), c.p_list.end());
  const auto delta = datum_errors(c, datum.pair, delta_orders);

  mhd::CertifyOptions opts;
  if (c.residual == "galerkin") {
    opts.galerkin_residual = true;
  } else if (c.residual == "auto") {
    opts.galerkin_residual = !datum.exact;
  }
  if (opts.galerkin_residual && datum.exact) throw mhd::InputError("--residual galerkin needs an integrated base");
  const mhd::Certificate cert = mhd::certify(traj, delta, n, c.p_list, constants, opts);

  if (c.writes_json()) {
    json doc = cert.to_json();
    doc["source"] = datum.source;
    doc["constants_digest"] = mhd::hex_digest(constants.digest());
    write_json(c, "certificate.json", std::move(doc), digest);
  }
  if (c.writes_csv()) write_csv(c, "certificate.csv", cert.to_csv(), digest);

  std::cout << "certify  n=" << mhd::format_double(n) << " mu=" << mhd::format_double(cert.mu)
            << " method=" << cert.method << " config_digest=" << digest << "\n";
  std::cout << "  delta_n = " << fmt(delta.at(n)) << "\n";
  std::cout << "  T_c = " << (cert.global() ? std::string("inf (global)") : fmt(cert.T_c, 10)) << "\n";
  if (!cert.Rn.empty()) {
    const auto peak = std::max_element(cert.Rn.begin(), cert.Rn.end());
    std::cout << "  Rn: start " << fmt(cert.Rn.front()) << "  max " << fmt(*peak) << " at t="
              << mhd::format_double(cert.t[static_cast<std::size_t>(peak - cert.Rn.begin())]) << "  end "
              << fmt(cert.Rn.back()) << " at t=" << mhd::format_double(cert.t.back()) << "\n";
  }
  for (const auto& [p, R] : cert.Rp) {
    if (R.empty()) continue;
    std::cout << "  Rp[" << mhd::format_double(p) << "]: start " << fmt(R.front()) << "  max "
              << fmt(*std::max_element(R.begin(), R.end())) << "  end " << fmt(R.back()) << "\n";
  }
  for (const auto& note : cert.notes) std::cout << "  note: " << note << "\n";
  return kOk;
}

mhd::DecayBudget base_budget(const RunConfig& c, const Datum& datum, const std::vector<double>& orders, double n,
                             const mhd::ConstantsTable& constants) {
  if (datum.exact) return mhd::analytic_budget(*datum.exact, c.nu, c.eta, orders);
  std::vector<double> recorded = orders;
  recorded.push_back(n);
  const mhd::Trajectory traj = mhd::integrate(datum.pair, solver_config(c, recorded));
  return mhd::budget_from_trajectory(traj, orders, n, std::min(c.nu, c.eta), constants);
}

int cmd_radius(const RunConfig& c, const std::string& digest) {
  require_orders(c);
  const double n = c.order_n();
  const double mu = std::min(c.nu, c.eta);
  std::vector<double> ns = {n};
  for (double m : c.n_sweep) {
    if (!(m > c.d / 2.0 + 1.0)) throw mhd::InputError("sweep orders must exceed d/2 + 1");
    ns.push_back(m);
  }
  const mhd::ConstantsTable constants = load_constants(c, ns);
  Datum datum = load_datum(c);

  std::vector<double> orders;
  for (double m : ns) {
    orders.push_back(m);
    orders.push_back(m + 1.0);
  }
  for (double p : c.p_list) {
    orders.push_back(p);
    orders.push_back(p + 1.0);
  }
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());
  const mhd::DecayBudget budget = base_budget(c, datum, orders, n, constants);

  std::vector<double> delta_orders = {n};
  delta_orders.insert(delta_orders.end(), c.p_list.begin(), c.p_list.end());
  const auto delta = datum_errors(c, datum.pair, delta_orders);
  const mhd::StabilityReport report = mhd::perturbation_envelopes(delta.at(n), c.p_list, budget, n, mu, constants);

  json doc = report.to_json();
  doc["source"] = datum.source;
  doc["constants_digest"] = mhd::hex_digest(constants.digest());

  std::vector<double> sweep = c.n_sweep;
  std::sort(sweep.begin(), sweep.end());
  std::ostringstream table;
  if (!sweep.empty()) {
    table << "n,rho_n,mu_over_G\n";
    doc["sweep"] = json::array();
    for (double m : sweep) {
      const double rho = mhd::stability_radius(budget, m, mu, constants);
      const double bare = mu / constants.G_hat(m);
      table << mhd::format_double(m) << "," << mhd::format_double(rho) << "," << mhd::format_double(bare) << "\n";
      doc["sweep"].push_back({{"n", m}, {"rho_n", rho}, {"mu_over_G", bare}});
    }
  }
  if (c.writes_json()) write_json(c, "stability.json", std::move(doc), digest);
  if (c.writes_csv() && !sweep.empty()) write_csv(c, "radius_sweep.csv", table.str(), digest);

  std::cout << "radius  source=" << datum.source << " config_digest=" << digest << "\n";
  std::cout << report.summary();
  if (!sweep.empty()) {
    std::cout << "  sweep:\n  " << std::setw(8) << "n" << "  " << std::setw(13) << "rho_n" << "  " << std::setw(13)
              << "mu/G^_n" << "\n";
    for (double m : sweep) {
      std::cout << "  " << std::setw(8) << mhd::format_double(m) << "  " << std::setw(13)
                << fmt(mhd::stability_radius(budget, m, mu, constants)) << "  " << std::setw(13)
                << fmt(mu / constants.G_hat(m)) << "\n";
    }
  }
  return kOk;
}

int cmd_beltrami(const RunConfig& c, const std::string& digest) {
  if (!c.datum_path.empty() || c.random) throw mhd::InputError("beltrami builds its own datum");
  mhd::BeltramiPairSpec spec = c.spec;
  if (!c.spec_path.empty()) spec = mhd::BeltramiPairSpec::from_json(mhd::read_json_file(c.spec_path));
  if (spec.dim != c.d) throw mhd::InputError("beltrami spec dimension differs from --d");
  const mhd::GBPair gb = mhd::make_gb_pair(spec, c.cutoff);
  const mhd::GBReport report = mhd::verify_gb_pair(gb.pair);

  std::cout << "beltrami  kind=" << mhd::kind_name(spec.kind) << " kappa=" << mhd::format_double(report.kappa)
            << " lambda=" << mhd::format_double(report.lambda) << " config_digest=" << digest << "\n";
  std::cout << "  |v0|_0 = " << fmt(mhd::sobolev_norm(gb.pair.velocity, 0.0))
            << "  |c0|_0 = " << fmt(mhd::sobolev_norm(gb.pair.magnetic, 0.0)) << "\n";
  std::cout << "  residuals: P(v,v) " << fmt(report.residual_velocity_self, 2) << "  P(c,c) "
            << fmt(report.residual_magnetic_self, 2) << "  cross " << fmt(report.residual_cross, 2) << "\n";
  if (!report.ok()) {
    for (const auto& f : report.failures) std::cerr << "rejected: " << f << "\n";
    return kAdmissibility;
  }
  json doc = mhd::pair_to_json(gb.pair);
  doc["spec"] = spec.to_json();
  doc["verification"] = report.to_json();
  doc["kappa"] = report.kappa;
  doc["lambda"] = report.lambda;
  write_json(c, "pair.json", std::move(doc), digest);
  std::cout << "  verified; wrote " << (fs::path(c.out) / "pair.json").string() << "\n";
  return kOk;
}

int cmd_diagnose(const RunConfig& c, const std::string& digest) {
  require_orders(c);
  const double n = c.order_n();
  const double mu = std::min(c.nu, c.eta);
  const mhd::ConstantsTable constants = load_constants(c, {n});
  Datum datum = load_datum(c);

  json doc;
  doc["source"] = datum.source;
  const mhd::ValidationReport vv = mhd::validate(datum.pair.velocity);
  const mhd::ValidationReport vc = mhd::validate(datum.pair.magnetic);
  doc["datum"] = {{"divergence_velocity", vv.divergence_residual},
                  {"divergence_magnetic", vc.divergence_residual},
                  {"valid", vv.ok() && vc.ok()},
                  {"norm_n", mhd::pair_norm(datum.pair, n)},
                  {"small_data_threshold", mu / constants.G_hat(n)}};
  doc["generalized_beltrami"] = mhd::verify_gb_pair(datum.pair).to_json();

  std::vector<double> orders = {0.0, n, n + 1.0};
  orders.insert(orders.end(), c.p_list.begin(), c.p_list.end());
  const mhd::Trajectory traj = mhd::integrate(datum.pair, solver_config(c, orders));
  const mhd::DecayReport decay = mhd::decay_diagnostics(traj, n, mu, constants);
  doc["decay"] = decay.to_json();
  if (c.writes_json()) write_json(c, "diagnostics.json", doc, digest);
  if (c.writes_csv()) write_csv(c, "trajectory.csv", traj.to_csv(), digest);

  std::cout << "diagnose  source=" << datum.source << " n=" << mhd::format_double(n)
            << " config_digest=" << digest << "\n";
  std::cout << "  datum valid: " << (vv.ok() && vc.ok() ? "yes" : "no") << "  |u0|_n = "
            << fmt(mhd::pair_norm(datum.pair, n)) << "  mu/G^_n = " << fmt(mu / constants.G_hat(n)) << "\n";
  if (doc.contains("generalized_beltrami")) {
    std::cout << "  generalized Beltrami pair: " << (doc["generalized_beltrami"]["ok"].get<bool>() ? "yes" : "no")
              << "\n";
  }
  std::cout << "  decay: verdict " << decay.verdict << ", decades " << fmt(decay.decades, 3) << ", fitted rate "
            << fmt(decay.fitted_rate, 4) << ", t_a "
            << (std::isnan(decay.t_a) ? std::string("none") : mhd::format_double(decay.t_a)) << "\n";
  for (const auto& note : decay.notes) std::cout << "  note: " << note << "\n";
  return kOk;
}

int cmd_constants(const RunConfig& c, const std::string& digest) {
  require_orders(c);
  const double n = c.order_n();
  const auto orders = mhd::required_constant_orders(n, c.p_list);
  const mhd::ConstantsTable table = mhd::analytic_constants(c.d, orders);
  json doc = table.to_json();
  std::cout << "constants  d=" << c.d << " config_digest=" << digest << "\n";
  std::cout << "  " << std::setw(6) << "p" << std::setw(6) << "n" << std::setw(14) << "K" << std::setw(14) << "G";
  if (c.samples > 0) std::cout << std::setw(14) << "K lower" << std::setw(14) << "G lower";
  std::cout << "\n";
  json lower = json::array();
  bool consistent = true;
  for (const auto& e : table.entries()) {
    std::cout << "  " << std::setw(6) << mhd::format_double(e.p) << std::setw(6) << mhd::format_double(e.n)
              << std::setw(14) << fmt(e.K, 5) << std::setw(14) << fmt(e.G, 5);
    if (c.samples > 0) {
      const auto est = mhd::estimate_constants(e.p, e.n, c.d, c.cutoff, c.samples, c.seed);
      std::cout << std::setw(14) << fmt(est.K_lower, 5) << std::setw(14) << fmt(est.G_lower, 5);
      lower.push_back({{"p", e.p}, {"n", e.n}, {"K_lower", est.K_lower}, {"G_lower", est.G_lower},
                       {"samples", est.samples}});
      if (est.K_lower > e.K || est.G_lower > e.G) consistent = false;
    }
    std::cout << "\n";
  }
  if (c.samples > 0) {
    json report = {{"lower_bounds", lower}, {"consistent", consistent}};
    write_json(c, "constants_check.json", report, digest);
  }
  mhd::write_text_file(fs::path(c.out) / "constants.json", doc.dump(2) + "\n");
  if (!consistent) {
    std::cerr << "sampled lower bound exceeds a tabulated constant\n";
    return kNumerical;
  }
  return kOk;
}

void add_common(CLI::App& app, RunConfig& c) {
  app.add_option("--d", c.d, "Spatial dimension")->check(CLI::Range(2, 4));
  app.add_option("--cutoff", c.cutoff, "Galerkin cutoff M (modes with max|k_i| <= M)")->check(CLI::Range(1, 32));
  app.add_option("--nu", c.nu, "Viscosity")->check(CLI::PositiveNumber);
  app.add_option("--eta", c.eta, "Resistivity")->check(CLI::PositiveNumber);
  app.add_option("--dt", c.dt, "Time step")->check(CLI::PositiveNumber);
  app.add_option("--t-end", c.t_end, "Final time")->check(CLI::PositiveNumber);
  app.add_option("--n", c.n, "Certificate order n (default d/2 + 1.5)");
  app.add_option("--p", c.p_list, "Higher order p > n (repeatable)")->take_all()->allow_extra_args(false);
  app.add_option("--constants", c.constants_path, "Constants table (JSON)")->check(CLI::ExistingFile);
  app.add_flag("--analytic-constants", c.analytic_constants, "Use the built-in analytic constants");
  app.add_option("--seed", c.seed, "Random seed");
  app.add_option("--out", c.out, "Output directory");
  app.add_option("--format", c.format, "Output format")->check(CLI::IsMember({"csv", "json", "both"}));
  app.add_option("--stride", c.stride, "Snapshot stride in steps")->check(CLI::PositiveNumber);
  app.add_flag("--direct", c.direct, "Exact convolution instead of the FFT path");
  app.add_flag("--states", c.states, "Include snapshots in trajectory.json");

  app.add_option("--datum", c.datum_path, "Initial pair (JSON)")->check(CLI::ExistingFile);
  app.add_flag("--random", c.random, "Random initial pair from --seed");
  app.add_option("--amplitude", c.amplitude, "L2 norm of the random pair")->check(CLI::NonNegativeNumber);
  app.add_option("--decay", c.decay, "Spectral decay exponent of the random pair");
  app.add_option("--beltrami-spec", c.spec_path, "Beltrami pair spec (JSON)")->check(CLI::ExistingFile);

  auto* kind = app.add_option_function<std::string>(
      "--kind", [&c](const std::string& s) { c.spec.kind = mhd::parse_kind(s); }, "scaled, sinusoidal or trkal");
  kind->check(CLI::IsMember({"scaled", "sinusoidal", "trkal"}));
  app.add_option("--base", c.spec.base, "Base flow of a scaled pair")->check(CLI::IsMember({"sine", "beltrami3d"}));
  app.add_option("--W", c.spec.W, "Sine-flow amplitude vector")->delimiter(',');
  app.add_option("--k", c.spec.k, "Sine-flow wave vector")->delimiter(',');
  app.add_option("--psi", c.spec.psi, "Sine-flow phase");
  app.add_option("--scale", c.spec.scale, "Scaled pair factor");
  app.add_option("--slot", c.spec.slot, "Scaled pair slot (0 or 1)")->check(CLI::Range(0, 1));
  app.add_option("--V", c.spec.V, "Sinusoidal velocity amplitude")->delimiter(',');
  app.add_option("--C", c.spec.C, "Sinusoidal magnetic amplitude")->delimiter(',');
  app.add_option("--ell", c.spec.ell, "Sinusoidal magnetic wave vector")->delimiter(',');
  app.add_option("--phi", c.spec.phi, "Sinusoidal magnetic phase");
  app.add_option("--alpha", c.spec.alpha);
  app.add_option("--beta", c.spec.beta);
  app.add_option("--gamma", c.spec.gamma);
  app.add_option("--delta", c.spec.delta);
  app.add_option("--eps", c.spec.eps, "Helicity sign of the velocity flow");
  app.add_option("--sigma", c.spec.sigma, "Helicity sign of the magnetic flow");
  app.add_option("--kappa", c.spec.kappa);
  app.add_option("--lambda", c.spec.lambda);

  app.add_option("--datum-error", c.datum_error, "Datum error delta: 'q:value' per order or one value for all");
  app.add_option("--perturbed", c.perturbed_path, "Perturbed datum; delta is measured against the base")
      ->check(CLI::ExistingFile);
  app.add_option("--residual", c.residual, "Differential error of the approximant")
      ->check(CLI::IsMember({"auto", "none", "galerkin"}));
  app.add_option("--n-sweep", c.n_sweep, "Extra orders n for a radius table")->delimiter(',');
  app.add_option("--samples", c.samples, "Random samples for the constants lower-bound check");
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig c;
  CLI::App app{"Galerkin MHD simulation and a-posteriori certificates"};
  app.set_config("--config", "", "TOML/INI file with option values (flags take precedence)");
  app.require_subcommand(1);
  app.fallthrough();
  add_common(app, c);
  c.spec.dim = 3;

  struct Cmd {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&, const std::string&);
  };
  const Cmd cmds[] = {
      {"simulate", "Integrate a datum and write the norm trajectory", cmd_simulate},
      {"certify", "A-posteriori certificate around a base solution", cmd_certify},
      {"radius", "Stability radius and perturbation envelopes of a decaying base", cmd_radius},
      {"beltrami", "Build and verify a generalized Beltrami pair", cmd_beltrami},
      {"diagnose", "Datum checks and decay diagnostics of a run", cmd_diagnose},
      {"constants", "Write analytic constants; optionally sample lower bounds", cmd_constants},
  };
  for (const auto& cmd : cmds) app.add_subcommand(cmd.name, cmd.help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    c.spec.dim = c.d;
    for (const auto& cmd : cmds) {
      if (!app.got_subcommand(cmd.name)) continue;
      c.command = cmd.name;
      return cmd.run(c, config_digest(c));
    }
    return kUsage;
  } catch (const mhd::AdmissibilityError& e) {
    std::cerr << "admissibility: " << e.condition() << ": " << e.what() << "\n";
    return kAdmissibility;
  } catch (const mhd::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const mhd::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return kUsage;
  }
}
