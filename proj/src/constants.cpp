#include "mhd/constants.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <mutex>

#include "mhd/bilinear.hpp"
#include "mhd/digest.hpp"
#include "mhd/errors.hpp"

namespace mhd {

using nlohmann::json;

namespace {

// orders are matched to 1e-9
std::pair<long long, long long> key(double p, double n) {
  return {std::llround(p * 1e9), std::llround(n * 1e9)};
}

std::string order_text(double p, double n) {
  return "(p=" + std::to_string(p) + ", n=" + std::to_string(n) + ")";
}

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

void ConstantsTable::set(double p, double n, double K, double G) {
  if (!(K > 0.0) || !(G > 0.0) || !std::isfinite(K) || !std::isfinite(G)) {
    throw InputError("constants must be positive and finite " + order_text(p, n));
  }
  if (!(p >= n)) throw InputError("constants need p >= n " + order_text(p, n));
  entries_[key(p, n)] = {p, n, K, G};
}

bool ConstantsTable::contains(double p, double n) const { return entries_.count(key(p, n)) > 0; }

std::vector<ConstantsEntry> ConstantsTable::entries() const {
  std::vector<ConstantsEntry> out;
  for (const auto& [k, e] : entries_) out.push_back(e);
  return out;
}

const ConstantsEntry& ConstantsTable::find(double p, double n) const {
  const auto it = entries_.find(key(p, n));
  if (it == entries_.end()) throw InputError("no constants for " + order_text(p, n));
  return it->second;
}

double ConstantsTable::K(double p, double n) const {
  if (!(n > 0.5 * dim_)) throw InputError("K needs n > d/2 " + order_text(p, n));
  return find(p, n).K;
}

double ConstantsTable::G(double p, double n) const {
  if (!(n > 0.5 * dim_ + 1.0)) throw InputError("G needs n > d/2 + 1 " + order_text(p, n));
  return find(p, n).G;
}

double ConstantsTable::K_hat(double p, double n) const { return std::sqrt(2.0) * K(p, n); }
double ConstantsTable::G_hat(double p, double n) const { return std::sqrt(2.0) * G(p, n); }

json ConstantsTable::to_json() const {
  json entries = json::array();
  for (const auto& [k, e] : entries_) {
    entries.push_back({{"p", e.p}, {"n", e.n}, {"K", e.K}, {"G", e.G}});
  }
  return {{"d", dim_}, {"entries", entries}};
}

ConstantsTable ConstantsTable::from_json(const json& doc) {
  try {
    ConstantsTable table(doc.at("d").get<int>());
    if (table.dim_ < 2) throw InputError("constants table: d must be >= 2");
    for (const auto& e : doc.at("entries")) {
      table.set(e.at("p").get<double>(), e.at("n").get<double>(), e.at("K").get<double>(),
                e.at("G").get<double>());
    }
    return table;
  } catch (const json::exception& e) {
    throw InputError(std::string("malformed constants table: ") + e.what());
  }
}

ConstantsTable ConstantsTable::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open constants file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw InputError("cannot parse " + path.string() + ": " + e.what());
  }
  return from_json(doc);
}

std::uint64_t ConstantsTable::digest() const { return fnv1a(to_json().dump()); }

double lattice_zeta_bound(int dim, double s) {
  if (dim < 1 || !(s > 0.5 * dim)) throw InputError("lattice sum needs s > d/2");
  static std::mutex mutex;
  static std::map<std::pair<int, long long>, double> cache;
  {
    std::lock_guard lock(mutex);
    const auto it = cache.find({dim, std::llround(s * 1e9)});
    if (it != cache.end()) return it->second;
  }
  const int radius = dim == 2 ? 300 : dim == 3 ? 40 : dim == 4 ? 12 : 5;
  // partial sum over the cube, grouped by |h|^2 to save pow calls
  std::map<long, long> shells;
  std::vector<int> h(static_cast<std::size_t>(dim), -radius);
  while (true) {
    long n2 = 0;
    for (int x : h) n2 += static_cast<long>(x) * x;
    if (n2 > 0) ++shells[n2];
    int i = dim - 1;
    while (i >= 0 && ++h[static_cast<std::size_t>(i)] > radius) h[static_cast<std::size_t>(i--)] = -radius;
    if (i < 0) break;
  }
  double sum = 0.0;
  for (const auto& [n2, count] : shells) sum += static_cast<double>(count) * std::pow(static_cast<double>(n2), -s);
  // points outside the cube have |h| > R; compare with the integral over
  // |x| >= R - sqrt(d)/2 of |x|^{-2s}
  const double R = radius;
  const double half_diag = 0.5 * std::sqrt(static_cast<double>(dim));
  const double sphere = 2.0 * std::pow(M_PI, 0.5 * dim) / std::tgamma(0.5 * dim);
  const double tail = std::pow(1.0 + half_diag / R, 2.0 * s) * sphere *
                      std::pow(R - half_diag, dim - 2.0 * s) / (2.0 * s - dim);
  const double value = std::sqrt(sum + tail) * (1.0 + 1e-12);
  std::lock_guard lock(mutex);
  cache[{dim, std::llround(s * 1e9)}] = value;
  return value;
}

ConstantsTable analytic_constants(int dim, const std::vector<std::pair<double, double>>& orders) {
  ConstantsTable table(dim);
  const double norm = std::pow(2.0 * M_PI, -0.5 * dim);
  for (const auto& [p, n] : orders) {
    if (!(n > 0.5 * dim + 1.0) || !(p >= n)) {
      throw InputError("analytic constants need p >= n > d/2 + 1 " + order_text(p, n));
    }
    const double K = std::pow(2.0, p) * norm * lattice_zeta_bound(dim, n);
    const double G = 2.0 * p * std::pow(2.0, std::max(p - 2.0, 0.0)) * norm * lattice_zeta_bound(dim, n - 1.0);
    table.set(p, n, K, G);
  }
  return table;
}

std::pair<double, double> inequality_ratios(const SpectralField& v, const SpectralField& w, double p,
                                            double n) {
  const SpectralField pv = P(v, w);
  double k_ratio = 0.0;
  double g_ratio = 0.0;
  const double vp = sobolev_norm(v, p);
  const double vn = sobolev_norm(v, n);
  const double k_den = 0.5 * (vp * sobolev_norm(w, n + 1.0) + vn * sobolev_norm(w, p + 1.0));
  if (k_den > 0.0) k_ratio = sobolev_norm(pv, p) / k_den;
  const double wp = sobolev_norm(w, p);
  const double g_den = 0.5 * (vp * sobolev_norm(w, n) + vn * wp) * wp;
  if (g_den > 0.0) g_ratio = std::abs(sobolev_inner(pv.with_cutoff(w.cutoff()), w, p)) / g_den;
  return {k_ratio, g_ratio};
}

ConstantsEstimate estimate_constants(double p, double n, int dim, int cutoff, std::size_t sample_count,
                                     std::uint64_t seed) {
  if (!(n > 0.5 * dim) || !(p >= n)) {
    throw InputError("estimate_constants needs p >= n > d/2 " + order_text(p, n));
  }
  const bool with_g = n > 0.5 * dim + 1.0;
  ConstantsEstimate est;
  for (std::size_t i = 0; i < sample_count; ++i) {
    const std::uint64_t s = splitmix(seed ^ splitmix(i));
    // vary the spectral slope so both low- and high-mode dominated pairs occur
    const double decay_v = static_cast<double>(s % 5);
    const double decay_w = static_cast<double>((s >> 8) % 5);
    const auto v = random_field(splitmix(s + 1), dim, cutoff, decay_v);
    const auto w = random_field(splitmix(s + 2), dim, cutoff, decay_w);
    const auto [kr, gr] = inequality_ratios(v, w, p, n);
    est.K_lower = std::max(est.K_lower, kr);
    if (with_g) est.G_lower = std::max(est.G_lower, gr);
    est.K_trace.push_back(est.K_lower);
    est.G_trace.push_back(est.G_lower);
    ++est.samples;
  }
  return est;
}

TransferCheck check_pair_transfer(const ConstantsTable& table, double p, double n, int cutoff,
                                  std::size_t sample_count, std::uint64_t seed) {
  const int dim = table.dim();
  const double Kh = table.K_hat(p, n);
  const bool with_g = n > 0.5 * dim + 1.0;
  const double Gh = with_g ? table.G_hat(p, n) : 0.0;
  TransferCheck check;
  for (std::size_t i = 0; i < sample_count; ++i) {
    const std::uint64_t s = splitmix(seed ^ splitmix(i + 0x5151));
    const double decay = static_cast<double>(s % 4);
    FieldPair V(random_field(splitmix(s + 1), dim, cutoff, decay), random_field(splitmix(s + 2), dim, cutoff, decay));
    FieldPair W(random_field(splitmix(s + 3), dim, cutoff, decay), random_field(splitmix(s + 4), dim, cutoff, decay));
    const FieldPair pv = P_mhd(V, W);
    const double Vp = pair_norm(V, p);
    const double Vn = pair_norm(V, n);
    const double Wp = pair_norm(W, p);
    const double lhs_k = pair_norm(pv, p);
    const double rhs_k = 0.5 * Kh * (Vp * pair_norm(W, n + 1.0) + Vn * pair_norm(W, p + 1.0));
    double worst = rhs_k > 0.0 ? lhs_k / rhs_k : 0.0;
    if (with_g) {
      const double lhs_g = std::abs(pair_inner(pv.with_cutoff(cutoff), W, p));
      const double rhs_g = 0.5 * Gh * (Vp * pair_norm(W, n) + Vn * Wp) * Wp;
      if (rhs_g > 0.0) worst = std::max(worst, lhs_g / rhs_g);
    }
    check.worst_ratio = std::max(check.worst_ratio, worst);
    if (worst > 1.0) ++check.violations;
    ++check.samples;
  }
  return check;
}

}  // namespace mhd
