#pragma once

// Constants of the bilinear inequalities
//   ||P(v,w)||_p       <= K_pn/2 (||v||_p ||w||_{n+1} + ||v||_n ||w||_{p+1}),  p >= n > d/2
//   |<P(v,w)|w>_p|     <= G_pn/2 (||v||_p ||w||_n + ||v||_n ||w||_p) ||w||_p,  p >= n > d/2+1
// and their pair versions with K^ = sqrt(2) K, G^ = sqrt(2) G.

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "mhd/spectral.hpp"

namespace mhd {

struct ConstantsEntry {
  double p = 0.0;
  double n = 0.0;
  double K = 0.0;
  double G = 0.0;
};

class ConstantsTable {
 public:
  explicit ConstantsTable(int dim) : dim_(dim) {}

  int dim() const noexcept { return dim_; }
  /// Adds or replaces (p, n). Throws InputError unless K, G > 0 and p >= n.
  void set(double p, double n, double K, double G);
  bool contains(double p, double n) const;
  std::vector<ConstantsEntry> entries() const;

  /// Throw InputError for missing entries or orders out of range
  /// (K needs n > d/2, G needs n > d/2 + 1).
  double K(double p, double n) const;
  double G(double p, double n) const;
  double K_hat(double p, double n) const;
  double G_hat(double p, double n) const;
  double K(double q) const { return K(q, q); }
  double G(double q) const { return G(q, q); }
  double K_hat(double q) const { return K_hat(q, q); }
  double G_hat(double q) const { return G_hat(q, q); }

  nlohmann::json to_json() const;
  static ConstantsTable from_json(const nlohmann::json& doc);
  static ConstantsTable load(const std::filesystem::path& path);
  /// FNV-1a over the canonical JSON dump.
  std::uint64_t digest() const;

 private:
  const ConstantsEntry& find(double p, double n) const;

  int dim_;
  std::map<std::pair<long long, long long>, ConstantsEntry> entries_;
};

/// Zeta-type lattice sum sqrt(sum_{h in Z^d \ 0} |h|^{-2s}), s > d/2,
/// rounded up (partial sum plus an integral bound on the tail).
double lattice_zeta_bound(int dim, double s);

/// Valid but non-sharp constants from Young's inequality and
/// Cauchy-Schwarz in Fourier space:
///   K_pn = 2^p (2pi)^{-d/2} Z_n,  G_pn = 2p 2^{max(p-2,0)} (2pi)^{-d/2} Z_{n-1}
/// with Z_s = lattice_zeta_bound(d, s). Every order pair needs
/// p >= n > d/2 + 1 (InputError otherwise).
ConstantsTable analytic_constants(int dim, const std::vector<std::pair<double, double>>& orders);

struct ConstantsEstimate {
  double K_lower = 0.0;
  double G_lower = 0.0;
  std::size_t samples = 0;
  /// Running maxima after each sample (monotone).
  std::vector<double> K_trace;
  std::vector<double> G_trace;
};

/// Empirical lower bounds: max over random pairs of the ratios
/// ||P(v,w)||_p / (1/2 (...)) and |<P(v,w)|w>_p| / (1/2 (...)).
/// Sample i uses seeds derived from (seed, i) only, so a longer run extends
/// a shorter one.
ConstantsEstimate estimate_constants(double p, double n, int dim, int cutoff, std::size_t sample_count,
                                     std::uint64_t seed);

/// Ratio contributed by a single (v, w) sample; 0 if the denominator vanishes.
std::pair<double, double> inequality_ratios(const SpectralField& v, const SpectralField& w, double p,
                                            double n);

struct TransferCheck {
  std::size_t samples = 0;
  std::size_t violations = 0;
  double worst_ratio = 0.0;  ///< max of lhs / rhs with the hatted constants
};

/// Samples random pairs and checks the pair inequalities with
/// K^ = sqrt(2) K, G^ = sqrt(2) G taken from the table.
TransferCheck check_pair_transfer(const ConstantsTable& table, double p, double n, int cutoff,
                                  std::size_t sample_count, std::uint64_t seed);

}  // namespace mhd
