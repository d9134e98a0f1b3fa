#pragma once

// Fourier representation of real, mean-zero vector fields on the d-torus
// (R / 2piZ)^d. A field is v(x) = sum_k v_k e_k(x) with
// e_k(x) = (2pi)^{-d/2} exp(i k.x) and v_{-k} = conj(v_k).
//
// Modes live in the cube max_i |k_i| <= cutoff. Only the canonical
// representative of each +-k pair (first nonzero component positive) is
// stored; the partner is implied, so every field is real by construction.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace mhd {

using Complex = std::complex<double>;

/// Integer wave vector k in Z^d.
class WaveVector {
 public:
  WaveVector() = default;
  explicit WaveVector(std::vector<int> components) : c_(std::move(components)) {}
  WaveVector(std::initializer_list<int> components) : c_(components) {}

  int dim() const noexcept { return static_cast<int>(c_.size()); }
  int operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& components() const noexcept { return c_; }

  long norm2() const noexcept;
  double modulus() const noexcept;
  bool is_zero() const noexcept;
  /// First nonzero component is positive.
  bool is_canonical() const noexcept;
  int max_abs() const noexcept;
  WaveVector operator-() const;
  WaveVector operator+(const WaveVector& other) const;
  bool operator==(const WaveVector& other) const = default;

  std::string to_string() const;

 private:
  std::vector<int> c_;
};

/// Enumeration of the canonical modes of the cube max|k_i| <= cutoff, with
/// an O(1) lookup from any k in the cube. Shared between fields.
class ModeLayout {
 public:
  static std::shared_ptr<const ModeLayout> get(int dim, int cutoff);

  int dim() const noexcept { return dim_; }
  int cutoff() const noexcept { return cutoff_; }
  std::size_t size() const noexcept { return modes_.size(); }
  const WaveVector& mode(std::size_t i) const { return modes_[i]; }
  /// |k|^2 of mode i.
  double norm2(std::size_t i) const { return norm2_[i]; }

  struct Slot {
    std::ptrdiff_t index = -1;  ///< canonical mode index, -1 if zero/outside
    bool conjugate = false;     ///< k is the partner -k_canonical
    bool zero = false;
  };
  Slot locate(const WaveVector& k) const;
  /// Same as locate(), from raw components (hot path, no allocation).
  Slot locate(const int* k) const;

  ModeLayout(int dim, int cutoff);

 private:
  int dim_;
  int cutoff_;
  std::vector<WaveVector> modes_;
  std::vector<double> norm2_;
  // full cube table: >0 canonical index+1, <0 conjugate -(index+1), 0 zero mode
  std::vector<std::int32_t> table_;
};

/// Real, finite-mode vector field on T^d.
class SpectralField {
 public:
  SpectralField() = default;
  /// Zero field of the given dimension and cutoff.
  SpectralField(int dim, int cutoff);

  int dim() const noexcept { return layout_ ? layout_->dim() : 0; }
  int cutoff() const noexcept { return layout_ ? layout_->cutoff() : 0; }
  std::size_t mode_count() const noexcept { return layout_ ? layout_->size() : 0; }
  const ModeLayout& layout() const { return *layout_; }
  const std::shared_ptr<const ModeLayout>& layout_ptr() const { return layout_; }

  /// Coefficient vector (d components) of canonical mode i.
  std::span<const Complex> mode_coefficients(std::size_t i) const;
  std::span<Complex> mode_coefficients(std::size_t i);
  std::span<const Complex> data() const { return coeffs_; }
  std::span<Complex> data() { return coeffs_; }

  /// v_k for arbitrary k (partner conjugated, zero outside the cube).
  std::vector<Complex> coefficient(const WaveVector& k) const;
  /// Sets v_k (and implicitly v_{-k}). k must be nonzero and inside the cube.
  void set_coefficient(const WaveVector& k, std::span<const Complex> value);

  /// Zero-mode coefficient v_0 (real). Empty for valid mean-zero fields;
  /// populated only by raw advection or deliberate injection.
  const std::vector<double>& mean_mode() const noexcept { return mean_; }
  void set_mean_mode(std::vector<double> v0);
  bool has_mean() const noexcept;

  /// Whether the field is known to satisfy k.v_k = 0 (set by projections and
  /// constructors; `validate` measures it).
  bool solenoidal() const noexcept { return solenoidal_; }
  void mark_solenoidal(bool flag) noexcept { solenoidal_ = flag; }

  /// Copy into a cube of another cutoff (drops or zero-pads modes).
  SpectralField with_cutoff(int cutoff) const;

  bool is_zero() const noexcept;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double s);
  /// this += s * other
  SpectralField& axpy(double s, const SpectralField& other);

  friend SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
  friend SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
  friend SpectralField operator*(double s, SpectralField a) { return a *= s; }

 private:
  void require_same_shape(const SpectralField& other) const;

  std::shared_ptr<const ModeLayout> layout_;
  std::vector<Complex> coeffs_;
  std::vector<double> mean_;
  bool solenoidal_ = true;
};

/// State (u, b) of the MHD system: velocity and magnetic field.
struct FieldPair {
  SpectralField velocity;
  SpectralField magnetic;

  FieldPair() = default;
  /// Throws InputError if dimension or cutoff differ.
  FieldPair(SpectralField v, SpectralField c);
  /// Zero pair.
  FieldPair(int dim, int cutoff);

  int dim() const noexcept { return velocity.dim(); }
  int cutoff() const noexcept { return velocity.cutoff(); }
  FieldPair with_cutoff(int cutoff) const;

  FieldPair& operator+=(const FieldPair& o);
  FieldPair& operator-=(const FieldPair& o);
  FieldPair& operator*=(double s);
  FieldPair& axpy(double s, const FieldPair& o);
  friend FieldPair operator+(FieldPair a, const FieldPair& b) { return a += b; }
  friend FieldPair operator-(FieldPair a, const FieldPair& b) { return a -= b; }
  friend FieldPair operator*(double s, FieldPair a) { return a *= s; }
};

/// ||v||_p = sqrt(sum_{k != 0} |k|^{2p} |v_k|^2) over the full (+-k) set.
double sobolev_norm(const SpectralField& field, double p);
/// <v|w>_p, real part (fields are real so the product is real).
double sobolev_inner(const SpectralField& v, const SpectralField& w, double p);
/// sqrt(||v||_p^2 + ||c||_p^2).
double pair_norm(const FieldPair& pair, double p);
double pair_inner(const FieldPair& a, const FieldPair& b, double p);

/// Modewise v_k - (k.v_k) k / |k|^2. Drops any zero mode.
SpectralField leray_project(const SpectralField& field);
/// Modewise |k|^p v_k, i.e. (-Delta)^{p/2}.
SpectralField frac_laplacian(const SpectralField& field, double p);
/// Delta v = -|k|^2 v_k.
SpectralField laplacian(const SpectralField& field);
/// (nu Delta v, eta Delta c). Throws InputError unless nu, eta > 0.
FieldPair apply_A(const FieldPair& pair, double nu, double eta);

struct ValidationReport {
  /// max over modes of |k.v_k| / (|k| |v_k|).
  double divergence_residual = 0.0;
  bool divergence_free = true;
  bool mean_zero = true;
  bool hermitian_consistent = true;
  std::vector<std::string> findings;

  bool ok() const { return divergence_free && mean_zero && hermitian_consistent; }
};

/// Checks divergence, mean and realness of a field.
ValidationReport validate(const SpectralField& field, double tolerance = 1e-12);

/// Deterministic divergence-free random field; coefficient magnitudes scale
/// as |k|^{-spectrum_decay}.
SpectralField random_field(std::uint64_t seed, int dim, int cutoff, double spectrum_decay);

}  // namespace mhd
