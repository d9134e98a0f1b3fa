#include "mhd/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <utility>

#include "mhd/errors.hpp"

namespace mhd {

// ---------------------------------------------------------------------------
// WaveVector

long WaveVector::norm2() const noexcept {
  long s = 0;
  for (int x : c_) s += static_cast<long>(x) * x;
  return s;
}

double WaveVector::modulus() const noexcept { return std::sqrt(static_cast<double>(norm2())); }

bool WaveVector::is_zero() const noexcept {
  return std::all_of(c_.begin(), c_.end(), [](int x) { return x == 0; });
}

bool WaveVector::is_canonical() const noexcept {
  for (int x : c_) {
    if (x > 0) return true;
    if (x < 0) return false;
  }
  return false;
}

int WaveVector::max_abs() const noexcept {
  int m = 0;
  for (int x : c_) m = std::max(m, std::abs(x));
  return m;
}

WaveVector WaveVector::operator-() const {
  std::vector<int> out(c_.size());
  std::transform(c_.begin(), c_.end(), out.begin(), [](int x) { return -x; });
  return WaveVector(std::move(out));
}

WaveVector WaveVector::operator+(const WaveVector& other) const {
  if (other.dim() != dim()) throw InputError("WaveVector dimension mismatch");
  std::vector<int> out(c_.size());
  for (std::size_t i = 0; i < c_.size(); ++i) out[i] = c_[i] + other.c_[i];
  return WaveVector(std::move(out));
}

std::string WaveVector::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < c_.size(); ++i) os << (i ? "," : "") << c_[i];
  os << ')';
  return os.str();
}

// ---------------------------------------------------------------------------
// ModeLayout

ModeLayout::ModeLayout(int dim, int cutoff) : dim_(dim), cutoff_(cutoff) {
  if (dim < 2) throw InputError("dimension must be >= 2, got " + std::to_string(dim));
  if (cutoff < 1) throw InputError("cutoff must be >= 1, got " + std::to_string(cutoff));
  const int side = 2 * cutoff + 1;
  std::size_t total = 1;
  for (int i = 0; i < dim; ++i) total *= static_cast<std::size_t>(side);
  table_.assign(total, 0);

  std::vector<int> k(static_cast<std::size_t>(dim), -cutoff);
  std::vector<std::size_t> canonical_slot(total, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    WaveVector w(k);
    if (w.is_canonical()) {
      modes_.push_back(w);
      norm2_.push_back(static_cast<double>(w.norm2()));
      table_[flat] = static_cast<std::int32_t>(modes_.size());
    }
    // odometer increment, last component fastest
    for (int i = dim - 1; i >= 0; --i) {
      if (++k[static_cast<std::size_t>(i)] <= cutoff) break;
      k[static_cast<std::size_t>(i)] = -cutoff;
    }
  }
  // partners: flat index of -k mirrors flat index of k
  for (std::size_t flat = 0; flat < total; ++flat) {
    if (table_[flat] > 0) table_[total - 1 - flat] = -table_[flat];
  }
}

std::shared_ptr<const ModeLayout> ModeLayout::get(int dim, int cutoff) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const ModeLayout>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{dim, cutoff}];
  if (!slot) slot = std::make_shared<const ModeLayout>(dim, cutoff);
  return slot;
}

ModeLayout::Slot ModeLayout::locate(const int* k) const {
  const int side = 2 * cutoff_ + 1;
  std::size_t flat = 0;
  for (int i = 0; i < dim_; ++i) {
    const int x = k[i];
    if (x < -cutoff_ || x > cutoff_) return {};
    flat = flat * static_cast<std::size_t>(side) + static_cast<std::size_t>(x + cutoff_);
  }
  const std::int32_t code = table_[flat];
  if (code > 0) return {code - 1, false, false};
  if (code < 0) return {-code - 1, true, false};
  return {-1, false, true};
}

ModeLayout::Slot ModeLayout::locate(const WaveVector& k) const {
  if (k.dim() != dim_) throw InputError("wave vector dimension mismatch");
  return locate(k.components().data());
}

// ---------------------------------------------------------------------------
// SpectralField

SpectralField::SpectralField(int dim, int cutoff)
    : layout_(ModeLayout::get(dim, cutoff)),
      coeffs_(layout_->size() * static_cast<std::size_t>(dim), Complex{}) {}

std::span<const Complex> SpectralField::mode_coefficients(std::size_t i) const {
  const auto d = static_cast<std::size_t>(dim());
  return {coeffs_.data() + i * d, d};
}

std::span<Complex> SpectralField::mode_coefficients(std::size_t i) {
  const auto d = static_cast<std::size_t>(dim());
  return {coeffs_.data() + i * d, d};
}

std::vector<Complex> SpectralField::coefficient(const WaveVector& k) const {
  const auto d = static_cast<std::size_t>(dim());
  std::vector<Complex> out(d, Complex{});
  const auto slot = layout_->locate(k);
  if (slot.zero) {
    for (std::size_t r = 0; r < mean_.size(); ++r) out[r] = mean_[r];
    return out;
  }
  if (slot.index < 0) return out;
  const auto c = mode_coefficients(static_cast<std::size_t>(slot.index));
  for (std::size_t r = 0; r < d; ++r) out[r] = slot.conjugate ? std::conj(c[r]) : c[r];
  return out;
}

void SpectralField::set_coefficient(const WaveVector& k, std::span<const Complex> value) {
  const auto d = static_cast<std::size_t>(dim());
  if (value.size() != d) throw InputError("coefficient length must equal the dimension");
  const auto slot = layout_->locate(k);
  if (slot.zero) throw InputError("the zero mode cannot be set on a mean-zero field");
  if (slot.index < 0) {
    throw InputError("wave vector " + k.to_string() + " lies outside cutoff " +
                     std::to_string(cutoff()));
  }
  auto c = mode_coefficients(static_cast<std::size_t>(slot.index));
  for (std::size_t r = 0; r < d; ++r) c[r] = slot.conjugate ? std::conj(value[r]) : value[r];
  solenoidal_ = false;
}

void SpectralField::set_mean_mode(std::vector<double> v0) {
  if (!v0.empty() && v0.size() != static_cast<std::size_t>(dim())) {
    throw InputError("mean mode length must equal the dimension");
  }
  mean_ = std::move(v0);
}

bool SpectralField::has_mean() const noexcept {
  return std::any_of(mean_.begin(), mean_.end(), [](double x) { return x != 0.0; });
}

SpectralField SpectralField::with_cutoff(int new_cutoff) const {
  if (new_cutoff == cutoff()) return *this;
  SpectralField out(dim(), new_cutoff);
  const auto d = static_cast<std::size_t>(dim());
  for (std::size_t i = 0; i < mode_count(); ++i) {
    const auto& k = layout_->mode(i);
    const auto slot = out.layout_->locate(k);
    if (slot.index < 0) continue;
    auto dst = out.mode_coefficients(static_cast<std::size_t>(slot.index));
    const auto src = mode_coefficients(i);
    std::copy(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(d), dst.begin());
  }
  out.mean_ = mean_;
  out.solenoidal_ = solenoidal_;
  return out;
}

bool SpectralField::is_zero() const noexcept {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](const Complex& c) { return c == Complex{}; }) &&
         !has_mean();
}

void SpectralField::require_same_shape(const SpectralField& other) const {
  if (other.layout_ != layout_) {
    throw InputError("field shape mismatch: (d=" + std::to_string(dim()) + ", M=" +
                     std::to_string(cutoff()) + ") vs (d=" + std::to_string(other.dim()) +
                     ", M=" + std::to_string(other.cutoff()) + ")");
  }
}

SpectralField& SpectralField::operator+=(const SpectralField& other) { return axpy(1.0, other); }

SpectralField& SpectralField::operator-=(const SpectralField& other) { return axpy(-1.0, other); }

SpectralField& SpectralField::operator*=(double s) {
  for (auto& c : coeffs_) c *= s;
  for (auto& m : mean_) m *= s;
  return *this;
}

SpectralField& SpectralField::axpy(double s, const SpectralField& other) {
  require_same_shape(other);
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * other.coeffs_[i];
  if (!other.mean_.empty()) {
    mean_.resize(other.mean_.size(), 0.0);
    for (std::size_t r = 0; r < mean_.size(); ++r) mean_[r] += s * other.mean_[r];
  }
  solenoidal_ = solenoidal_ && other.solenoidal_;
  return *this;
}

// ---------------------------------------------------------------------------
// FieldPair

FieldPair::FieldPair(SpectralField v, SpectralField c) : velocity(std::move(v)), magnetic(std::move(c)) {
  if (velocity.dim() != magnetic.dim() || velocity.cutoff() != magnetic.cutoff()) {
    throw InputError("field pair components differ in dimension or cutoff");
  }
}

FieldPair::FieldPair(int dim, int cutoff) : velocity(dim, cutoff), magnetic(dim, cutoff) {}

FieldPair FieldPair::with_cutoff(int cutoff) const {
  return {velocity.with_cutoff(cutoff), magnetic.with_cutoff(cutoff)};
}

FieldPair& FieldPair::operator+=(const FieldPair& o) { return axpy(1.0, o); }
FieldPair& FieldPair::operator-=(const FieldPair& o) { return axpy(-1.0, o); }

FieldPair& FieldPair::operator*=(double s) {
  velocity *= s;
  magnetic *= s;
  return *this;
}

FieldPair& FieldPair::axpy(double s, const FieldPair& o) {
  velocity.axpy(s, o.velocity);
  magnetic.axpy(s, o.magnetic);
  return *this;
}

// ---------------------------------------------------------------------------
// Norms and linear operators

namespace {

// |k|^{2p} with exact shortcuts for the orders used most.
inline double weight(double k2, double p) {
  if (p == 0.0) return 1.0;
  if (p == 1.0) return k2;
  return std::pow(k2, p);
}

}  // namespace

double sobolev_inner(const SpectralField& v, const SpectralField& w, double p) {
  if (v.layout_ptr() != w.layout_ptr()) throw InputError("inner product of mismatched fields");
  const auto& layout = v.layout();
  const auto d = static_cast<std::size_t>(v.dim());
  double sum = 0.0;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const auto a = v.mode_coefficients(i);
    const auto b = w.mode_coefficients(i);
    double dot = 0.0;
    for (std::size_t r = 0; r < d; ++r) dot += (std::conj(a[r]) * b[r]).real();
    if (dot != 0.0) sum += weight(layout.norm2(i), p) * dot;
  }
  // each stored mode stands for k and -k
  return 2.0 * sum;
}

double sobolev_norm(const SpectralField& field, double p) {
  if (field.mode_count() == 0) return 0.0;
  const auto& layout = field.layout();
  const auto d = static_cast<std::size_t>(field.dim());
  double sum = 0.0;
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const auto a = field.mode_coefficients(i);
    double m2 = 0.0;
    for (std::size_t r = 0; r < d; ++r) m2 += std::norm(a[r]);
    if (m2 != 0.0) sum += weight(layout.norm2(i), p) * m2;
  }
  return std::sqrt(2.0 * sum);
}

double pair_norm(const FieldPair& pair, double p) {
  const double a = sobolev_norm(pair.velocity, p);
  const double b = sobolev_norm(pair.magnetic, p);
  return std::sqrt(a * a + b * b);
}

double pair_inner(const FieldPair& a, const FieldPair& b, double p) {
  return sobolev_inner(a.velocity, b.velocity, p) + sobolev_inner(a.magnetic, b.magnetic, p);
}

SpectralField leray_project(const SpectralField& field) {
  SpectralField out = field;
  out.set_mean_mode({});
  const auto& layout = field.layout();
  const auto d = static_cast<std::size_t>(field.dim());
  for (std::size_t i = 0; i < layout.size(); ++i) {
    auto c = out.mode_coefficients(i);
    const auto& k = layout.mode(i);
    Complex kv{};
    for (std::size_t r = 0; r < d; ++r) kv += static_cast<double>(k[static_cast<int>(r)]) * c[r];
    if (kv == Complex{}) continue;
    const Complex scale = kv / layout.norm2(i);
    for (std::size_t r = 0; r < d; ++r) c[r] -= scale * static_cast<double>(k[static_cast<int>(r)]);
  }
  out.mark_solenoidal(true);
  return out;
}

SpectralField frac_laplacian(const SpectralField& field, double p) {
  SpectralField out = field;
  out.set_mean_mode({});
  if (p == 0.0) return out;
  const auto& layout = field.layout();
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const double s = weight(layout.norm2(i), 0.5 * p);
    for (auto& c : out.mode_coefficients(i)) c *= s;
  }
  return out;
}

SpectralField laplacian(const SpectralField& field) {
  SpectralField out = field;
  out.set_mean_mode({});
  const auto& layout = field.layout();
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const double s = -layout.norm2(i);
    for (auto& c : out.mode_coefficients(i)) c *= s;
  }
  return out;
}

FieldPair apply_A(const FieldPair& pair, double nu, double eta) {
  if (!(nu > 0.0) || !(eta > 0.0)) {
    throw InputError("viscosity and resistivity must be positive");
  }
  return {nu * laplacian(pair.velocity), eta * laplacian(pair.magnetic)};
}

// ---------------------------------------------------------------------------
// Diagnostics

ValidationReport validate(const SpectralField& field, double tolerance) {
  ValidationReport report;
  if (field.mode_count() == 0) return report;
  const auto& layout = field.layout();
  const auto d = static_cast<std::size_t>(field.dim());
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const auto c = field.mode_coefficients(i);
    const auto& k = layout.mode(i);
    Complex kv{};
    double m2 = 0.0;
    for (std::size_t r = 0; r < d; ++r) {
      kv += static_cast<double>(k[static_cast<int>(r)]) * c[r];
      m2 += std::norm(c[r]);
    }
    if (m2 == 0.0) continue;
    const double ratio = std::abs(kv) / (std::sqrt(layout.norm2(i) * m2));
    report.divergence_residual = std::max(report.divergence_residual, ratio);
  }
  if (report.divergence_residual > tolerance) {
    report.divergence_free = false;
    report.findings.push_back("not divergence-free: residual " +
                              std::to_string(report.divergence_residual));
  }
  if (field.has_mean()) {
    report.mean_zero = false;
    report.findings.push_back("nonzero mean (zero mode present)");
  }
  for (const auto& c : field.data()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      report.findings.push_back("nonfinite coefficient");
      report.hermitian_consistent = false;
      break;
    }
  }
  return report;
}

namespace {

// Portable normal deviates: mt19937_64 output is fixed by the standard, the
// transform below is ours, so fields are reproducible across toolchains.
class NormalStream {
 public:
  explicit NormalStream(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 0.0);
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace

SpectralField random_field(std::uint64_t seed, int dim, int cutoff, double spectrum_decay) {
  SpectralField field(dim, cutoff);
  NormalStream rng(seed);
  const auto& layout = field.layout();
  for (std::size_t i = 0; i < layout.size(); ++i) {
    const double amplitude = std::pow(layout.norm2(i), -0.5 * spectrum_decay);
    for (auto& c : field.mode_coefficients(i)) {
      const double re = rng.next();
      const double im = rng.next();
      c = amplitude * Complex(re, im);
    }
  }
  return leray_project(field);
}

}  // namespace mhd
