#include "mhd/bilinear.hpp"

#include <cmath>

#include "mhd/errors.hpp"
#include "mhd/parallel.hpp"

namespace mhd {

namespace {

void require_compatible(const SpectralField& v, const SpectralField& w) {
  if (v.dim() != w.dim() || v.cutoff() != w.cutoff()) {
    throw InputError("bilinear map: operands differ in dimension or cutoff");
  }
  if (v.dim() == 0) throw InputError("bilinear map: empty field");
}

}  // namespace

SpectralField advect(const SpectralField& v, const SpectralField& w) {
  require_compatible(v, w);
  const int d = v.dim();
  const auto du = static_cast<std::size_t>(d);
  const auto& in = v.layout();
  SpectralField out(d, 2 * v.cutoff());
  const auto& layout_out = out.layout();
  const double norm = std::pow(2.0 * M_PI, -0.5 * d);

  // output slot n == size() is the zero mode
  const std::size_t outputs = layout_out.size() + 1;
  std::vector<Complex> mean(du, Complex{});

  parallel_for(outputs, [&](std::size_t n) {
    std::vector<int> q(du, 0);
    if (n < layout_out.size()) q = layout_out.mode(n).components();
    std::vector<int> kk(du);
    std::vector<Complex> acc(du, Complex{});
    for (std::size_t i = 0; i < in.size(); ++i) {
      const auto& base = in.mode(i);
      const auto vi = v.mode_coefficients(i);
      for (int sign : {1, -1}) {
        // k' = sign * base, k'' = q - k'
        bool inside = true;
        for (std::size_t r = 0; r < du; ++r) {
          kk[r] = q[r] - sign * base[static_cast<int>(r)];
          if (kk[r] < -v.cutoff() || kk[r] > v.cutoff()) inside = false;
        }
        if (!inside) continue;
        const auto slot = in.locate(kk.data());
        if (slot.index < 0) continue;
        const auto wj = w.mode_coefficients(static_cast<std::size_t>(slot.index));
        Complex dot{};
        for (std::size_t s = 0; s < du; ++s) {
          const Complex vs = sign > 0 ? vi[s] : std::conj(vi[s]);
          dot += vs * static_cast<double>(kk[s]);
        }
        if (dot == Complex{}) continue;
        const Complex factor = Complex(0.0, 1.0) * dot;
        for (std::size_t r = 0; r < du; ++r) {
          const Complex wr = slot.conjugate ? std::conj(wj[r]) : wj[r];
          acc[r] += factor * wr;
        }
      }
    }
    if (n < layout_out.size()) {
      auto dst = out.mode_coefficients(n);
      for (std::size_t r = 0; r < du; ++r) dst[r] = norm * acc[r];
    } else {
      for (std::size_t r = 0; r < du; ++r) mean[r] = norm * acc[r];
    }
  });

  std::vector<double> mean_real(du);
  bool any = false;
  for (std::size_t r = 0; r < du; ++r) {
    mean_real[r] = mean[r].real();
    any = any || mean_real[r] != 0.0;
  }
  if (any) out.set_mean_mode(std::move(mean_real));
  out.mark_solenoidal(false);
  return out;
}

SpectralField P(const SpectralField& v, const SpectralField& w, std::vector<std::string>* warnings) {
  SpectralField a = advect(v, w);
  if (warnings && a.has_mean()) {
    warnings->push_back("first operand not divergence-free: zero mode of the product removed");
  }
  SpectralField out = leray_project(a);
  out *= -1.0;
  return out;
}

FieldPair P_mhd(const FieldPair& V, const FieldPair& W) {
  require_compatible(V.velocity, W.velocity);
  require_compatible(V.magnetic, W.magnetic);
  require_compatible(V.velocity, V.magnetic);
  // P is linear in the product, so combine before projecting
  SpectralField first = advect(V.velocity, W.velocity);
  first -= advect(V.magnetic, W.magnetic);
  SpectralField second = advect(V.velocity, W.magnetic);
  second -= advect(V.magnetic, W.velocity);
  SpectralField u = leray_project(first);
  SpectralField b = leray_project(second);
  u *= -1.0;
  b *= -1.0;
  return {std::move(u), std::move(b)};
}

}  // namespace mhd
