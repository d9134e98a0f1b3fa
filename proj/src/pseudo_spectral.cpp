#include <fftw3.h>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>

#include "mhd/bilinear.hpp"
#include "mhd/errors.hpp"

namespace mhd {

namespace {

bool smooth235(int n) {
  for (int p : {2, 3, 5}) {
    while (n % p == 0) n /= p;
  }
  return n == 1;
}

// Real-to-complex FFT plans on an N^d grid. Plans are created once per
// (d, N) and only ever executed through the new-array interface, which
// FFTW documents as thread safe.
struct Grid {
  int dim = 0;
  int n = 0;
  std::size_t real_size = 0;
  std::size_t complex_size = 0;
  fftw_plan backward = nullptr;
  fftw_plan forward = nullptr;

  ~Grid() {
    if (backward) fftw_destroy_plan(backward);
    if (forward) fftw_destroy_plan(forward);
  }
};

// Position of each canonical mode of a layout in the half-complex array.
struct ModeMap {
  std::vector<std::ptrdiff_t> pos;
  std::vector<char> conj;
  std::vector<std::ptrdiff_t> partner;  // last component zero: -k also stored
};

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

const Grid& grid_for(int dim, int n) {
  static std::map<std::pair<int, int>, std::unique_ptr<Grid>> cache;
  std::lock_guard lock(plan_mutex());
  auto& slot = cache[{dim, n}];
  if (slot) return *slot;
  auto g = std::make_unique<Grid>();
  g->dim = dim;
  g->n = n;
  std::vector<int> dims(static_cast<std::size_t>(dim), n);
  g->real_size = 1;
  for (int i = 0; i < dim; ++i) g->real_size *= static_cast<std::size_t>(n);
  g->complex_size = g->real_size / static_cast<std::size_t>(n) * static_cast<std::size_t>(n / 2 + 1);
  auto* r = fftw_alloc_real(g->real_size);
  auto* c = fftw_alloc_complex(g->complex_size);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  g->backward = fftw_plan_dft_c2r(dim, dims.data(), c, r, flags | FFTW_DESTROY_INPUT);
  g->forward = fftw_plan_dft_r2c(dim, dims.data(), r, c, flags);
  fftw_free(r);
  fftw_free(c);
  if (!g->backward || !g->forward) throw NumericalError("FFTW plan creation failed");
  slot = std::move(g);
  return *slot;
}

const ModeMap& map_for(const ModeLayout& layout, int n) {
  static std::map<std::tuple<int, int, int>, std::unique_ptr<ModeMap>> cache;
  std::lock_guard lock(plan_mutex());
  auto& slot = cache[{layout.dim(), layout.cutoff(), n}];
  if (slot) return *slot;
  auto m = std::make_unique<ModeMap>();
  const int d = layout.dim();
  const int half = n / 2 + 1;
  auto position = [&](const std::vector<int>& k) {
    std::ptrdiff_t p = 0;
    for (int i = 0; i < d - 1; ++i) p = p * n + ((k[static_cast<std::size_t>(i)] % n) + n) % n;
    return p * half + k[static_cast<std::size_t>(d - 1)];
  };
  for (std::size_t i = 0; i < layout.size(); ++i) {
    auto k = layout.mode(i).components();
    const int last = k.back();
    std::vector<int> neg(k.size());
    for (std::size_t r = 0; r < k.size(); ++r) neg[r] = -k[r];
    if (last >= 0) {
      m->pos.push_back(position(k));
      m->conj.push_back(0);
      m->partner.push_back(last == 0 ? position(neg) : -1);
    } else {
      m->pos.push_back(position(neg));
      m->conj.push_back(1);
      m->partner.push_back(-1);
    }
  }
  slot = std::move(m);
  return *slot;
}

struct Workspace {
  std::vector<double> real;
  std::vector<Complex> spec;
};

Workspace& workspace() {
  thread_local Workspace ws;
  return ws;
}

class Transformer {
 public:
  Transformer(int dim, int in_cutoff, int out_cutoff)
      : dim_(dim),
        n_(fft_grid_size(in_cutoff, out_cutoff)),
        grid_(grid_for(dim, n_)),
        in_map_(map_for(*ModeLayout::get(dim, in_cutoff), n_)),
        out_map_(map_for(*ModeLayout::get(dim, out_cutoff), n_)),
        out_cutoff_(out_cutoff) {
    norm_in_ = std::pow(2.0 * M_PI, -0.5 * dim);
    norm_out_ = std::pow(2.0 * M_PI, 0.5 * dim) / static_cast<double>(grid_.real_size);
  }

  std::size_t real_size() const { return grid_.real_size; }

  // Component r of the field, or of d/dx_s of it when deriv >= 0.
  void to_physical(const SpectralField& f, std::size_t r, int deriv, double* out) {
    auto& spec = workspace().spec;
    spec.assign(grid_.complex_size, Complex{});
    const auto& layout = f.layout();
    for (std::size_t i = 0; i < layout.size(); ++i) {
      Complex a = norm_in_ * f.mode_coefficients(i)[r];
      if (a == Complex{}) continue;
      if (deriv >= 0) a *= Complex(0.0, layout.mode(i)[deriv]);
      spec[static_cast<std::size_t>(in_map_.pos[i])] = in_map_.conj[i] ? std::conj(a) : a;
      if (in_map_.partner[i] >= 0) spec[static_cast<std::size_t>(in_map_.partner[i])] = std::conj(a);
    }
    fftw_execute_dft_c2r(grid_.backward, reinterpret_cast<fftw_complex*>(spec.data()), out);
  }

  // Writes component r of `out` (cutoff out_cutoff) from physical values;
  // returns the zero-mode coefficient.
  double to_spectral(const double* phys, SpectralField& out, std::size_t r) {
    auto& spec = workspace().spec;
    spec.resize(grid_.complex_size);
    fftw_execute_dft_r2c(grid_.forward, const_cast<double*>(phys),
                         reinterpret_cast<fftw_complex*>(spec.data()));
    const auto& layout = out.layout();
    for (std::size_t i = 0; i < layout.size(); ++i) {
      const Complex y = spec[static_cast<std::size_t>(out_map_.pos[i])];
      out.mode_coefficients(i)[r] = norm_out_ * (out_map_.conj[i] ? std::conj(y) : y);
    }
    return norm_out_ * spec[0].real();
  }

  // All out-layout coefficients of one physical array, mode order.
  void to_coefficients(const double* phys, std::vector<Complex>& coeffs) {
    auto& spec = workspace().spec;
    spec.resize(grid_.complex_size);
    fftw_execute_dft_r2c(grid_.forward, const_cast<double*>(phys),
                         reinterpret_cast<fftw_complex*>(spec.data()));
    coeffs.resize(out_map_.pos.size());
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const Complex y = spec[static_cast<std::size_t>(out_map_.pos[i])];
      coeffs[i] = norm_out_ * (out_map_.conj[i] ? std::conj(y) : y);
    }
  }

  int out_cutoff() const { return out_cutoff_; }

 private:
  int dim_;
  int n_;
  const Grid& grid_;
  const ModeMap& in_map_;
  const ModeMap& out_map_;
  int out_cutoff_;
  double norm_in_ = 1.0;
  double norm_out_ = 1.0;
};

void check_out_cutoff(int in_cutoff, int out_cutoff) {
  if (out_cutoff < 1 || out_cutoff > 2 * in_cutoff) {
    throw InputError("output cutoff must lie in [1, 2M]");
  }
}

}  // namespace

int fft_grid_size(int in_cutoff, int out_cutoff) {
  // aliases of modes up to 2M must land beyond out_cutoff
  int n = 2 * in_cutoff + out_cutoff + 1;
  while (!smooth235(n)) ++n;
  return n;
}

SpectralField advect_pseudo(const SpectralField& v, const SpectralField& w, int out_cutoff) {
  if (v.dim() != w.dim() || v.cutoff() != w.cutoff() || v.dim() == 0) {
    throw InputError("bilinear map: operands differ in dimension or cutoff");
  }
  check_out_cutoff(v.cutoff(), out_cutoff);
  const auto d = static_cast<std::size_t>(v.dim());
  Transformer tr(v.dim(), v.cutoff(), out_cutoff);
  const std::size_t np = tr.real_size();
  std::vector<double> vel(d * np), grad(np), prod(d * np, 0.0);
  for (std::size_t s = 0; s < d; ++s) tr.to_physical(v, s, -1, vel.data() + s * np);
  for (std::size_t r = 0; r < d; ++r) {
    for (std::size_t s = 0; s < d; ++s) {
      tr.to_physical(w, r, static_cast<int>(s), grad.data());
      const double* vs = vel.data() + s * np;
      double* pr = prod.data() + r * np;
      for (std::size_t j = 0; j < np; ++j) pr[j] += vs[j] * grad[j];
    }
  }
  SpectralField out(v.dim(), out_cutoff);
  std::vector<double> mean(d);
  bool any = false;
  for (std::size_t r = 0; r < d; ++r) {
    mean[r] = tr.to_spectral(prod.data() + r * np, out, r);
    any = any || std::abs(mean[r]) > 0.0;
  }
  if (any) out.set_mean_mode(std::move(mean));
  out.mark_solenoidal(false);
  return out;
}

FieldPair P_mhd_pseudo(const FieldPair& V, const FieldPair& W, int out_cutoff) {
  const int dim = V.dim();
  const int cutoff = V.cutoff();
  if (W.dim() != dim || W.cutoff() != cutoff || V.magnetic.cutoff() != cutoff ||
      W.magnetic.cutoff() != cutoff || dim == 0) {
    throw InputError("bilinear map: operands differ in dimension or cutoff");
  }
  check_out_cutoff(cutoff, out_cutoff);
  const auto d = static_cast<std::size_t>(dim);
  Transformer tr(dim, cutoff, out_cutoff);
  const std::size_t np = tr.real_size();

  std::vector<double> v(d * np), c(d * np), grad(np);
  std::vector<double> first(d * np, 0.0), second(d * np, 0.0);
  for (std::size_t s = 0; s < d; ++s) {
    tr.to_physical(V.velocity, s, -1, v.data() + s * np);
    tr.to_physical(V.magnetic, s, -1, c.data() + s * np);
  }
  for (std::size_t r = 0; r < d; ++r) {
    double* a = first.data() + r * np;
    double* b = second.data() + r * np;
    for (std::size_t s = 0; s < d; ++s) {
      const double* vs = v.data() + s * np;
      const double* cs = c.data() + s * np;
      // d_s w_r feeds (v.grad) w into the first slot and -(c.grad) w into the second
      tr.to_physical(W.velocity, r, static_cast<int>(s), grad.data());
      for (std::size_t j = 0; j < np; ++j) {
        a[j] += vs[j] * grad[j];
        b[j] -= cs[j] * grad[j];
      }
      tr.to_physical(W.magnetic, r, static_cast<int>(s), grad.data());
      for (std::size_t j = 0; j < np; ++j) {
        a[j] -= cs[j] * grad[j];
        b[j] += vs[j] * grad[j];
      }
    }
  }
  SpectralField u(dim, out_cutoff);
  SpectralField m(dim, out_cutoff);
  for (std::size_t r = 0; r < d; ++r) {
    tr.to_spectral(first.data() + r * np, u, r);
    tr.to_spectral(second.data() + r * np, m, r);
  }
  u = leray_project(u);
  m = leray_project(m);
  u *= -1.0;
  m *= -1.0;
  return {std::move(u), std::move(m)};
}

FieldPair P_mhd_pseudo_self(const FieldPair& U, int out_cutoff) {
  const int dim = U.dim();
  const int cutoff = U.cutoff();
  if (U.magnetic.cutoff() != cutoff || U.magnetic.dim() != dim || dim == 0) {
    throw InputError("bilinear map: operands differ in dimension or cutoff");
  }
  check_out_cutoff(cutoff, out_cutoff);
  const auto d = static_cast<std::size_t>(dim);
  Transformer tr(dim, cutoff, out_cutoff);
  const std::size_t np = tr.real_size();

  std::vector<double> v(d * np), c(d * np), prod(np);
  for (std::size_t s = 0; s < d; ++s) {
    tr.to_physical(U.velocity, s, -1, v.data() + s * np);
    tr.to_physical(U.magnetic, s, -1, c.data() + s * np);
  }
  // S = v v^T - c c^T (symmetric) feeds the first slot,
  // A = v c^T - c v^T (antisymmetric) the second: slot_r = sum_s d_s X_sr.
  SpectralField u(dim, out_cutoff);
  SpectralField m(dim, out_cutoff);
  const auto& layout = u.layout();
  std::vector<Complex> coeffs;
  auto accumulate = [&](SpectralField& out, std::size_t s, std::size_t r, double sign) {
    for (std::size_t i = 0; i < layout.size(); ++i) {
      out.mode_coefficients(i)[r] += sign * Complex(0.0, layout.mode(i)[static_cast<int>(s)]) * coeffs[i];
    }
  };
  for (std::size_t s = 0; s < d; ++s) {
    const double* vs = v.data() + s * np;
    const double* cs = c.data() + s * np;
    for (std::size_t r = s; r < d; ++r) {
      const double* vr = v.data() + r * np;
      const double* cr = c.data() + r * np;
      for (std::size_t j = 0; j < np; ++j) prod[j] = vs[j] * vr[j] - cs[j] * cr[j];
      tr.to_coefficients(prod.data(), coeffs);
      accumulate(u, s, r, 1.0);
      if (r != s) accumulate(u, r, s, 1.0);
      if (r == s) continue;
      for (std::size_t j = 0; j < np; ++j) prod[j] = vs[j] * cr[j] - cs[j] * vr[j];
      tr.to_coefficients(prod.data(), coeffs);
      accumulate(m, s, r, 1.0);
      accumulate(m, r, s, -1.0);
    }
  }
  u = leray_project(u);
  m = leray_project(m);
  u *= -1.0;
  m *= -1.0;
  return {std::move(u), std::move(m)};
}

}  // namespace mhd
