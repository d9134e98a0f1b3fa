#include "mhd/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "mhd/errors.hpp"

namespace mhd {

namespace {

// int_a^b of the polynomial through (x[j], y[j]), j < count <= 4; two-point
// Gauss is exact up to cubics and avoids cancellation in global coordinates.
double lagrange_integral(const double* x, const double* y, int count, double a, double b) {
  auto eval = [&](double s) {
    double v = 0.0;
    for (int j = 0; j < count; ++j) {
      double w = 1.0;
      for (int m = 0; m < count; ++m) {
        if (m != j) w *= (s - x[m]) / (x[j] - x[m]);
      }
      v += w * y[j];
    }
    return v;
  };
  const double mid = 0.5 * (a + b);
  const double off = 0.5 * (b - a) / std::sqrt(3.0);
  return 0.5 * (b - a) * (eval(mid - off) + eval(mid + off));
}

double quadratic_integral(const double* x, const double* y, double a, double b) {
  return lagrange_integral(x, y, 3, a, b);
}

double cubic_integral(const double* x, const double* y, double a, double b) {
  return lagrange_integral(x, y, 4, a, b);
}

}  // namespace

void require_time_grid(std::span<const double> t) {
  if (t.empty()) throw InputError("empty time grid");
  if (t[0] != 0.0) throw InputError("time grid must start at 0");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!std::isfinite(t[i])) throw InputError("nonfinite time node");
    if (i > 0 && !(t[i] > t[i - 1])) throw InputError("time grid must be strictly increasing");
  }
}

std::vector<double> cumulative_simpson(std::span<const double> t, std::span<const double> f) {
  if (t.size() != f.size()) throw InputError("quadrature: grid and values differ in length");
  const std::size_t n = t.size();
  std::vector<double> out(n, 0.0);
  if (n < 2) return out;
  if (n == 2) {
    out[1] = 0.5 * (t[1] - t[0]) * (f[0] + f[1]);
    return out;
  }
  for (std::size_t i = 0; i + 2 < n; i += 2) {
    const double* x = t.data() + i;
    const double* y = f.data() + i;
    if (n >= 4) {
      const std::size_t lo = std::min(i, n - 4);
      out[i + 1] = out[i] + cubic_integral(t.data() + lo, f.data() + lo, x[0], x[1]);
    } else {
      out[i + 1] = out[i] + quadratic_integral(x, y, x[0], x[1]);
    }
    out[i + 2] = out[i] + quadratic_integral(x, y, x[0], x[2]);
  }
  if (n % 2 == 0) {
    const std::size_t i = n - 4;
    out[n - 1] = out[n - 2] + cubic_integral(t.data() + i, f.data() + i, t[n - 2], t[n - 1]);
  }
  return out;
}

double simpson(std::span<const double> t, std::span<const double> f) {
  const auto c = cumulative_simpson(t, f);
  return c.empty() ? 0.0 : c.back();
}

std::size_t bracket(std::span<const double> t, double x) {
  if (t.size() < 2) return 0;
  const auto it = std::upper_bound(t.begin(), t.end(), x);
  std::size_t i = it == t.begin() ? 0 : static_cast<std::size_t>(it - t.begin()) - 1;
  return std::min(i, t.size() - 2);
}

double interpolate_cubic(std::span<const double> t, std::span<const double> f, double x) {
  const std::size_t n = t.size();
  if (n == 0) throw InputError("interpolation on empty grid");
  if (n == 1) return f[0];
  x = std::clamp(x, t.front(), t.back());
  const std::size_t i = bracket(t, x);
  const std::size_t width = std::min<std::size_t>(4, n);
  std::size_t lo = i > 0 ? i - 1 : 0;
  if (lo + width > n) lo = n - width;
  double value = 0.0;
  for (std::size_t j = lo; j < lo + width; ++j) {
    double w = 1.0;
    for (std::size_t m = lo; m < lo + width; ++m) {
      if (m != j) w *= (x - t[m]) / (t[j] - t[m]);
    }
    value += w * f[j];
  }
  return value;
}

double gauss_legendre(const std::function<double(double)>& f, double a, double b) {
  static constexpr std::array<double, 5> nodes = {0.0, -0.5384693101056831, 0.5384693101056831,
                                                  -0.9061798459386640, 0.9061798459386640};
  static constexpr std::array<double, 5> weights = {0.5688888888888889, 0.4786286704993665,
                                                    0.4786286704993665, 0.2369268850561891,
                                                    0.2369268850561891};
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(mid + half * nodes[i]);
  return half * sum;
}

}  // namespace mhd
