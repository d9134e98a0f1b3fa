#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "mhd/errors.hpp"
#include "mhd/quadrature.hpp"

using namespace mhd;

TEST(Quadrature, SimpsonExactForCubics) {
  for (std::size_t n : {3u, 4u, 7u, 10u}) {
    std::vector<double> t(n), f(n);
    for (std::size_t i = 0; i < n; ++i) {
      t[i] = 0.3 * static_cast<double>(i) + 0.01 * static_cast<double>(i * i);  // nonuniform
      f[i] = 1.0 - 2.0 * t[i] + 3.0 * t[i] * t[i];
    }
    const auto F = cumulative_simpson(t, f);
    for (std::size_t i = 0; i < n; ++i) {
      const double exact = t[i] - t[i] * t[i] + t[i] * t[i] * t[i];
      EXPECT_NEAR(F[i], exact, 1e-13 * (1.0 + std::abs(exact)));
    }
    EXPECT_DOUBLE_EQ(simpson(t, f), F.back());
  }
}

TEST(Quadrature, FourthOrderOnExponential) {
  auto err = [](int n) {
    std::vector<double> t(static_cast<std::size_t>(n) + 1), f(t.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
      t[i] = static_cast<double>(i) / n;
      f[i] = std::exp(t[i]);
    }
    return std::abs(simpson(t, f) - (std::exp(1.0) - 1.0));
  };
  const double ratio = err(16) / err(32);
  EXPECT_GT(ratio, 14.0);
  EXPECT_LT(ratio, 18.0);
}

TEST(Quadrature, InterpolationAndBracket) {
  std::vector<double> t = {0.0, 0.5, 1.0, 1.5, 2.0}, f(5);
  for (std::size_t i = 0; i < 5; ++i) f[i] = t[i] * t[i] * t[i] - t[i];
  for (double x : {0.1, 0.75, 1.2, 1.99}) EXPECT_NEAR(interpolate_cubic(t, f, x), x * x * x - x, 1e-13);
  EXPECT_DOUBLE_EQ(interpolate_cubic(t, f, 5.0), f.back());
  EXPECT_EQ(bracket(t, 0.7), 1u);
  EXPECT_EQ(bracket(t, 2.0), 3u);
  EXPECT_EQ(bracket(t, -1.0), 0u);
}

TEST(Quadrature, GaussLegendre) {
  EXPECT_NEAR(gauss_legendre([](double x) { return std::pow(x, 9); }, 0.0, 2.0), 102.4, 1e-12);
  EXPECT_NEAR(gauss_legendre([](double x) { return std::cos(x); }, 0.0, 0.1), std::sin(0.1), 1e-16);
}

TEST(Quadrature, GridValidation) {
  EXPECT_NO_THROW(require_time_grid(std::vector<double>{0.0, 0.1, 0.3}));
  EXPECT_THROW(require_time_grid(std::vector<double>{0.1, 0.2}), InputError);
  EXPECT_THROW(require_time_grid(std::vector<double>{0.0, 0.2, 0.2}), InputError);
  EXPECT_THROW(require_time_grid(std::vector<double>{0.0, NAN}), InputError);
}
