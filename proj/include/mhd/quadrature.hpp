#pragma once

// Quadrature and interpolation on (possibly nonuniform) time grids.

#include <functional>
#include <span>
#include <vector>

namespace mhd {

/// Cumulative integral F(t_i) = int_{t_0}^{t_i} f. Composite Simpson on
/// interval pairs; odd nodes (and a trailing unpaired interval) use the
/// integral of the local quadratic. Exact for quadratics.
std::vector<double> cumulative_simpson(std::span<const double> t, std::span<const double> f);

/// int_{t_0}^{t_end} f, same rule.
double simpson(std::span<const double> t, std::span<const double> f);

/// Cubic Lagrange interpolation through the four nodes around x (fewer
/// near the ends when the grid is short). x is clamped to the grid.
double interpolate_cubic(std::span<const double> t, std::span<const double> f, double x);

/// Index i with t[i] <= x < t[i+1] (clamped to [0, n-2]).
std::size_t bracket(std::span<const double> t, double x);

/// 5-point Gauss-Legendre on [a, b].
double gauss_legendre(const std::function<double(double)>& f, double a, double b);

/// Checks that t is strictly increasing, finite, and starts at 0.
void require_time_grid(std::span<const double> t);

}  // namespace mhd
