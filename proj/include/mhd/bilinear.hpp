#pragma once

// Quadratic terms of the projected equations:
//   advect(v, w) = (v . grad) w
//   P(v, w)      = -L((v . grad) w)          (L: Leray projection)
//   P_mhd((v,c), (w,g)) = (P(v,w) - P(c,g), P(v,g) - P(c,w))
//
// The direct routines convolve coefficients exactly and return cutoff 2M,
// so nothing is aliased or dropped. The pseudo-spectral routines evaluate
// products on an FFT grid large enough to be exact for the requested
// output cutoff.

#include <string>
#include <vector>

#include "mhd/spectral.hpp"

namespace mhd {

/// Exact product (v . grad) w, cutoff 2M. The zero mode is kept (it is
/// nonzero only when v is not divergence-free).
SpectralField advect(const SpectralField& v, const SpectralField& w);

/// -leray_project(advect(v, w)), cutoff 2M. If v is not divergence-free the
/// zero mode is discarded and a message appended to `warnings`.
SpectralField P(const SpectralField& v, const SpectralField& w,
                std::vector<std::string>* warnings = nullptr);

/// MHD bilinear map, cutoff 2M.
FieldPair P_mhd(const FieldPair& V, const FieldPair& W);

/// Smallest 2,3,5-smooth grid size that represents products of cutoff
/// `in_cutoff` fields exactly on modes up to `out_cutoff`.
int fft_grid_size(int in_cutoff, int out_cutoff);

/// Pseudo-spectral (v . grad) w truncated to `out_cutoff` (<= 2M).
SpectralField advect_pseudo(const SpectralField& v, const SpectralField& w, int out_cutoff);

/// Pseudo-spectral P_mhd truncated to `out_cutoff` (<= 2M).
FieldPair P_mhd_pseudo(const FieldPair& V, const FieldPair& W, int out_cutoff);

/// P_mhd(U, U) truncated to `out_cutoff`, via the divergence form
/// (v . grad) w = div(v w^T). Needs half the transforms of P_mhd_pseudo;
/// U must be divergence-free.
FieldPair P_mhd_pseudo_self(const FieldPair& U, int out_cutoff);

}  // namespace mhd
