// Discrete transforms carrying the continuum Fourier normalization:
// forward integrates f e^{-i xi t} dt, inverse carries the (2pi)^{-n} factor.
#pragma once

#include "grushin/grid.hpp"

#include <functional>

namespace grushin::calculus {

/// F2 f(x, eta) = int f(x,y) e^{-i eta y} dy on the grid. The result stores
/// DFT bins; read frequencies via spec.eta(bin).
GridFunction fourier_y_forward(const GridFunction& f);

/// Inverse of fourier_y_forward (exact roundtrip up to FFT rounding).
GridFunction fourier_y_inverse(const GridFunction& fhat);

/// Applies a radial Fourier multiplier m(|xi|^2) in the x-variable to one
/// y-slice (values of length nx_total, flat x order). Used for the eta = 0
/// plane, where the calculus degenerates to functions of -Laplace_x.
void x_plane_multiplier(const GridSpec& spec, std::span<cplx> slice,
                        const std::function<cplx(double)>& m_of_lambda);

/// In-place unnormalized 1-D DFTs (FFTW convention, e^{-2 pi i jk/n} forward).
void fft_1d(std::vector<cplx>& a, bool forward);

}  // namespace grushin::calculus
