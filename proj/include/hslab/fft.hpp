#pragma once

#include <Eigen/Dense>
#include <complex>

#include "hslab/grid.hpp"

namespace hslab {

using Cplx = std::complex<double>;
using ArrayXc = Eigen::ArrayX<Cplx>;

/// In-place complex FFT over the full doubled box (d-1 horizontal axes
/// of length nh, one vertical axis of length 2*nz, vertical fastest).
/// `sign` is FFTW convention: -1 forward, +1 inverse.  The inverse is
/// normalized so that forward followed by inverse is the identity.
void fft_doubled(const Grid& g, ArrayXc& a, int sign);

/// Complex FFT over the horizontal axes only, vertical planes
/// untouched; data laid out ih * nplanes + iz with nplanes vertical
/// entries per column.  Normalized like fft_doubled.
void fft_horizontal(const Grid& g, ArrayXc& a, int nplanes, int sign);

}  // namespace hslab
