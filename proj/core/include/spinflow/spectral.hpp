#pragma once

#include "spinflow/torus_grid.hpp"

namespace spinflow {

// FFT-based derivatives on torus grids.  Plans are cached per (dim, n,
// direction) and created with FFTW_ESTIMATE, so results are deterministic.
namespace spectral {

// In-place unnormalized forward / normalized (1/N) inverse transform.
void fft(const Torus& g, cplx* data, bool forward);

// Signed wavenumber xi = 2 pi (k_signed + delta) / L for mode index k on `axis`.
// The Nyquist mode (even n, k = n/2) is mapped to zero; fields are expected to
// keep their content strictly below it.
double wavenumber(const Torus& g, int axis, int k, double delta);

// xi^2 for second derivatives.  Unlike the first derivative, the Nyquist mode
// keeps its full magnitude (its second derivative is well-defined), so the
// alternating grid mode is not a spurious zero-energy direction of -Delta.
double wavenumber_sq(const Torus& g, int axis, int k, double delta);

// True if any index of the mode sits on the Nyquist row.
bool is_nyquist_mode(const Torus& g, const std::array<int, 4>& k);

// d/dx_axis with quasi-periodic twist delta (momenta shifted by delta).
Field derivative(const Field& f, int axis, double delta = 0.0);

// All first derivatives at once (one forward transform).
std::vector<Field> gradient(const Field& f, const std::array<double, 4>& twist = {0, 0, 0, 0});

// Flat Laplacian sum_j d^2/dx_j^2 with twist.
Field laplacian(const Field& f, const std::array<double, 4>& twist = {0, 0, 0, 0});

// Component-wise versions for spinor fields; the field's own twist is used.
SpinorField derivative(const SpinorField& s, int axis);
SpinorField laplacian(const SpinorField& s);

}  // namespace spectral

// Pointwise helpers.
Field real_part(const Field& f);
double max_abs(const Field& f);
double max_abs(const SpinorField& s);

}  // namespace spinflow
