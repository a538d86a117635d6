#pragma once

#include "alfven/fft.hpp"

namespace alfven {

// Iterate the half-complex spectrum. f(idx, k1, k2, k3, m1, m2, m3) with
// k the physical wavenumbers and m the signed mode numbers.
template <class F>
inline void for_each_mode(const Grid3& g, F&& f) {
  std::size_t p = 0;
  for (int i3 = 0; i3 < g.n(2); ++i3) {
    const int m3 = g.fold(2, i3);
    const double k3 = g.wavenumber(2, m3);
    for (int i2 = 0; i2 < g.n(1); ++i2) {
      const int m2 = g.fold(1, i2);
      const double k2 = g.wavenumber(1, m2);
      for (int m1 = 0; m1 < g.nk1(); ++m1, ++p) {
        const double k1 = g.wavenumber(0, m1);
        f(p, k1, k2, k3, m1, m2, m3);
      }
    }
  }
}

// Wavenumber used in differential multipliers. The Nyquist mode has no
// well-defined odd derivative on a real grid, so it is zeroed; dealiased
// fields never carry it anyway. Used consistently by every operator so
// that identities like div(grad f) = laplacian(f) hold exactly.
inline double deriv_k(const Grid3& g, int axis, int mode) {
  if (2 * mode == g.n(axis)) return 0.0;
  return g.wavenumber(axis, mode);
}

SpectralVector3 gradient(const SpectralScalar& f);
SpectralScalar divergence(const SpectralVector3& v);
SpectralScalar laplacian(const SpectralScalar& f);
SpectralVector3 laplacian(const SpectralVector3& f);
SpectralVector3 curl(const SpectralVector3& v);

// Orthogonal projection onto divergence-free fields; k=0 mode untouched.
void leray_project(SpectralVector3& v);

// 2/3-rule mask.
void dealias_inplace(SpectralScalar& f);
void dealias_inplace(SpectralVector3& f);

void zero_mean(SpectralScalar& f);
double mean_value(const SpectralScalar& f);

// L2 norms with the box measure: integral of |f|^2 over the box.
double l2_norm_sq(const ScalarField& f);
double l2_norm_sq(const VectorField3& f);
double l2_norm_sq(const SpectralScalar& f);
double l2_norm_sq(const SpectralVector3& f);

// Unweighted Sobolev seminorm: integral of |grad^k f|^2 (full derivative
// tensor, i.e. |k|^(2k) multiplier).
double sobolev_seminorm_sq(const SpectralVector3& f, int k);

double max_abs(const ScalarField& f);
// max over nodes of the euclidean norm of the vector sample
double max_norm(const VectorField3& f);
double max_norm_spectral(const SpectralVector3& f);

// Relative divergence: max|div v| / max|v| (0 if v == 0).
double divergence_ratio(const SpectralVector3& v);

// Pointwise product computed in physical space; dealiased by default.
SpectralScalar product(const SpectralScalar& a, const SpectralScalar& b,
                       bool dealias = true);

// Advective derivative (u . grad) f.
SpectralScalar advect(const SpectralVector3& u, const SpectralScalar& f,
                      bool dealias = true);
SpectralVector3 advect(const SpectralVector3& u, const SpectralVector3& f,
                       bool dealias = true);

// Wedge nonlinearity: (a, b) -> eps_{ijk} d_i a^l d_l b^j e_k. This is the
// source of the vorticity transport equations.
SpectralVector3 wedge(const SpectralVector3& a, const SpectralVector3& b,
                      bool dealias = true);

// Solve -lap p = d_i (zp^j d_j zm^i) with zero-mean gauge.
SpectralScalar solve_pressure(const SpectralVector3& zp,
                              const SpectralVector3& zm, bool dealias = true);

// Derivative field d^alpha f.
SpectralScalar multi_derivative(const SpectralScalar& f,
                                std::array<int, 3> alpha);

// All multi-indices with |alpha| = k (3 axes), lexicographic, no weights.
std::vector<std::array<int, 3>> multi_indices(int k);

}  // namespace alfven
