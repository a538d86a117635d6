#pragma once

#include "alfven/field.hpp"

namespace alfven {

// FFTW-backed real<->complex transforms for one grid. Plans are created
// with FFTW_ESTIMATE so that plan selection, and hence round-off, is
// reproducible run to run. Instances are not thread safe; the per-thread
// plan cache in fft.cpp hands each thread its own.
class Fft {
 public:
  explicit Fft(const Grid3& g);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  // Forward transform, unnormalized.
  void forward(const ScalarField& in, SpectralScalar& out);
  // Inverse transform, divides by n1*n2*n3.
  void inverse(const SpectralScalar& in, ScalarField& out);

  const Grid3& grid() const { return grid_; }

 private:
  Grid3 grid_;
  void* plan_fwd_;
  void* plan_inv_;
  double* real_buf_;
  void* cplx_buf_;
};

// Per-thread plan cache.
Fft& fft_for(const Grid3& g);

SpectralScalar to_spectral(const ScalarField& f);
ScalarField to_physical(const SpectralScalar& f);
SpectralVector3 to_spectral(const VectorField3& f);
VectorField3 to_physical(const SpectralVector3& f);

}  // namespace alfven
