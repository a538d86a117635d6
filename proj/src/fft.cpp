#include "alfven/fft.hpp"

#include <fftw3.h>

#include <cstring>
#include <map>
#include <memory>
#include <mutex>

namespace alfven {

namespace {
// FFTW plan creation/destruction is not thread safe.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft::Fft(const Grid3& g) : grid_(g) {
  const int n1 = g.n(0), n2 = g.n(1), n3 = g.n(2);
  real_buf_ = fftw_alloc_real(g.size());
  cplx_buf_ = fftw_alloc_complex(g.spectral_size());
  std::lock_guard<std::mutex> lock(planner_mutex());
  // Memory is x1-fastest, so from FFTW's row-major point of view the
  // dimensions are (n3, n2, n1) and the halved axis is x1.
  plan_fwd_ = fftw_plan_dft_r2c_3d(n3, n2, n1, real_buf_,
                                   static_cast<fftw_complex*>(cplx_buf_),
                                   FFTW_ESTIMATE);
  plan_inv_ = fftw_plan_dft_c2r_3d(n3, n2, n1,
                                   static_cast<fftw_complex*>(cplx_buf_),
                                   real_buf_, FFTW_ESTIMATE);
}

Fft::~Fft() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
  fftw_free(real_buf_);
  fftw_free(cplx_buf_);
}

void Fft::forward(const ScalarField& in, SpectralScalar& out) {
  if (in.grid() != grid_ || out.grid() != grid_)
    throw Error("fft: field grid does not match plan grid");
  std::memcpy(real_buf_, in.data(), sizeof(double) * grid_.size());
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
  std::memcpy(out.data(), cplx_buf_,
              sizeof(fftw_complex) * grid_.spectral_size());
}

void Fft::inverse(const SpectralScalar& in, ScalarField& out) {
  if (in.grid() != grid_ || out.grid() != grid_)
    throw Error("fft: field grid does not match plan grid");
  // c2r destroys its input; work on the scratch copy.
  std::memcpy(cplx_buf_, in.data(),
              sizeof(fftw_complex) * grid_.spectral_size());
  fftw_execute(static_cast<fftw_plan>(plan_inv_));
  const double scale = 1.0 / static_cast<double>(grid_.size());
  const std::size_t n = grid_.size();
  double* o = out.data();
  for (std::size_t i = 0; i < n; ++i) o[i] = real_buf_[i] * scale;
}

Fft& fft_for(const Grid3& g) {
  thread_local std::map<std::array<int, 3>, std::unique_ptr<Fft>> cache;
  auto key = g.dims();
  auto it = cache.find(key);
  if (it != cache.end() && it->second->grid() == g) return *it->second;
  auto [pos, inserted] = cache.insert_or_assign(key, std::make_unique<Fft>(g));
  return *pos->second;
}

SpectralScalar to_spectral(const ScalarField& f) {
  SpectralScalar out(f.grid());
  fft_for(f.grid()).forward(f, out);
  return out;
}

ScalarField to_physical(const SpectralScalar& f) {
  ScalarField out(f.grid());
  fft_for(f.grid()).inverse(f, out);
  return out;
}

SpectralVector3 to_spectral(const VectorField3& f) {
  SpectralVector3 out(f.grid());
  for (int i = 0; i < 3; ++i) fft_for(f.grid()).forward(f[i], out[i]);
  return out;
}

VectorField3 to_physical(const SpectralVector3& f) {
  VectorField3 out(f.grid());
  for (int i = 0; i < 3; ++i) fft_for(f.grid()).inverse(f[i], out[i]);
  return out;
}

}  // namespace alfven
