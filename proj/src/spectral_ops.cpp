#include "alfven/spectral_ops.hpp"

#include <algorithm>
#include <cmath>

namespace alfven {

namespace {
constexpr std::complex<double> I{0.0, 1.0};

// Parseval weight: conjugate-symmetric partners of interior k1 modes are
// not stored, so they count twice.
inline double hermitian_weight(const Grid3& g, int m1) {
  return (m1 == 0 || 2 * m1 == g.n(0)) ? 1.0 : 2.0;
}
}  // namespace

SpectralVector3 gradient(const SpectralScalar& f) {
  const Grid3& g = f.grid();
  SpectralVector3 out(g);
  for_each_mode(g, [&](std::size_t p, double, double, double, int m1, int m2,
                       int m3) {
    const std::complex<double> v = f[p];
    out[0][p] = I * deriv_k(g, 0, m1) * v;
    out[1][p] = I * deriv_k(g, 1, m2) * v;
    out[2][p] = I * deriv_k(g, 2, m3) * v;
  });
  return out;
}

SpectralScalar divergence(const SpectralVector3& v) {
  const Grid3& g = v.grid();
  SpectralScalar out(g);
  for_each_mode(g, [&](std::size_t p, double, double, double, int m1, int m2,
                       int m3) {
    out[p] = I * (deriv_k(g, 0, m1) * v[0][p] + deriv_k(g, 1, m2) * v[1][p] +
                  deriv_k(g, 2, m3) * v[2][p]);
  });
  return out;
}

SpectralScalar laplacian(const SpectralScalar& f) {
  const Grid3& g = f.grid();
  SpectralScalar out(g);
  for_each_mode(g, [&](std::size_t p, double, double, double, int m1, int m2,
                       int m3) {
    const double kx = deriv_k(g, 0, m1), ky = deriv_k(g, 1, m2),
                 kz = deriv_k(g, 2, m3);
    out[p] = -(kx * kx + ky * ky + kz * kz) * f[p];
  });
  return out;
}

SpectralVector3 laplacian(const SpectralVector3& f) {
  SpectralVector3 out(f.grid());
  for (int i = 0; i < 3; ++i) out[i] = laplacian(f[i]);
  return out;
}

SpectralVector3 curl(const SpectralVector3& v) {
  const Grid3& g = v.grid();
  SpectralVector3 out(g);
  for_each_mode(g, [&](std::size_t p, double, double, double, int m1, int m2,
                       int m3) {
    const double kx = deriv_k(g, 0, m1), ky = deriv_k(g, 1, m2),
                 kz = deriv_k(g, 2, m3);
    out[0][p] = I * (ky * v[2][p] - kz * v[1][p]);
    out[1][p] = I * (kz * v[0][p] - kx * v[2][p]);
    out[2][p] = I * (kx * v[1][p] - ky * v[0][p]);
  });
  return out;
}

void leray_project(SpectralVector3& v) {
  const Grid3& g = v.grid();
  for_each_mode(g, [&](std::size_t p, double, double, double, int m1, int m2,
                       int m3) {
    const double kx = deriv_k(g, 0, m1), ky = deriv_k(g, 1, m2),
                 kz = deriv_k(g, 2, m3);
    const double k2 = kx * kx + ky * ky + kz * kz;
    if (k2 == 0.0) return;
    const std::complex<double> kdotv =
        kx * v[0][p] + ky * v[1][p] + kz * v[2][p];
    v[0][p] -= kx * kdotv / k2;
    v[1][p] -= ky * kdotv / k2;
    v[2][p] -= kz * kdotv / k2;
  });
}

void dealias_inplace(SpectralScalar& f) {
  const Grid3& g = f.grid();
  const int c1 = g.cutoff(0), c2 = g.cutoff(1), c3 = g.cutoff(2);
  for_each_mode(g, [&](std::size_t p, double, double, double, int m1, int m2,
                       int m3) {
    if (m1 > c1 || std::abs(m2) > c2 || std::abs(m3) > c3) f[p] = 0.0;
  });
}

void dealias_inplace(SpectralVector3& f) {
  for (int i = 0; i < 3; ++i) dealias_inplace(f[i]);
}

void zero_mean(SpectralScalar& f) { f[0] = 0.0; }

double mean_value(const SpectralScalar& f) {
  return f[0].real() / static_cast<double>(f.grid().size());
}

double l2_norm_sq(const ScalarField& f) {
  const Grid3& g = f.grid();
  double s = 0.0;
  const double* v = f.data();
  for (std::size_t i = 0; i < g.size(); ++i) s += v[i] * v[i];
  return s * g.volume() / static_cast<double>(g.size());
}

double l2_norm_sq(const VectorField3& f) {
  return l2_norm_sq(f[0]) + l2_norm_sq(f[1]) + l2_norm_sq(f[2]);
}

double l2_norm_sq(const SpectralScalar& f) {
  const Grid3& g = f.grid();
  double s = 0.0;
  for_each_mode(g, [&](std::size_t p, double, double, double, int m1, int,
                       int) { s += hermitian_weight(g, m1) * std::norm(f[p]); });
  const double n = static_cast<double>(g.size());
  return s * g.volume() / (n * n);
}

double l2_norm_sq(const SpectralVector3& f) {
  return l2_norm_sq(f[0]) + l2_norm_sq(f[1]) + l2_norm_sq(f[2]);
}

double sobolev_seminorm_sq(const SpectralVector3& f, int k) {
  const Grid3& g = f.grid();
  double s = 0.0;
  for_each_mode(g, [&](std::size_t p, double, double, double, int m1, int m2,
                       int m3) {
    const double kx = deriv_k(g, 0, m1), ky = deriv_k(g, 1, m2),
                 kz = deriv_k(g, 2, m3);
    const double k2 = kx * kx + ky * ky + kz * kz;
    const double w = hermitian_weight(g, m1) * std::pow(k2, k);
    s += w * (std::norm(f[0][p]) + std::norm(f[1][p]) + std::norm(f[2][p]));
  });
  const double n = static_cast<double>(g.size());
  return s * g.volume() / (n * n);
}

double max_abs(const ScalarField& f) {
  double m = 0.0;
  const double* v = f.data();
  for (std::size_t i = 0; i < f.size(); ++i) m = std::max(m, std::abs(v[i]));
  return m;
}

double max_norm(const VectorField3& f) {
  double m = 0.0;
  const double *a = f[0].data(), *b = f[1].data(), *c = f[2].data();
  for (std::size_t i = 0; i < f[0].size(); ++i) {
    const double n2 = a[i] * a[i] + b[i] * b[i] + c[i] * c[i];
    m = std::max(m, n2);
  }
  return std::sqrt(m);
}

double max_norm_spectral(const SpectralVector3& f) {
  return max_norm(to_physical(f));
}

double divergence_ratio(const SpectralVector3& v) {
  const double mv = max_norm(to_physical(v));
  if (mv == 0.0) return 0.0;
  const double md = max_abs(to_physical(divergence(v)));
  return md / mv;
}

SpectralScalar product(const SpectralScalar& a, const SpectralScalar& b,
                       bool dealias) {
  if (a.grid() != b.grid()) throw Error("product: grids differ");
  ScalarField pa = to_physical(a), pb = to_physical(b);
  for (std::size_t i = 0; i < pa.size(); ++i) pa[i] *= pb[i];
  SpectralScalar out = to_spectral(pa);
  if (dealias) dealias_inplace(out);
  return out;
}

namespace {
// Physical gradient components d_j f for one spectral scalar.
std::array<ScalarField, 3> physical_gradient(const SpectralScalar& f) {
  SpectralVector3 gf = gradient(f);
  return {to_physical(gf[0]), to_physical(gf[1]), to_physical(gf[2])};
}
}  // namespace

SpectralScalar advect(const SpectralVector3& u, const SpectralScalar& f,
                      bool dealias) {
  if (u.grid() != f.grid()) throw Error("advect: grids differ");
  const Grid3& g = f.grid();
  VectorField3 up = to_physical(u);
  auto df = physical_gradient(f);
  ScalarField acc(g);
  for (std::size_t i = 0; i < acc.size(); ++i)
    acc[i] = up[0][i] * df[0][i] + up[1][i] * df[1][i] + up[2][i] * df[2][i];
  SpectralScalar out = to_spectral(acc);
  if (dealias) dealias_inplace(out);
  return out;
}

SpectralVector3 advect(const SpectralVector3& u, const SpectralVector3& f,
                       bool dealias) {
  SpectralVector3 out(f.grid());
  for (int c = 0; c < 3; ++c) out[c] = advect(u, f[c], dealias);
  return out;
}

SpectralVector3 wedge(const SpectralVector3& a, const SpectralVector3& b,
                      bool dealias) {
  if (a.grid() != b.grid()) throw Error("wedge: grids differ");
  const Grid3& g = a.grid();
  // da[i][l] = d_i a^l, db[l][j] = d_l b^j
  std::array<std::array<ScalarField, 3>, 3> da{
      physical_gradient(a[0]), physical_gradient(a[1]), physical_gradient(a[2])};
  std::array<std::array<ScalarField, 3>, 3> db{
      physical_gradient(b[0]), physical_gradient(b[1]), physical_gradient(b[2])};
  // M[i][j] = sum_l d_i a^l d_l b^j, accumulated pointwise.
  auto M = [&](int i, int j, std::size_t p) {
    double s = 0.0;
    for (int l = 0; l < 3; ++l) s += da[l][i][p] * db[j][l][p];
    return s;
  };
  VectorField3 w(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    w[0][p] = M(1, 2, p) - M(2, 1, p);
    w[1][p] = M(2, 0, p) - M(0, 2, p);
    w[2][p] = M(0, 1, p) - M(1, 0, p);
  }
  SpectralVector3 out = to_spectral(w);
  if (dealias) dealias_inplace(out);
  return out;
}

SpectralScalar solve_pressure(const SpectralVector3& zp,
                              const SpectralVector3& zm, bool dealias) {
  const Grid3& g = zp.grid();
  SpectralScalar src = divergence(advect(zp, zm, dealias));
  SpectralScalar p(g);
  for_each_mode(g, [&](std::size_t q, double, double, double, int m1, int m2,
                       int m3) {
    const double kx = deriv_k(g, 0, m1), ky = deriv_k(g, 1, m2),
                 kz = deriv_k(g, 2, m3);
    const double k2 = kx * kx + ky * ky + kz * kz;
    p[q] = k2 == 0.0 ? 0.0 : src[q] / k2;
  });
  return p;
}

SpectralScalar multi_derivative(const SpectralScalar& f,
                                std::array<int, 3> alpha) {
  const Grid3& g = f.grid();
  SpectralScalar out(g);
  for_each_mode(g, [&](std::size_t p, double, double, double, int m1, int m2,
                       int m3) {
    std::complex<double> m = 1.0;
    const std::array<double, 3> k{deriv_k(g, 0, m1), deriv_k(g, 1, m2),
                                  deriv_k(g, 2, m3)};
    for (int a = 0; a < 3; ++a)
      for (int r = 0; r < alpha[a]; ++r) m *= I * k[a];
    out[p] = m * f[p];
  });
  return out;
}

std::vector<std::array<int, 3>> multi_indices(int k) {
  std::vector<std::array<int, 3>> out;
  for (int a = k; a >= 0; --a)
    for (int b = k - a; b >= 0; --b) out.push_back({a, b, k - a - b});
  return out;
}

}  // namespace alfven
