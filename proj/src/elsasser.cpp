#include "alfven/elsasser.hpp"

#include <cmath>

#include "alfven/system.hpp"

namespace alfven {

std::array<std::complex<double>, 2> dispersion(std::array<double, 3> xi,
                                               double mu, double b0) {
  const double k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
  const std::complex<double> damp{0.0, -mu * k2};
  return {damp + b0 * xi[2], damp - b0 * xi[2]};
}

ElsasserRhs rhs(const ElsasserState& s, bool dealias, Mutation mutation) {
  const Grid3& g = s.grid();
  for (int c = 0; c < 3; ++c)
    for (std::size_t q = 0; q < s.zp[c].size(); ++q) {
      const auto zp = s.zp[c][q], zm = s.zm[c][q];
      if (!std::isfinite(zp.real()) || !std::isfinite(zp.imag()) ||
          !std::isfinite(zm.real()) || !std::isfinite(zm.imag()))
        throw MonitorError("nan", "non-finite state in rhs evaluation");
    }

  ElsasserRhs out(g);
  SpectralVector3 adv_p = advect(s.zm, s.zp, dealias);  // (z- . grad) z+
  SpectralVector3 adv_m = advect(s.zp, s.zm, dealias);  // (z+ . grad) z-
  out.p = solve_pressure(s.zp, s.zm, dealias);
  SpectralVector3 gradp = gradient(out.p);
  const double psign = mutation == Mutation::pressure_sign ? +1.0 : -1.0;
  constexpr std::complex<double> I{0.0, 1.0};
  for (int c = 0; c < 3; ++c) {
    for_each_mode(g, [&](std::size_t q, double, double, double, int m1,
                         int m2, int m3) {
      const double kx = deriv_k(g, 0, m1), ky = deriv_k(g, 1, m2),
                   k3 = deriv_k(g, 2, m3);
      const double lap = -(kx * kx + ky * ky + k3 * k3);
      out.dzp[c][q] = -adv_p[c][q] + I * s.b0 * k3 * s.zp[c][q] +
                      psign * gradp[c][q] + s.mu * lap * s.zp[c][q];
      out.dzm[c][q] = -adv_m[c][q] - I * s.b0 * k3 * s.zm[c][q] +
                      psign * gradp[c][q] + s.mu * lap * s.zm[c][q];
    });
  }
  leray_project(out.dzp);
  leray_project(out.dzm);
  return out;
}

ModeFit linearized_mode_fit(std::array<int, 3> mode, double mu, double b0,
                            double T, int side, const Grid3* grid, double dt) {
  Grid3 g = grid ? *grid
                 : Grid3({16, 16, 16},
                         {2.0 * std::numbers::pi, 2.0 * std::numbers::pi,
                          2.0 * std::numbers::pi});
  for (int a = 0; a < 3; ++a)
    if (std::abs(mode[a]) > g.cutoff(a))
      throw ConfigError("mode beyond the dealias cutoff is not resolvable");

  const std::array<double, 3> xi{g.wavenumber(0, mode[0]),
                                 g.wavenumber(1, mode[1]),
                                 g.wavenumber(2, mode[2])};

  // A single mode on one side evolves exactly linearly: the opposite side
  // is zero, so advection by z and the pressure source vanish identically.
  ElsasserState s(g, mu, b0);
  // Divergence-free polarization orthogonal to xi.
  std::array<double, 3> pol{0.0, 0.0, 0.0};
  {
    std::array<double, 3> trial{0.12, 0.85, 0.51};
    const double k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
    if (k2 == 0.0) throw ConfigError("zero mode has no dynamics to fit");
    double dot = trial[0] * xi[0] + trial[1] * xi[1] + trial[2] * xi[2];
    for (int a = 0; a < 3; ++a) pol[a] = trial[a] - dot * xi[a] / k2;
    double n = std::hypot(pol[0], pol[1], pol[2]);
    if (n < 1e-8) {
      trial = {0.9, -0.1, 0.2};
      dot = trial[0] * xi[0] + trial[1] * xi[1] + trial[2] * xi[2];
      for (int a = 0; a < 3; ++a) pol[a] = trial[a] - dot * xi[a] / k2;
      n = std::hypot(pol[0], pol[1], pol[2]);
    }
    for (int a = 0; a < 3; ++a) pol[a] /= n;
  }
  const double amp = 1e-3;
  VectorField3 phys(g);
  for (int c = 0; c < 3; ++c)
    phys[c] = ScalarField::from_function(g, [&](double x, double y, double z) {
      return amp * pol[c] * std::cos(xi[0] * x + xi[1] * y + xi[2] * z);
    });
  SpectralVector3 zdata = to_spectral(phys);
  if (side > 0)
    s.zp = zdata;
  else
    s.zm = zdata;

  // Keep |f| dt small: the RK4 phase error per step is (|f| dt)^5 / 120,
  // so this resolves the analytic rate to ~1e-8 or better.
  const double k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
  const double fmag = std::abs(b0 * xi[2]) + mu * k2;
  const double step_dt =
      dt > 0.0 ? dt : std::min(T / 32.0, 0.05 / std::max(fmag, 0.5));

  // The stored half-spectrum keeps k1 >= 0; a negative-k1 mode is sampled
  // through its conjugate entry.
  std::array<int, 3> m = mode;
  bool take_conj = false;
  if (m[0] < 0) {
    m = {-m[0], -m[1], -m[2]};
    take_conj = true;
  }
  int track = 0;
  for (int c = 0; c < 3; ++c)
    if (std::abs(pol[c]) > 0.5) track = c;  // unit vector: some |pol_c|>1/sqrt(3)
  auto sample = [&](const ElsasserState& st) {
    const Grid3& gg = st.grid();
    const int i2 = m[1] >= 0 ? m[1] : m[1] + gg.n(1);
    const int i3 = m[2] >= 0 ? m[2] : m[2] + gg.n(2);
    const std::complex<double> v =
        (side > 0 ? st.zp : st.zm)[track].at(m[0], i2, i3);
    return take_conj ? std::conj(v) : v;
  };

  System sys{std::move(s)};
  SolverConfig cfg;
  cfg.dt = step_dt;
  std::vector<std::complex<double>> coefs{sample(sys.state)};
  const long nsteps = std::lround(T / step_dt);
  for (long n = 0; n < nsteps; ++n) {
    step(sys, cfg);
    coefs.push_back(sample(sys.state));
  }

  // Fit a complex exponential by averaged consecutive log-ratios; the
  // phase increment per sample stays below pi by the dt choice above.
  std::complex<double> acc{0.0, 0.0};
  int used = 0;
  for (std::size_t i = 1; i < coefs.size(); ++i) {
    if (std::abs(coefs[i - 1]) < 1e-300) break;
    acc += std::log(coefs[i] / coefs[i - 1]);
    ++used;
  }
  if (used == 0) throw Error("mode fit: coefficient vanished immediately");
  const std::complex<double> lam = acc / (static_cast<double>(used) * step_dt);
  // coefficient ~ exp(-i f t), so f = i * lam
  const std::complex<double> f = std::complex<double>{0.0, 1.0} * lam;
  return ModeFit{f.real(), -f.imag()};
}

}  // namespace alfven
