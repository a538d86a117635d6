#include "alfven/initial_data.hpp"

#include <cmath>
#include <random>

#include "alfven/checkpoint.hpp"

namespace alfven {

namespace {

// Deterministic gaussian stream: explicit Box-Muller over mt19937_64 so
// that data families are bit-reproducible across platforms.
class GaussianStream {
 public:
  explicit GaussianStream(std::uint64_t seed) : eng_(seed) {}
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }
  double operator()() {
    if (have_) {
      have_ = false;
      return spare_;
    }
    double u1 = 0.0;
    do {
      u1 = uniform();
    } while (u1 <= 1e-300);
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_ = true;
    return r * std::cos(a);
  }

 private:
  std::mt19937_64 eng_;
  bool have_ = false;
  double spare_ = 0.0;
};

VectorField3 white_noise(const Grid3& g, GaussianStream& rng) {
  VectorField3 f(g);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < g.size(); ++i) f[c][i] = rng();
  return f;
}

// Fixed smooth compactly supported scalar bump: support radius 2 (before
// the envelope dilation), a gentle gaussian core tapered to zero by a
// C-infinity cutoff. The gentle core keeps the gradient-to-value energy
// ratio of the derived velocity/magnetic bumps small.
struct Bump {
  static constexpr double radius = 2.0;
  static constexpr double alpha = 1.5;
  // value as a function of rho^2 = (|y|/radius)^2; the tail is cut at
  // 1 - 1e-3 where the cutoff factor is already below exp(-999).
  static double value(double rho2) {
    if (rho2 >= 1.0 - 1e-3) return 0.0;
    return std::exp(-alpha * rho2) * std::exp(1.0 - 1.0 / (1.0 - rho2));
  }
  // d value / d(rho2)
  static double dvalue(double rho2) {
    if (rho2 >= 1.0 - 1e-3) return 0.0;
    const double om = 1.0 - rho2;
    return value(rho2) * (-alpha - 1.0 / (om * om));
  }
};

// f(x) = curl_x [ B(s x) c ] = s (grad B)(s x) x c, closed form.
std::array<double, 3> bump_curl(const std::array<double, 3>& x, double s,
                                const std::array<double, 3>& c) {
  const std::array<double, 3> y{s * x[0], s * x[1], s * x[2]};
  const double rho2 =
      (y[0] * y[0] + y[1] * y[1] + y[2] * y[2]) / (Bump::radius * Bump::radius);
  const double dv = Bump::dvalue(rho2);
  // grad_y B = dv * 2 y / radius^2
  const double fac = s * 2.0 * dv / (Bump::radius * Bump::radius);
  return {fac * (y[1] * c[2] - y[2] * c[1]), fac * (y[2] * c[0] - y[0] * c[2]),
          fac * (y[0] * c[1] - y[1] * c[0])};
}

std::array<double, 3> random_unit(GaussianStream& rng) {
  std::array<double, 3> v{rng(), rng(), rng()};
  const double n = std::hypot(v[0], v[1], v[2]);
  if (n < 1e-12) return {1.0, 0.0, 0.0};
  return {v[0] / n, v[1] / n, v[2] / n};
}

void finalize_side(SpectralVector3& z) {
  dealias_inplace(z);
  leray_project(z);
}

SpectralVector3 shaped_noise(const Grid3& g, GaussianStream& rng,
                             const std::function<double(double, int)>& profile) {
  // profile(kmag, is_on) receives |k| and the integer mode magnitude^2
  SpectralVector3 z = to_spectral(white_noise(g, rng));
  for (int c = 0; c < 3; ++c) {
    for_each_mode(g, [&](std::size_t p, double k1, double k2, double k3,
                         int m1, int m2, int m3) {
      const double kmag = std::sqrt(k1 * k1 + k2 * k2 + k3 * k3);
      const double m2mag = static_cast<double>(m1) * m1 +
                           static_cast<double>(m2) * m2 +
                           static_cast<double>(m3) * m3;
      z[c][p] *= profile(kmag, static_cast<int>(std::lround(m2mag)));
    });
  }
  finalize_side(z);
  return z;
}

}  // namespace

double weighted_data_norm(const ElsasserState& s, int deriv_budget,
                          double weight_R) {
  const Grid3& g = s.grid();
  // Closed-form t=0 weights built from the full radius.
  ScalarField w2(g);    // (R^2 + |x|^2)
  ScalarField logw4(g);  // (log (R^2+|x|^2)^(1/2))^4
  {
    std::size_t p = 0;
    for (int i3 = 0; i3 < g.n(2); ++i3)
      for (int i2 = 0; i2 < g.n(1); ++i2)
        for (int i1 = 0; i1 < g.n(0); ++i1, ++p) {
          const double x = g.coord(0, i1), y = g.coord(1, i2),
                       z = g.coord(2, i3);
          const double r2 = weight_R * weight_R + x * x + y * y + z * z;
          w2[p] = r2;
          const double lg = 0.5 * std::log(r2);
          logw4[p] = lg * lg * lg * lg;
        }
  }
  const double cellvol = g.volume() / static_cast<double>(g.size());

  auto weighted_term = [&](const SpectralVector3& z, int order,
                           bool with_radius) {
    // sum over full derivative tensors of this order with multinomial
    // multiplicities, integrated against the squared weight.
    double total = 0.0;
    for (const auto& alpha : multi_indices(order)) {
      double multinom = 1.0;
      {
        // order! / (a1! a2! a3!)
        auto fact = [](int n) {
          double f = 1.0;
          for (int i = 2; i <= n; ++i) f *= i;
          return f;
        };
        multinom = fact(order) / (fact(alpha[0]) * fact(alpha[1]) * fact(alpha[2]));
      }
      for (int c = 0; c < 3; ++c) {
        ScalarField d = to_physical(multi_derivative(z[c], alpha));
        double acc = 0.0;
        if (with_radius)
          for (std::size_t p = 0; p < d.size(); ++p)
            acc += w2[p] * logw4[p] * d[p] * d[p];
        else
          for (std::size_t p = 0; p < d.size(); ++p)
            acc += logw4[p] * d[p] * d[p];
        total += multinom * acc * cellvol;
      }
    }
    return total;
  };

  double norm = 0.0;
  for (const SpectralVector3* z : {&s.zp, &s.zm}) {
    norm += weighted_term(*z, 0, false);  // lowest order, log weight only
    for (int k = 0; k <= deriv_budget; ++k)
      norm += weighted_term(*z, k + 1, true);
    norm += s.mu * weighted_term(*z, deriv_budget + 2, true);
  }
  return norm;
}

ElsasserState make_initial_data(const InitialDataSpec& spec, const Grid3& g,
                                double mu, double b0,
                                InitialDataReport* report, int deriv_budget,
                                double weight_R) {
  if (spec.amplitude < 0.0) throw ConfigError("amplitude must be >= 0");
  ElsasserState s(g, mu, b0);

  switch (spec.family) {
    case DataFamily::low_frequency: {
      const double eps = spec.amplitude;
      if (eps > 0.0) {
        const double sscale = eps / spec.envelope_scale;  // dilation factor
        const double support = 2.0 * Bump::radius / sscale;
        const double minL = std::min({g.length(0), g.length(1), g.length(2)});
        if (support > 0.8 * minL)
          throw ConfigError(
              "low_frequency envelope does not fit the box: dilated support " +
              std::to_string(support) + " exceeds 0.8 * min box length");
        GaussianStream rng(spec.seed);
        const auto cv = random_unit(rng);
        const auto cb = random_unit(rng);
        const double amp = std::pow(eps, 2.5);
        VectorField3 zp_phys(g), zm_phys(g);
        std::size_t p = 0;
        for (int i3 = 0; i3 < g.n(2); ++i3)
          for (int i2 = 0; i2 < g.n(1); ++i2)
            for (int i1 = 0; i1 < g.n(0); ++i1, ++p) {
              const std::array<double, 3> x{g.coord(0, i1), g.coord(1, i2),
                                            g.coord(2, i3)};
              const auto v = bump_curl(x, sscale, cv);
              const auto b = bump_curl(x, sscale, cb);
              for (int c = 0; c < 3; ++c) {
                zp_phys[c][p] = amp * (v[c] + b[c]);
                zm_phys[c][p] = amp * (v[c] - b[c]);
              }
            }
        s.zp = to_spectral(zp_phys);
        s.zm = to_spectral(zm_phys);
        finalize_side(s.zp);
        finalize_side(s.zm);
      }
      break;
    }
    case DataFamily::oscillatory: {
      if (spec.amplitude > 0.0) {
        // Spectral shaping: all energy on the |k| = 1 shell, so the first
        // three Sobolev-level energies coincide.
        double best = std::numeric_limits<double>::infinity();
        for_each_mode(g, [&](std::size_t, double k1, double k2, double k3,
                             int, int, int) {
          const double kmag = std::sqrt(k1 * k1 + k2 * k2 + k3 * k3);
          if (kmag > 0.0) best = std::min(best, std::abs(kmag - 1.0));
        });
        const double tol = best + 1e-9;
        auto profile = [&](double kmag, int) {
          return (kmag > 0.0 && std::abs(kmag - 1.0) <= tol) ? 1.0 : 0.0;
        };
        GaussianStream rng(spec.seed);
        s.zp = shaped_noise(g, rng, profile);
        s.zm = shaped_noise(g, rng, profile);
        // Normalize E0 = amplitude^2 with E0 in the velocity/field
        // convention: E0 = (||z+||^2 + ||z-||^2) / 2.
        const double e0 =
            0.5 * (l2_norm_sq(s.zp) + l2_norm_sq(s.zm));
        if (e0 <= 0.0)
          throw ConfigError("oscillatory family: no modes on the unit shell");
        const double scale = spec.amplitude / std::sqrt(e0);
        s.zp *= scale;
        s.zm *= scale;
        const double e1 = 0.5 * (sobolev_seminorm_sq(s.zp, 1) +
                                 sobolev_seminorm_sq(s.zm, 1));
        const double e0n = spec.amplitude * spec.amplitude;
        const double e2 = 0.5 * (sobolev_seminorm_sq(s.zp, 2) +
                                 sobolev_seminorm_sq(s.zm, 2));
        if (std::abs(e1 / e0n - 1.0) > 0.10 || std::abs(e2 / e1 - 1.0) > 0.10)
          throw ConfigError(
              "oscillatory family: box cannot match E0=E1=E2 within 10% "
              "(box lengths should be integer multiples of 2*pi)");
      }
      break;
    }
    case DataFamily::random_band: {
      if (spec.band_lo < 1 || spec.band_hi < spec.band_lo)
        throw ConfigError("random_band: need 1 <= band_lo <= band_hi");
      const int cut = std::min({g.cutoff(0), g.cutoff(1), g.cutoff(2)});
      if (spec.band_hi > cut)
        throw ConfigError("random_band: band_hi beyond the dealias cutoff");
      if (spec.amplitude > 0.0) {
        const double lo2 = static_cast<double>(spec.band_lo) * spec.band_lo;
        const double hi2 = static_cast<double>(spec.band_hi) * spec.band_hi;
        auto profile = [&](double kmag, int m2) {
          if (m2 < lo2 - 0.5 || m2 > hi2 + 0.5) return 0.0;
          return std::pow(std::max(kmag, 1e-12), -0.5 * spec.spectral_slope);
        };
        GaussianStream rng(spec.seed);
        s.zp = shaped_noise(g, rng, profile);
        s.zm = shaped_noise(g, rng, profile);
        for (SpectralVector3* z : {&s.zp, &s.zm}) {
          const double m = max_norm_spectral(*z);
          if (m > 0.0) *z *= spec.amplitude / m;
        }
      }
      break;
    }
    case DataFamily::single_mode: {
      if (spec.amplitude > 0.0) {
        std::array<double, 3> xi{g.wavenumber(0, spec.mode[0]),
                                 g.wavenumber(1, spec.mode[1]),
                                 g.wavenumber(2, spec.mode[2])};
        const double k2 = xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2];
        if (k2 == 0.0) throw ConfigError("single_mode: zero mode");
        for (int a = 0; a < 3; ++a)
          if (std::abs(spec.mode[a]) > g.cutoff(a))
            throw ConfigError("single_mode: mode beyond the dealias cutoff");
        GaussianStream rng(spec.seed);
        auto trial = random_unit(rng);
        std::array<double, 3> pol;
        const double dot = trial[0] * xi[0] + trial[1] * xi[1] + trial[2] * xi[2];
        for (int a = 0; a < 3; ++a) pol[a] = trial[a] - dot * xi[a] / k2;
        double n = std::hypot(pol[0], pol[1], pol[2]);
        if (n < 1e-8) {
          pol = {xi[1] - xi[2], xi[2] - xi[0], xi[0] - xi[1]};
          n = std::hypot(pol[0], pol[1], pol[2]);
        }
        for (int a = 0; a < 3; ++a) pol[a] *= spec.amplitude / n;
        VectorField3 phys(g);
        for (int c = 0; c < 3; ++c)
          phys[c] =
              ScalarField::from_function(g, [&](double x, double y, double z) {
                return pol[c] * std::cos(xi[0] * x + xi[1] * y + xi[2] * z);
              });
        s.zp = to_spectral(phys);
        s.zm = s.zp;
        finalize_side(s.zp);
        finalize_side(s.zm);
      }
      break;
    }
    case DataFamily::custom_checkpoint: {
      ElsasserState loaded = read_checkpoint(spec.checkpoint_path);
      if (loaded.grid() != g)
        throw ConfigError("checkpoint grid does not match the configured grid");
      loaded.mu = mu;
      loaded.b0 = b0;
      s = std::move(loaded);
      break;
    }
  }

  if (spec.sides == DataSides::plus_only) s.zm = SpectralVector3(g);
  if (spec.sides == DataSides::minus_only) s.zp = SpectralVector3(g);

  if (report) {
    for (int k = 0; k < 3; ++k)
      report->sobolev[k] = 0.5 * (sobolev_seminorm_sq(s.zp, k) +
                                  sobolev_seminorm_sq(s.zm, k));
    report->weighted_norm = weighted_data_norm(s, deriv_budget, weight_R);
    report->sup_z =
        std::max(max_norm_spectral(s.zp), max_norm_spectral(s.zm));
  }
  return s;
}

}  // namespace alfven
