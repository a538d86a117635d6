#include "alfven/geometry.hpp"

#include <cmath>

namespace alfven {

ScalarField optical_u(const CharacteristicFrame& f, int side, double t,
                      double b0) {
  const Grid3& g = f.grid();
  ScalarField u = to_physical(f.phi(side)[2]);
  std::size_t p = 0;
  for (int i3 = 0; i3 < g.n(2); ++i3) {
    const double base = g.coord(2, i3) - side * b0 * t;
    for (int i2 = 0; i2 < g.n(1); ++i2)
      for (int i1 = 0; i1 < g.n(0); ++i1, ++p) u[p] += base;
  }
  return u;
}

std::array<ScalarField, 3> transported_coords(const CharacteristicFrame& f,
                                              int side, double t, double b0) {
  const Grid3& g = f.grid();
  std::array<ScalarField, 3> out{to_physical(f.phi(side)[0]),
                                 to_physical(f.phi(side)[1]),
                                 optical_u(f, side, t, b0)};
  std::size_t p = 0;
  for (int i3 = 0; i3 < g.n(2); ++i3)
    for (int i2 = 0; i2 < g.n(1); ++i2) {
      const double x2 = g.coord(1, i2);
      for (int i1 = 0; i1 < g.n(0); ++i1, ++p) {
        out[0][p] += g.coord(0, i1);
        out[1][p] += x2;
      }
    }
  return out;
}

ScalarField weight_field(const CharacteristicFrame& f, int side, double t,
                         double b0, const WeightParams& w) {
  w.validate();
  const Grid3& g = f.grid();
  ScalarField out(g);
  if (w.mode == WeightMode::hybrid_log) {
    auto x = transported_coords(f, side, t, b0);
    for (std::size_t p = 0; p < g.size(); ++p)
      out[p] = std::sqrt(w.R * w.R + x[0][p] * x[0][p] + x[1][p] * x[1][p] +
                         x[2][p] * x[2][p]);
  } else {
    ScalarField u = optical_u(f, side, t, b0);
    const double half_omega = 0.5 * w.omega();
    for (std::size_t p = 0; p < g.size(); ++p)
      out[p] = std::pow(w.R * w.R + u[p] * u[p], half_omega);
  }
  return out;
}

SeparationReport separation_report(const CharacteristicFrame& f,
                                   const ElsasserState& s,
                                   const WeightParams& w) {
  const Grid3& g = f.grid();
  const double t = s.t, b0 = s.b0;
  SeparationReport rep;
  rep.reliable = max_norm_spectral(s.zp) <= 0.5 &&
                 max_norm_spectral(s.zm) <= 0.5;

  ScalarField up = optical_u(f, +1, t, b0);
  ScalarField um = optical_u(f, -1, t, b0);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double sep = std::abs(up[p] - um[p]);
    lo = std::min(lo, sep);
    hi = std::max(hi, sep);
  }
  rep.min_sep = g.size() ? lo : 0.0;
  rep.max_sep = hi;
  // Two-sided bound (2 b0 - 1) t <= |u+ - u-| <= (2 b0 + 1) t; for the
  // unit background this is the t <= |u+ - u-| <= 3t wave-separation
  // window. Vacuous at t = 0.
  const double slack = 1e-12 * (1.0 + t);
  rep.bound_ok = t <= 0.0 || (rep.min_sep >= (2.0 * b0 - 1.0) * t - slack &&
                              rep.max_sep <= (2.0 * b0 + 1.0) * t + slack);

  // Weight product lower bound, always evaluated with the hybrid weight.
  WeightParams hybrid = w;
  hybrid.mode = WeightMode::hybrid_log;
  ScalarField wp = weight_field(f, +1, t, b0, hybrid);
  ScalarField wm = weight_field(f, -1, t, b0, hybrid);
  double prod_min = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < g.size(); ++p)
    prod_min = std::min(prod_min, wp[p] * wm[p]);
  rep.weight_lhs_min = prod_min;
  rep.weight_rhs = 0.5 * w.R * std::sqrt(w.R * w.R + t * t);
  rep.weight_ok = prod_min >= rep.weight_rhs - slack * w.R * w.R;
  return rep;
}

NormalProductReport normal_product(const CharacteristicFrame& f,
                                   const ElsasserState& s, int side) {
  const Grid3& g = f.grid();
  // grad u_s = e3 + grad phi_s3 (the unwrapped background contributes e3).
  VectorField3 gu = to_physical(gradient(f.phi(side)[2]));
  for (std::size_t p = 0; p < g.size(); ++p) gu[2][p] += 1.0;

  VectorField3 zp = to_physical(s.zp);
  VectorField3 zm = to_physical(s.zm);
  const double b0 = s.b0;

  NormalProductReport rep;
  rep.min_val = std::numeric_limits<double>::infinity();
  rep.max_val = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < g.size(); ++p) {
    // numerator: (Z+ - Z-) . grad u_s = (2 b0 e3 + z+ - z-) . grad u_s
    const double num = (zp[0][p] - zm[0][p]) * gu[0][p] +
                       (zp[1][p] - zm[1][p]) * gu[1][p] +
                       (2.0 * b0 + zp[2][p] - zm[2][p]) * gu[2][p];
    // |grad_{t,x} u_s|^2 = |Z_s . grad u_s|^2 + |grad u_s|^2
    const VectorField3& zs = side > 0 ? zp : zm;
    const double zdotg = zs[0][p] * gu[0][p] + zs[1][p] * gu[1][p] +
                         (zs[2][p] + side * b0) * gu[2][p];
    const double g2 =
        gu[0][p] * gu[0][p] + gu[1][p] * gu[1][p] + gu[2][p] * gu[2][p];
    const double den2 = zdotg * zdotg + g2;
    if (den2 < 1e-16)
      throw MonitorError("geometry",
                         "degenerate optical gradient |grad_{t,x} u| < 1e-8");
    const double val = num / std::sqrt(den2);
    rep.min_val = std::min(rep.min_val, val);
    rep.max_val = std::max(rep.max_val, val);
  }
  rep.window_ok = rep.min_val >= 7.0 / 16.0 && rep.max_val <= 4.0;
  return rep;
}

MarkerCloud make_marker_cloud(const Grid3& g, int side, int stride) {
  if (stride < 1) throw ConfigError("marker stride must be >= 1");
  MarkerCloud c;
  c.side = side;
  for (int i3 = 0; i3 < g.n(2); i3 += stride)
    for (int i2 = 0; i2 < g.n(1); i2 += stride)
      for (int i1 = 0; i1 < g.n(0); i1 += stride) {
        c.label.push_back(
            {g.coord(0, i1), g.coord(1, i2), g.coord(2, i3)});
      }
  c.pos = c.label;
  c.jac.assign(c.label.size(), Mat3::identity());
  return c;
}

JacobianReport jacobian_report(const MarkerCloud& c) {
  JacobianReport rep;
  for (const Mat3& j : c.jac) {
    rep.max_dev_identity = std::max(rep.max_dev_identity, j.max_dev_identity());
    rep.max_det_dev = std::max(rep.max_det_dev, std::abs(j.det() - 1.0));
  }
  return rep;
}

double max_label_mismatch(const MarkerCloud& c, const CharacteristicFrame& f,
                          double t, double b0) {
  ScalarField phi3 = to_physical(f.phi(c.side)[2]);
  double worst = 0.0;
  for (std::size_t m = 0; m < c.count(); ++m) {
    const double u =
        c.pos[m][2] - c.side * b0 * t + interpolate(phi3, c.pos[m]);
    worst = std::max(worst, std::abs(u - c.label[m][2]));
  }
  return worst;
}

double min_monotonicity(const CharacteristicFrame& f, int side) {
  SpectralScalar phi3 = f.phi(side)[2];
  SpectralVector3 gphi = gradient(phi3);
  ScalarField d3 = to_physical(gphi[2]);
  double lo = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < d3.size(); ++p)
    lo = std::min(lo, 1.0 + d3[p]);
  return lo;
}

}  // namespace alfven
