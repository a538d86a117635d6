#include "alfven/scattering.hpp"

#include <cmath>

namespace alfven {

LineRecordSet make_line_records(
    const ElsasserState& s, int side, int stride,
    const std::vector<std::array<double, 3>>& extra_labels) {
  const Grid3& g = s.grid();
  LineRecordSet r;
  r.side = side;
  for (int i3 = 0; i3 < g.n(2); i3 += stride)
    for (int i2 = 0; i2 < g.n(1); i2 += stride)
      for (int i1 = 0; i1 < g.n(0); i1 += stride)
        r.label.push_back({g.coord(0, i1), g.coord(1, i2), g.coord(2, i3)});
  for (const auto& y : extra_labels) r.label.push_back(y);
  const std::size_t n = r.label.size();
  r.pos = r.label;
  r.accum_gradp.assign(n, {0.0, 0.0, 0.0});
  r.accum_wedge.assign(n, {0.0, 0.0, 0.0});
  r.z0.resize(n);
  r.j0.resize(n);

  const SpectralVector3& z = side > 0 ? s.zp : s.zm;
  VectorField3 zph = to_physical(z);
  VectorField3 jph = to_physical(curl(z));
  for (std::size_t m = 0; m < n; ++m) {
    r.z0[m] = interpolate(zph, r.label[m]);
    r.j0[m] = interpolate(jph, r.label[m]);
  }
  return r;
}

IdentityResidual characteristic_identity_residual(const LineRecordSet& rec,
                                                  const ElsasserState& s,
                                                  double eps_floor) {
  if (s.mu != 0.0)
    throw Error(
        "characteristic identity is an ideal-flow statement; mu must be 0");
  const SpectralVector3& z = rec.side > 0 ? s.zp : s.zm;
  VectorField3 zph = to_physical(z);
  VectorField3 jph = to_physical(curl(z));
  IdentityResidual out;
  for (std::size_t m = 0; m < rec.count(); ++m) {
    const auto zc = interpolate(zph, rec.pos[m]);
    const auto jc = interpolate(jph, rec.pos[m]);
    double num = 0.0, vnum = 0.0, den = eps_floor, vden = eps_floor;
    for (int d = 0; d < 3; ++d) {
      const double r = zc[d] - rec.z0[m][d] + rec.accum_gradp[m][d];
      const double vr = jc[d] - rec.j0[m][d] + rec.accum_wedge[m][d];
      num += r * r;
      vnum += vr * vr;
      den += std::abs(rec.z0[m][d]);
      vden += std::abs(rec.j0[m][d]);
    }
    out.value = std::max(out.value, std::sqrt(num) / den);
    out.vorticity_value = std::max(out.vorticity_value, std::sqrt(vnum) / vden);
  }
  return out;
}

double fit_pressure_decay_exponent(const PressureDecaySeries& decay) {
  // Least squares of log sup|grad p| against log(1+t) over the trailing
  // half of the series (the waves need time to separate first).
  const std::size_t n = decay.t.size();
  if (n < 4) return 0.0;
  std::size_t lo = n / 2;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t used = 0;
  for (std::size_t i = lo; i < n; ++i) {
    if (decay.sup_gradp[i] <= 0.0) continue;
    const double x = std::log(1.0 + decay.t[i]);
    const double y = std::log(decay.sup_gradp[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  if (used < 2) return 0.0;
  const double d = used * sxx - sx * sx;
  if (std::abs(d) < 1e-14) return 0.0;
  const double slope = (used * sxy - sx * sy) / d;
  return -slope;  // decay exponent q in sup|grad p| ~ (1+t)^(-q)
}

ScatteringRecord scattering_field(const LineRecordSet& rec, double T,
                                  const PressureDecaySeries& decay) {
  ScatteringRecord out;
  out.side = rec.side;
  out.T = T;
  out.label = rec.label;
  out.z_scatter.resize(rec.count());
  out.j_scatter.resize(rec.count());
  for (std::size_t m = 0; m < rec.count(); ++m)
    for (int d = 0; d < 3; ++d) {
      out.z_scatter[m][d] = rec.z0[m][d] - rec.accum_gradp[m][d];
      out.j_scatter[m][d] = rec.j0[m][d] - rec.accum_wedge[m][d];
    }

  // Tail of the truncated integral: extrapolate the measured decay of
  // sup|grad p| as C (1+t)^(-q), giving tail = sup|grad p|(T) (1+T)/(q-1).
  const double q = fit_pressure_decay_exponent(decay);
  out.fitted_decay_exp = q;
  const double gp_end = decay.sup_gradp.empty() ? 0.0 : decay.sup_gradp.back();
  if (q > 1.0) {
    out.tail_estimate = gp_end * (1.0 + T) / (q - 1.0);
    out.tail_reliable = true;
  } else {
    out.tail_estimate = std::numeric_limits<double>::infinity();
    out.tail_reliable = false;
  }
  if (gp_end == 0.0) {
    out.tail_estimate = 0.0;
    out.tail_reliable = true;
  }
  return out;
}

double scattering_deviation_norm(const ScatteringRecord& rec,
                                 const std::vector<std::array<double, 3>>& ref,
                                 const WeightParams& w,
                                 std::array<double, 3> label_spacing) {
  if (ref.size() != rec.label.size())
    throw Error("scattering deviation: reference size mismatch");
  const double cell = label_spacing[0] * label_spacing[1] * label_spacing[2];
  double acc = 0.0;
  for (std::size_t m = 0; m < rec.label.size(); ++m) {
    const double u = rec.label[m][2];
    const double wgt = std::pow(w.R * w.R + u * u, w.omega());
    double d2 = 0.0;
    for (int d = 0; d < 3; ++d) {
      const double r = rec.z_scatter[m][d] - ref[m][d];
      d2 += r * r;
    }
    acc += wgt * d2 * cell;
  }
  return std::sqrt(acc);
}

}  // namespace alfven
