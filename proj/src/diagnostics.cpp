#include "alfven/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace alfven {

namespace {

// Per-node multipliers for the two weight conventions.
struct WeightFields {
  ScalarField low;   // lowest-order multiplier
  ScalarField high;  // derivative-order multiplier
};

WeightFields weight_multipliers(const CharacteristicFrame& f, int opposite,
                                double t, double b0, const WeightParams& w) {
  ScalarField base = weight_field(f, opposite, t, b0, w);
  WeightFields out{ScalarField(base.grid()), ScalarField(base.grid())};
  if (w.mode == WeightMode::hybrid_log) {
    for (std::size_t p = 0; p < base.size(); ++p) {
      const double lg = std::log(base[p]);
      const double lg4 = lg * lg * lg * lg;
      out.low[p] = lg4;
      out.high[p] = base[p] * base[p] * lg4;
    }
  } else {
    // ideal mode: base = <u>^omega, both orders use <u>^{2 omega}
    for (std::size_t p = 0; p < base.size(); ++p) {
      const double sq = base[p] * base[p];
      out.low[p] = sq;
      out.high[p] = sq;
    }
  }
  return out;
}

double weighted_integral(const ScalarField& w, const ScalarField& q) {
  double acc = 0.0;
  for (std::size_t p = 0; p < w.size(); ++p) acc += w[p] * q[p];
  return acc * w.grid().volume() / static_cast<double>(w.grid().size());
}

// |grad z^{(alpha)}|^2 accumulated into q.
void add_grad_sq(const SpectralVector3& z, std::array<int, 3> alpha,
                 ScalarField& q) {
  for (int c = 0; c < 3; ++c) {
    SpectralVector3 gz = gradient(multi_derivative(z[c], alpha));
    for (int j = 0; j < 3; ++j) {
      ScalarField d = to_physical(gz[j]);
      for (std::size_t p = 0; p < q.size(); ++p) q[p] += d[p] * d[p];
    }
  }
}

// |hess z^{(alpha)}|^2 accumulated into q (full tensor, mixed entries
// counted twice).
void add_hess_sq(const SpectralVector3& z, std::array<int, 3> alpha,
                 ScalarField& q) {
  for (int c = 0; c < 3; ++c) {
    SpectralScalar base = multi_derivative(z[c], alpha);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) {
        std::array<int, 3> beta{0, 0, 0};
        beta[i] += 1;
        beta[j] += 1;
        ScalarField d = to_physical(multi_derivative(base, beta));
        const double mult = i == j ? 1.0 : 2.0;
        for (std::size_t p = 0; p < q.size(); ++p)
          q[p] += mult * d[p] * d[p];
      }
  }
}

}  // namespace

double energy_lowest(const ElsasserState& s, const CharacteristicFrame& f,
                     int side, const WeightParams& w) {
  WeightFields wf = weight_multipliers(f, -side, s.t, s.b0, w);
  const SpectralVector3& z = side > 0 ? s.zp : s.zm;
  VectorField3 zph = to_physical(z);
  ScalarField q(s.grid());
  for (std::size_t p = 0; p < q.size(); ++p)
    q[p] = zph[0][p] * zph[0][p] + zph[1][p] * zph[1][p] +
           zph[2][p] * zph[2][p];
  return weighted_integral(wf.low, q);
}

double energy_k(const ElsasserState& s, const CharacteristicFrame& f, int side,
                int k, const WeightParams& w) {
  if (k < 0) throw ConfigError("energy order must be >= 0");
  WeightFields wf = weight_multipliers(f, -side, s.t, s.b0, w);
  const SpectralVector3& z = side > 0 ? s.zp : s.zm;
  ScalarField q(s.grid());
  for (const auto& alpha : multi_indices(k)) add_grad_sq(z, alpha, q);
  return weighted_integral(wf.high, q);
}

double total_energy_mu(const ElsasserState& s, const CharacteristicFrame& f,
                       const WeightParams& w, int K) {
  double total = 0.0;
  for (int side : {+1, -1}) {
    total += energy_lowest(s, f, side, w);
    for (int k = 0; k <= K; ++k) total += energy_k(s, f, side, k, w);
    total += s.mu * energy_k(s, f, side, K + 1, w);
  }
  return total;
}

double dissipation_density(const ElsasserState& s, const CharacteristicFrame& f,
                           int side, int k, const WeightParams& w) {
  WeightFields wf = weight_multipliers(f, -side, s.t, s.b0, w);
  const SpectralVector3& z = side > 0 ? s.zp : s.zm;
  ScalarField q(s.grid());
  if (k < 0) {
    add_grad_sq(z, {0, 0, 0}, q);
    return weighted_integral(wf.low, q);
  }
  for (const auto& alpha : multi_indices(k)) add_hess_sq(z, alpha, q);
  return weighted_integral(wf.high, q);
}

void DiagnosticsSeries::record(const System& sys) {
  if (!sys.frame)
    throw Error("diagnostics require the characteristic frame to be enabled");
  const ElsasserState& s = sys.state;
  const CharacteristicFrame& f = *sys.frame;

  DiagnosticsRow row;
  row.step = sys.step_count;
  row.t = s.t;
  row.E_plus = energy_lowest(s, f, +1, w_);
  row.E_minus = energy_lowest(s, f, -1, w_);
  for (int k = 0; k <= K_; ++k) {
    row.E_plus_k.push_back(energy_k(s, f, +1, k, w_));
    row.E_minus_k.push_back(energy_k(s, f, -1, k, w_));
  }
  row.Etotal_mu = row.E_plus + row.E_minus;
  for (int k = 0; k <= K_; ++k)
    row.Etotal_mu += row.E_plus_k[k] + row.E_minus_k[k];
  row.Etotal_mu +=
      s.mu * (energy_k(s, f, +1, K_ + 1, w_) + energy_k(s, f, -1, K_ + 1, w_));

  // Weighted diffusion accumulators (trapezoid between samples).
  std::vector<double> dens_p(K_ + 2), dens_m(K_ + 2);
  for (int k = -1; k <= K_; ++k) {
    dens_p[k + 1] = dissipation_density(s, f, +1, k, w_);
    dens_m[k + 1] = dissipation_density(s, f, -1, k, w_);
  }
  if (!have_last_) {
    D_p_.assign(K_ + 2, 0.0);
    D_m_.assign(K_ + 2, 0.0);
  } else {
    const double dt = s.t - last_t_;
    for (int i = 0; i < K_ + 2; ++i) {
      D_p_[i] += 0.5 * s.mu * dt * (last_density_p_[i] + dens_p[i]);
      D_m_[i] += 0.5 * s.mu * dt * (last_density_m_[i] + dens_m[i]);
    }
  }
  last_density_p_ = dens_p;
  last_density_m_ = dens_m;
  last_t_ = s.t;
  have_last_ = true;
  row.D_plus = D_p_[0];
  row.D_minus = D_m_[0];
  row.D_plus_k.assign(D_p_.begin() + 1, D_p_.end());
  row.D_minus_k.assign(D_m_.begin() + 1, D_m_.end());

  row.l2_plus = l2_norm_sq(s.zp);
  row.l2_minus = l2_norm_sq(s.zm);
  row.diss_plus = sys.diss_plus;
  row.diss_minus = sys.diss_minus;
  for (int k = 0; k < 3; ++k)
    row.sobolev[k] =
        0.5 * (sobolev_seminorm_sq(s.zp, k) + sobolev_seminorm_sq(s.zm, k));

  if (rows_.empty()) {
    row.energy_identity_residual = 0.0;
  } else {
    const DiagnosticsRow& first = rows_.front();
    double worst = 0.0;
    auto side_residual = [&](double l2t, double diss, double l20) {
      if (l20 <= 1e-300) return 0.0;
      return std::abs(l2t + 2.0 * s.mu * diss - l20) / l20;
    };
    worst = std::max(side_residual(row.l2_plus, row.diss_plus, first.l2_plus),
                     side_residual(row.l2_minus, row.diss_minus,
                                   first.l2_minus));
    row.energy_identity_residual = worst;
  }
  rows_.push_back(std::move(row));
}

double DiagnosticsSeries::energy_identity_residual() const {
  if (rows_.empty()) throw Error("energy identity residual: empty series");
  double worst = 0.0;
  for (const auto& r : rows_)
    worst = std::max(worst, r.energy_identity_residual);
  return worst;
}

namespace {
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void DiagnosticsSeries::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path);
  out << "step,t,E_plus,E_minus";
  for (int k = 0; k <= K_; ++k) out << ",E_plus_k" << k;
  for (int k = 0; k <= K_; ++k) out << ",E_minus_k" << k;
  out << ",D_plus,D_minus,Etotal_mu,energy_identity_residual\n";
  for (const auto& r : rows_) {
    out << r.step << "," << fmt(r.t) << "," << fmt(r.E_plus) << ","
        << fmt(r.E_minus);
    for (double v : r.E_plus_k) out << "," << fmt(v);
    for (double v : r.E_minus_k) out << "," << fmt(v);
    out << "," << fmt(r.D_plus) << "," << fmt(r.D_minus) << ","
        << fmt(r.Etotal_mu) << "," << fmt(r.energy_identity_residual) << "\n";
  }
}

FluxKind flux_kind_from_string(const std::string& s) {
  if (s == "unit") return FluxKind::unit;
  if (s == "z2") return FluxKind::z2;
  if (s == "gradz2") return FluxKind::gradz2;
  if (s == "j2") return FluxKind::j2;
  throw ConfigError("unknown flux kind: " + s);
}

std::string to_string(FluxKind k) {
  switch (k) {
    case FluxKind::unit: return "unit";
    case FluxKind::z2: return "z2";
    case FluxKind::gradz2: return "gradz2";
    case FluxKind::j2: return "j2";
  }
  return "?";
}

double surface_integral(const System& sys, const FluxSpec& spec,
                        const WeightParams& w) {
  if (!sys.frame) throw Error("flux requires the characteristic frame");
  const ElsasserState& s = sys.state;
  const CharacteristicFrame& f = *sys.frame;
  const Grid3& g = s.grid();
  const int side = spec.side;

  const double mono = min_monotonicity(f, side);
  if (mono <= 0.05)
    throw MonitorError("monotonicity",
                       "d3 u dropped to " + std::to_string(mono) +
                           "; graph extraction is unreliable");

  ScalarField u = optical_u(f, side, s.t, s.b0);

  // Measure factor sqrt(1 + |Z_s . grad u|^2 + |grad_h u|^2).
  VectorField3 gu = to_physical(gradient(f.phi(side)[2]));
  for (std::size_t p = 0; p < g.size(); ++p) gu[2][p] += 1.0;
  const SpectralVector3& zs = side > 0 ? s.zp : s.zm;
  VectorField3 zph = to_physical(zs);
  ScalarField measure(g);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double zdotg = zph[0][p] * gu[0][p] + zph[1][p] * gu[1][p] +
                         (zph[2][p] + side * s.b0) * gu[2][p];
    measure[p] = std::sqrt(1.0 + zdotg * zdotg + gu[0][p] * gu[0][p] +
                           gu[1][p] * gu[1][p]);
  }

  // Integrand field.
  ScalarField q(g);
  switch (spec.kind) {
    case FluxKind::unit:
      for (std::size_t p = 0; p < g.size(); ++p) q[p] = 1.0;
      break;
    case FluxKind::z2: {
      WeightFields wf = weight_multipliers(f, -side, s.t, s.b0, w);
      for (std::size_t p = 0; p < g.size(); ++p)
        q[p] = wf.low[p] * (zph[0][p] * zph[0][p] + zph[1][p] * zph[1][p] +
                            zph[2][p] * zph[2][p]);
      break;
    }
    case FluxKind::gradz2: {
      WeightFields wf = weight_multipliers(f, -side, s.t, s.b0, w);
      ScalarField g2(g);
      add_grad_sq(zs, {0, 0, 0}, g2);
      for (std::size_t p = 0; p < g.size(); ++p) q[p] = wf.high[p] * g2[p];
      break;
    }
    case FluxKind::j2: {
      WeightFields wf = weight_multipliers(f, -side, s.t, s.b0, w);
      SpectralVector3 j = curl(zs);
      ScalarField j2(g);
      for (const auto& alpha : multi_indices(spec.order)) {
        for (int c = 0; c < 3; ++c) {
          ScalarField d = to_physical(multi_derivative(j[c], alpha));
          for (std::size_t p = 0; p < g.size(); ++p) j2[p] += d[p] * d[p];
        }
      }
      for (std::size_t p = 0; p < g.size(); ++p) q[p] = wf.high[p] * j2[p];
      break;
    }
  }

  // Column-wise graph extraction and quadrature.
  const int n1 = g.n(0), n2 = g.n(1), n3 = g.n(2);
  const double h3 = g.h(2);
  double total = 0.0;
  std::vector<double> col(n3);
  for (int i2 = 0; i2 < n2; ++i2)
    for (int i1 = 0; i1 < n1; ++i1) {
      for (int i3 = 0; i3 < n3; ++i3) col[i3] = u[g.index(i1, i2, i3)];
      if (spec.level < col.front() || spec.level >= col.back())
        throw MonitorError("flux",
                           "level " + std::to_string(spec.level) +
                               " not bracketed in column; the surface has "
                               "wrapped or the geometry broke down");
      int j = 0;
      while (j + 1 < n3 && !(col[j] <= spec.level && spec.level < col[j + 1]))
        ++j;
      // Local cubic through nodes j-1..j+2 (unwrap the periodic deviation
      // by shifting x3 across the seam).
      double uloc[4];
      for (int m = -1; m <= 2; ++m) {
        int idx = j + m;
        double shift = 0.0;
        if (idx < 0) {
          idx += n3;
          shift = -g.length(2);
        } else if (idx >= n3) {
          idx -= n3;
          shift = g.length(2);
        }
        uloc[m + 1] = col[idx] + shift;
      }
      double sfrac = (spec.level - uloc[1]) / (uloc[2] - uloc[1]);
      for (int it = 0; it < 8; ++it) {
        const auto wts = lagrange_cubic_weights(sfrac);
        const auto dwts = lagrange_cubic_dweights(sfrac);
        double val = -spec.level, dval = 0.0;
        for (int m = 0; m < 4; ++m) {
          val += wts[m] * uloc[m];
          dval += dwts[m] * uloc[m];
        }
        if (dval == 0.0) break;
        double next = sfrac - val / dval;
        next = std::min(1.0, std::max(0.0, next));
        if (std::abs(next - sfrac) < 1e-14) {
          sfrac = next;
          break;
        }
        sfrac = next;
      }
      const double eta = g.coord(2, j) + sfrac * h3;
      const std::array<double, 3> x{g.coord(0, i1), g.coord(1, i2), eta};
      total += interpolate(q, x) * interpolate(measure, x);
    }
  return total * g.h(0) * g.h(1);
}

void FluxAccumulator::accumulate(const System& sys) {
  std::vector<double> cur(specs_.size());
  for (std::size_t i = 0; i < specs_.size(); ++i)
    cur[i] = surface_integral(sys, specs_[i], w_);
  if (!have_last_) {
    values_.assign(specs_.size(), 0.0);
  } else {
    const double dt = sys.state.t - last_t_;
    for (std::size_t i = 0; i < specs_.size(); ++i)
      values_[i] += 0.5 * dt * (last_integrals_[i] + cur[i]);
  }
  last_integrals_ = cur;
  last_t_ = sys.state.t;
  have_last_ = true;
  history_.push_back({sys.step_count, sys.state.t, values_});
}

void FluxAccumulator::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path);
  out << "step,t,side,level,kind,order,flux\n";
  for (const auto& row : history_)
    for (std::size_t i = 0; i < specs_.size(); ++i) {
      const FluxSpec& sp = specs_[i];
      out << row.step << "," << fmt(row.t) << ","
          << (sp.side > 0 ? "+" : "-") << "," << fmt(sp.level) << ","
          << to_string(sp.kind) << "," << sp.order << ","
          << fmt(row.values[i]) << "\n";
    }
}

DivCurlResult div_curl_check(const SpectralVector3& v,
                             const ScalarField& lambda) {
  const Grid3& g = v.grid();
  if (lambda.grid() != g) throw Error("div_curl_check: grids differ");
  for (std::size_t p = 0; p < lambda.size(); ++p)
    if (!(lambda[p] > 0.0))
      throw Error("div_curl_check: weight must be positive everywhere");
  if (divergence_ratio(v) > 1e-8)
    throw Error("div_curl_check: field is not divergence free");

  DivCurlResult res;
  {
    ScalarField q(g);
    add_grad_sq(v, {0, 0, 0}, q);
    res.lhs = weighted_integral(lambda, q);
  }
  {
    VectorField3 c = to_physical(curl(v));
    ScalarField q(g);
    for (std::size_t p = 0; p < g.size(); ++p)
      q[p] = c[0][p] * c[0][p] + c[1][p] * c[1][p] + c[2][p] * c[2][p];
    res.rhs_curl = weighted_integral(lambda, q);
  }
  {
    VectorField3 gl = to_physical(gradient(to_spectral(lambda)));
    VectorField3 vp = to_physical(v);
    ScalarField q(g);
    for (std::size_t p = 0; p < g.size(); ++p) {
      const double gl2 =
          gl[0][p] * gl[0][p] + gl[1][p] * gl[1][p] + gl[2][p] * gl[2][p];
      const double v2 =
          vp[0][p] * vp[0][p] + vp[1][p] * vp[1][p] + vp[2][p] * vp[2][p];
      q[p] = gl2 / lambda[p] * v2;
    }
    ScalarField one(g);
    for (std::size_t p = 0; p < g.size(); ++p) one[p] = 1.0;
    res.rhs_weight = weighted_integral(one, q);
  }
  const double slack = 1e-12 * (res.lhs + res.rhs_curl + res.rhs_weight);
  res.ok = res.lhs <= 2.0 * res.rhs_curl + 4.0 * res.rhs_weight + slack;
  return res;
}

}  // namespace alfven
