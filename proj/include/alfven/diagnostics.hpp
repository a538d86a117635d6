#pragma once

#include <string>

#include "alfven/system.hpp"

namespace alfven {

// Weighted characteristic energies of the z_side wave. The weight is
// built from the opposite side's transported coordinates (that is what
// makes it constant along the wave's own transport field):
//   lowest:   hybrid: int (log<w>)^4 |z|^2      ideal: int <u>^{2w} |z|^2
//   order k:  hybrid: sum_{|a|=k} int <w>^2 (log<w>)^4 |grad z^{(a)}|^2
//             ideal:  sum_{|a|=k} int <u>^{2w} |grad z^{(a)}|^2
double energy_lowest(const ElsasserState& s, const CharacteristicFrame& f,
                     int side, const WeightParams& w);
double energy_k(const ElsasserState& s, const CharacteristicFrame& f, int side,
                int k, const WeightParams& w);

// Total energy: sum over sides of  E_lowest + sum_{k<=K} E_k + mu E_{K+1}.
double total_energy_mu(const ElsasserState& s, const CharacteristicFrame& f,
                       const WeightParams& w, int K);

// Spatial integral inside the diffusion accumulator (without the mu dt
// factor): lowest order uses (log<w>)^4 |grad z|^2, order k uses
// <w>^2 (log<w>)^4 |hess z^{(a)}|^2 summed over |a| = k.
double dissipation_density(const ElsasserState& s, const CharacteristicFrame& f,
                           int side, int k, const WeightParams& w);

struct DiagnosticsRow {
  long step = 0;
  double t = 0.0;
  double E_plus = 0.0, E_minus = 0.0;
  std::vector<double> E_plus_k, E_minus_k;   // k = 0..K
  double D_plus = 0.0, D_minus = 0.0;        // lowest-order diffusions
  std::vector<double> D_plus_k, D_minus_k;   // k = 0..K
  double Etotal_mu = 0.0;
  double energy_identity_residual = 0.0;
  // unweighted bookkeeping used by the studies
  double l2_plus = 0.0, l2_minus = 0.0;      // int |z_s|^2
  double diss_plus = 0.0, diss_minus = 0.0;  // int_0^t int |grad z_s|^2
  std::array<double, 3> sobolev{0.0, 0.0, 0.0};
};

// Time series of energies and accumulated diffusions. Weighted diffusion
// integrals use the trapezoidal rule between recorded samples; the
// unweighted dissipation integrals come from the integrator's own
// quadrature states, which keeps the energy identity at RK order.
class DiagnosticsSeries {
 public:
  DiagnosticsSeries(int deriv_budget, WeightParams w)
      : K_(deriv_budget), w_(w) {
    if (K_ < 0) throw ConfigError("derivative budget must be >= 0");
  }

  // Record the current state; the system's frame must be enabled.
  void record(const System& sys);

  const std::vector<DiagnosticsRow>& rows() const { return rows_; }
  int deriv_budget() const { return K_; }

  // max over recorded t of |E(t) + 2 mu diss(t) - E(0)| / E(0), worst side.
  double energy_identity_residual() const;

  void write_csv(const std::string& path) const;

 private:
  int K_;
  WeightParams w_;
  std::vector<DiagnosticsRow> rows_;
  // trapezoid memory for the weighted diffusion accumulators
  std::vector<double> last_density_p_, last_density_m_;
  std::vector<double> D_p_, D_m_;
  double last_t_ = 0.0;
  bool have_last_ = false;
};

enum class FluxKind { unit, z2, gradz2, j2 };

FluxKind flux_kind_from_string(const std::string& s);
std::string to_string(FluxKind k);

struct FluxSpec {
  int side = +1;
  double level = 0.0;
  FluxKind kind = FluxKind::z2;
  int order = 1;  // only used by j2
};

// Characteristic-surface flux accumulator. Each level set of the optical
// function u_side is extracted per (x1,x2) column as a graph
// x3 = eta(x1,x2) by monotone bracketing plus a cubic refinement, the
// integrand and the surface measure factor
//   sqrt(1 + |Z_s . grad u_s|^2 + |grad_h u_s|^2)
// are interpolated onto the graph, and the time integral is advanced by
// the trapezoidal rule.
class FluxAccumulator {
 public:
  FluxAccumulator(std::vector<FluxSpec> specs, WeightParams w)
      : specs_(std::move(specs)), w_(w) {}

  void accumulate(const System& sys);

  const std::vector<FluxSpec>& specs() const { return specs_; }
  const std::vector<double>& values() const { return values_; }

  struct HistoryRow {
    long step;
    double t;
    std::vector<double> values;
  };
  const std::vector<HistoryRow>& history() const { return history_; }
  void write_csv(const std::string& path) const;

 private:
  std::vector<FluxSpec> specs_;
  WeightParams w_;
  std::vector<double> values_;
  std::vector<double> last_integrals_;
  std::vector<HistoryRow> history_;
  double last_t_ = 0.0;
  bool have_last_ = false;
};

// One surface integral (no time integration): exposed for tests.
double surface_integral(const System& sys, const FluxSpec& spec,
                        const WeightParams& w);

struct DivCurlResult {
  double lhs = 0.0;        // int lambda |grad v|^2
  double rhs_curl = 0.0;   // int lambda |curl v|^2
  double rhs_weight = 0.0; // int (|grad lambda|^2 / lambda) |v|^2
  bool ok = true;          // lhs <= 2 rhs_curl + 4 rhs_weight
};
// Weighted div-curl inequality for divergence-free zero-mean fields; the
// constants 2 and 4 come from absorbing half of the left side after
// Cauchy-Schwarz.
DivCurlResult div_curl_check(const SpectralVector3& v,
                             const ScalarField& lambda);

}  // namespace alfven
