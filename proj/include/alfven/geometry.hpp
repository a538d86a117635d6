#pragma once

#include <vector>

#include "alfven/elsasser.hpp"
#include "alfven/interpolate.hpp"

namespace alfven {

// Transported coordinates, kept as periodic deviation fields:
//   x_i^+ = x_i + phi_p[i]           (i = 0, 1)
//   u_+   = x3 - b0 t + phi_p[2]
// and mirrored for the minus side with background x3 + b0 t. The
// deviations solve d_t phi + (Z_s . grad) phi = -z_s^i with zero data, so
// the reconstructed coordinates are annihilated by L_s = d_t + Z_s . grad
// while every evolved field stays periodic.
struct CharacteristicFrame {
  explicit CharacteristicFrame(const Grid3& g)
      : phi_p{SpectralScalar(g), SpectralScalar(g), SpectralScalar(g)},
        phi_m{SpectralScalar(g), SpectralScalar(g), SpectralScalar(g)} {}
  const Grid3& grid() const { return phi_p[0].grid(); }
  std::array<SpectralScalar, 3>& phi(int side) {
    return side > 0 ? phi_p : phi_m;
  }
  const std::array<SpectralScalar, 3>& phi(int side) const {
    return side > 0 ? phi_p : phi_m;
  }

  std::array<SpectralScalar, 3> phi_p;
  std::array<SpectralScalar, 3> phi_m;
};

// Optical function u_side as a physical field (unwrapped background plus
// periodic deviation).
ScalarField optical_u(const CharacteristicFrame& f, int side, double t,
                      double b0);
// All three transported coordinates of one side.
std::array<ScalarField, 3> transported_coords(const CharacteristicFrame& f,
                                              int side, double t, double b0);

enum class WeightMode { hybrid_log, ideal_power };

struct WeightParams {
  WeightMode mode = WeightMode::hybrid_log;
  double R = 100.0;
  double delta = 0.125;
  double omega() const { return 1.0 + delta; }
  void validate() const {
    if (mode == WeightMode::hybrid_log && R < 100.0)
      throw ConfigError("hybrid_log weights require R >= 100");
    if (R <= 1.0) throw ConfigError("weight offset R must be > 1");
    if (delta <= 0.0 || delta >= 1.0)
      throw ConfigError("weight exponent delta must be in (0,1)");
  }
};

// Base weight of one side. hybrid_log: <w_s> = (R^2 + |x1^s|^2 + |x2^s|^2
// + |u_s|^2)^(1/2). ideal_power: <u_s>^omega = (R^2 + u_s^2)^(omega/2).
// Both are transported by L_s, which is what makes them usable as
// characteristic energy weights.
ScalarField weight_field(const CharacteristicFrame& f, int side, double t,
                         double b0, const WeightParams& w);

struct SeparationReport {
  double min_sep = 0.0;
  double max_sep = 0.0;
  bool bound_ok = true;        // (2 b0 - 1) t <= |u+ - u-| <= (2 b0 + 1) t
  double weight_lhs_min = 0.0;  // min over nodes of <w+><w->
  double weight_rhs = 0.0;      // (R/2) (R^2 + t^2)^(1/2)
  bool weight_ok = true;
  bool reliable = true;  // sup|z| <= 1/2 amplitude monitor
};
SeparationReport separation_report(const CharacteristicFrame& f,
                                   const ElsasserState& s,
                                   const WeightParams& w);

// Inner product of the transversal characteristic direction with the unit
// normal of the side's characteristic hypersurfaces,
//   <L_{-s}, nu_s> = ((Z+ - Z-) . grad u_s) / |grad_{t,x} u_s|,
// using d_t u_s = -Z_s . grad u_s. For small data this concentrates near
// sqrt(2); the transversality window is [7/16, 4].
struct NormalProductReport {
  double min_val = 0.0;
  double max_val = 0.0;
  bool window_ok = true;  // within [7/16, 4]
};
NormalProductReport normal_product(const CharacteristicFrame& f,
                                   const ElsasserState& s, int side);

struct Mat3 {
  double a[3][3];
  static Mat3 identity() {
    Mat3 m{};
    m.a[0][0] = m.a[1][1] = m.a[2][2] = 1.0;
    return m;
  }
  double det() const {
    return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
  }
  double max_dev_identity() const {
    double m = 0.0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        m = std::max(m, std::abs(a[i][j] - (i == j ? 1.0 : 0.0)));
    return m;
  }
};

// Lagrangian markers of the flow psi_side generated by Z_side, with the
// flow-map Jacobian J = d psi / d y carried along each marker:
//   d psi / dt = Z_s(t, psi),    dJ/dt = (grad Z_s)(t, psi) J.
// Positions are unwrapped; fields are sampled at the wrapped position.
struct MarkerCloud {
  int side = +1;
  std::vector<std::array<double, 3>> label;
  std::vector<std::array<double, 3>> pos;
  std::vector<Mat3> jac;
  std::size_t count() const { return label.size(); }
};

// Regular sub-lattice seeding (every `stride`-th node per axis).
MarkerCloud make_marker_cloud(const Grid3& g, int side, int stride);

struct JacobianReport {
  double max_dev_identity = 0.0;  // sup ||J - I||_inf
  double max_det_dev = 0.0;       // sup |det J - 1|
};
JacobianReport jacobian_report(const MarkerCloud& c);

// Duality of frames and markers: u_s interpolated at psi_s(t, y) should
// reproduce the label y3. Returns the max mismatch over markers.
double max_label_mismatch(const MarkerCloud& c, const CharacteristicFrame& f,
                          double t, double b0);

// min over nodes of d3 u_s; must stay positive for graph extraction.
double min_monotonicity(const CharacteristicFrame& f, int side);

}  // namespace alfven
