#pragma once

#include <complex>
#include <optional>

#include "alfven/spectral_ops.hpp"

namespace alfven {

// Test hooks that deliberately corrupt one term of the dynamics, used to
// prove the verification suite can detect a broken build.
enum class Mutation { none, pressure_sign };

// Elsasser perturbations around the background field b0*e3. The full
// transport fields are Z+ = z+ + b0*e3 and Z- = z- - b0*e3. Both z+ and
// z- are kept divergence free and 2/3-dealiased; coefficients are the
// primary representation.
struct ElsasserState {
  ElsasserState(const Grid3& g, double mu_, double b0_)
      : t(0.0), mu(mu_), b0(b0_), zp(g), zm(g) {
    if (mu < 0.0) throw ConfigError("viscosity must be >= 0");
    if (!(b0 > 0.0)) throw ConfigError("background field must be > 0");
  }
  const Grid3& grid() const { return zp.grid(); }

  double t;
  double mu;
  double b0;
  SpectralVector3 zp;
  SpectralVector3 zm;
};

struct SolverConfig {
  double dt = 0.01;
  double cfl_max = 0.8;
  bool dealias = true;
  Mutation mutation = Mutation::none;
};

// Dispersion relation of the linearized system: the two mode frequencies
// -i*mu*|xi|^2 +- b0*xi3 (plane waves exp(i(xi.x - f t))).
std::array<std::complex<double>, 2> dispersion(std::array<double, 3> xi,
                                               double mu, double b0);

// Right-hand side of the evolution (time derivatives of z+ and z-) plus
// the pressure field that enters it. Both derivatives come out
// divergence-free (Leray-projected after assembly).
struct ElsasserRhs {
  ElsasserRhs(const Grid3& g) : dzp(g), dzm(g), p(g) {}
  SpectralVector3 dzp;
  SpectralVector3 dzm;
  SpectralScalar p;
};
ElsasserRhs rhs(const ElsasserState& s, bool dealias = true,
                Mutation mutation = Mutation::none);

// Evolve a single Fourier mode of the linearized system on one side and
// fit a complex exponential to the coefficient history.
struct ModeFit {
  double frequency;  // of the z+ branch if side=+1, z- branch if side=-1
  double damping;
};
ModeFit linearized_mode_fit(std::array<int, 3> mode, double mu, double b0,
                            double T, int side = +1,
                            const Grid3* grid = nullptr, double dt = 0.0);

}  // namespace alfven
