#pragma once

#include <cstdint>
#include <string>

#include "alfven/elsasser.hpp"

namespace alfven {

enum class DataFamily {
  low_frequency,
  oscillatory,
  random_band,
  single_mode,
  custom_checkpoint,
};

enum class DataSides { both, plus_only, minus_only };

struct InitialDataSpec {
  DataFamily family = DataFamily::random_band;
  // Meaning depends on the family:
  //   low_frequency: the dilation parameter eps of eps^{5/2} f(eps x)
  //   oscillatory:   E0(0) = amplitude^2 after normalization
  //   random_band:   sup-norm of each generated side
  //   single_mode:   coefficient amplitude of the mode
  double amplitude = 0.01;
  double envelope_scale = 1.0;    // low_frequency: template width multiplier
  int band_lo = 1, band_hi = 4;   // random_band: mode-number band
  double spectral_slope = 0.0;    // random_band: |a(k)|^2 ~ |k|^{-slope}
  std::array<int, 3> mode{0, 0, 1};  // single_mode
  DataSides sides = DataSides::both;
  std::uint64_t seed = 1;
  std::string checkpoint_path;  // custom_checkpoint
};

// Summary of the generated data, reported alongside the state.
struct InitialDataReport {
  std::array<double, 3> sobolev;  // E0, E1, E2 (v/b convention)
  double weighted_norm;           // total weighted data norm at t=0
  double sup_z;                   // max over sides of sup |z|
};

ElsasserState make_initial_data(const InitialDataSpec& spec, const Grid3& g,
                                double mu, double b0,
                                InitialDataReport* report = nullptr,
                                int deriv_budget = 2, double weight_R = 100.0);

// Weighted data norm at t=0, where the transported coordinates coincide
// with the Cartesian ones and the weights are closed-form:
//   sum_{+,-} ( ||log(R^2+|x|^2)^(1/2))^2 z||^2
//            + sum_{k=0..K} ||(R^2+|x|^2)^(1/2) (log..)^2 grad^{k+1} z||^2
//            + mu ||(R^2+|x|^2)^(1/2) (log..)^2 grad^{K+2} z||^2 )
double weighted_data_norm(const ElsasserState& s, int deriv_budget,
                          double weight_R);

}  // namespace alfven
