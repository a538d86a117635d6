#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>

#include "alfven/errors.hpp"

namespace alfven {

// Uniform periodic box. Physical samples are stored x1-fastest, i.e.
// index = i1 + n1*(i2 + n2*i3). Spectral coefficients come from a
// real-to-complex transform along x1, laid out k1-fastest with
// (n1/2+1) retained k1 entries. Wavenumbers are 2*pi/L * m with
// m in {-N/2+1, ..., N/2}.
//
// Transforms are forward-unnormalized; the inverse divides by n1*n2*n3.
// Every quadratic product in the library is dealiased with the 2/3 rule
// (modes with |m| > N/3 on any axis are dropped).
class Grid3 {
 public:
  Grid3(std::array<int, 3> dims, std::array<double, 3> box)
      : n_(dims), box_(box) {
    for (int a = 0; a < 3; ++a) {
      if (n_[a] < 8 || n_[a] % 2 != 0)
        throw ConfigError("grid dims must be even and >= 8");
      if (!(box_[a] > 0.0)) throw ConfigError("box lengths must be positive");
    }
  }

  int n(int axis) const { return n_[axis]; }
  double length(int axis) const { return box_[axis]; }
  double h(int axis) const { return box_[axis] / n_[axis]; }
  double min_h() const { return std::min({h(0), h(1), h(2)}); }
  double volume() const { return box_[0] * box_[1] * box_[2]; }

  std::size_t size() const {
    return static_cast<std::size_t>(n_[0]) * n_[1] * n_[2];
  }
  // Number of retained k1 entries in the half-complex layout.
  int nk1() const { return n_[0] / 2 + 1; }
  std::size_t spectral_size() const {
    return static_cast<std::size_t>(nk1()) * n_[1] * n_[2];
  }

  // Node coordinate, centered so the box is [-L/2, L/2).
  double coord(int axis, int i) const {
    return -0.5 * box_[axis] + h(axis) * i;
  }

  // Fold an array index into the signed mode number {-N/2+1, ..., N/2}.
  int fold(int axis, int idx) const {
    return idx <= n_[axis] / 2 ? idx : idx - n_[axis];
  }

  double wavenumber(int axis, int mode) const {
    return 2.0 * std::numbers::pi / box_[axis] * mode;
  }

  // 2/3-rule cutoff (inclusive) in mode number.
  int cutoff(int axis) const { return n_[axis] / 3; }

  std::size_t index(int i1, int i2, int i3) const {
    return static_cast<std::size_t>(i1) +
           static_cast<std::size_t>(n_[0]) *
               (static_cast<std::size_t>(i2) +
                static_cast<std::size_t>(n_[1]) * i3);
  }
  std::size_t spectral_index(int ik1, int i2, int i3) const {
    return static_cast<std::size_t>(ik1) +
           static_cast<std::size_t>(nk1()) *
               (static_cast<std::size_t>(i2) +
                static_cast<std::size_t>(n_[1]) * i3);
  }

  bool operator==(const Grid3& o) const { return n_ == o.n_ && box_ == o.box_; }
  bool operator!=(const Grid3& o) const { return !(*this == o); }

  std::array<int, 3> dims() const { return n_; }
  std::array<double, 3> box() const { return box_; }

 private:
  std::array<int, 3> n_;
  std::array<double, 3> box_;
};

}  // namespace alfven
