#pragma once

#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "alfven/grid.hpp"

namespace alfven {

class ScalarField {
 public:
  explicit ScalarField(const Grid3& g) : grid_(g), v_(g.size(), 0.0) {}

  static ScalarField from_function(
      const Grid3& g, const std::function<double(double, double, double)>& f) {
    ScalarField out(g);
    std::size_t p = 0;
    for (int i3 = 0; i3 < g.n(2); ++i3)
      for (int i2 = 0; i2 < g.n(1); ++i2)
        for (int i1 = 0; i1 < g.n(0); ++i1)
          out.v_[p++] = f(g.coord(0, i1), g.coord(1, i2), g.coord(2, i3));
    return out;
  }

  const Grid3& grid() const { return grid_; }
  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }
  std::size_t size() const { return v_.size(); }
  double& operator[](std::size_t i) { return v_[i]; }
  double operator[](std::size_t i) const { return v_[i]; }
  double at(int i1, int i2, int i3) const { return v_[grid_.index(i1, i2, i3)]; }
  double& at(int i1, int i2, int i3) { return v_[grid_.index(i1, i2, i3)]; }

  ScalarField& operator*=(double s) {
    for (auto& x : v_) x *= s;
    return *this;
  }
  ScalarField& operator+=(const ScalarField& o) {
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }

 private:
  Grid3 grid_;
  std::vector<double> v_;
};

class SpectralScalar {
 public:
  explicit SpectralScalar(const Grid3& g)
      : grid_(g), c_(g.spectral_size(), {0.0, 0.0}) {}

  const Grid3& grid() const { return grid_; }
  std::complex<double>* data() { return c_.data(); }
  const std::complex<double>* data() const { return c_.data(); }
  std::size_t size() const { return c_.size(); }
  std::complex<double>& operator[](std::size_t i) { return c_[i]; }
  const std::complex<double>& operator[](std::size_t i) const { return c_[i]; }
  std::complex<double> at(int ik1, int i2, int i3) const {
    return c_[grid_.spectral_index(ik1, i2, i3)];
  }
  std::complex<double>& at(int ik1, int i2, int i3) {
    return c_[grid_.spectral_index(ik1, i2, i3)];
  }

  SpectralScalar& operator*=(double s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  SpectralScalar& operator+=(const SpectralScalar& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  SpectralScalar& operator-=(const SpectralScalar& o) {
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }

 private:
  Grid3 grid_;
  std::vector<std::complex<double>> c_;
};

struct VectorField3 {
  explicit VectorField3(const Grid3& g) : c{ScalarField(g), ScalarField(g), ScalarField(g)} {}
  const Grid3& grid() const { return c[0].grid(); }
  ScalarField& operator[](int i) { return c[i]; }
  const ScalarField& operator[](int i) const { return c[i]; }
  std::array<ScalarField, 3> c;
};

struct SpectralVector3 {
  explicit SpectralVector3(const Grid3& g)
      : c{SpectralScalar(g), SpectralScalar(g), SpectralScalar(g)} {}
  const Grid3& grid() const { return c[0].grid(); }
  SpectralScalar& operator[](int i) { return c[i]; }
  const SpectralScalar& operator[](int i) const { return c[i]; }
  SpectralVector3& operator*=(double s) {
    for (auto& f : c) f *= s;
    return *this;
  }
  SpectralVector3& operator+=(const SpectralVector3& o) {
    for (int i = 0; i < 3; ++i) c[i] += o.c[i];
    return *this;
  }
  SpectralVector3& operator-=(const SpectralVector3& o) {
    for (int i = 0; i < 3; ++i) c[i] -= o.c[i];
    return *this;
  }
  std::array<SpectralScalar, 3> c;
};

}  // namespace alfven
