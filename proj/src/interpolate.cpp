#include "alfven/interpolate.hpp"

#include <cmath>

#include "alfven/errors.hpp"

namespace alfven {

std::array<double, 4> lagrange_cubic_weights(double s) {
  // Nodes at -1, 0, 1, 2; evaluation point s in [0,1].
  return {
      -s * (s - 1.0) * (s - 2.0) / 6.0,
      (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
      -(s + 1.0) * s * (s - 2.0) / 2.0,
      (s + 1.0) * s * (s - 1.0) / 6.0,
  };
}

std::array<double, 4> lagrange_cubic_dweights(double s) {
  return {
      -(3.0 * s * s - 6.0 * s + 2.0) / 6.0,
      (3.0 * s * s - 4.0 * s - 1.0) / 2.0,
      -(3.0 * s * s - 2.0 * s - 2.0) / 2.0,
      (3.0 * s * s - 1.0) / 6.0,
  };
}

namespace {

struct AxisStencil {
  int idx[4];
  double w[4];
};

AxisStencil axis_stencil(const Grid3& g, int axis, double x) {
  if (!std::isfinite(x)) throw Error("interpolate: non-finite position");
  const int n = g.n(axis);
  const double h = g.h(axis);
  // Map to node units relative to the first node at -L/2.
  double u = (x + 0.5 * g.length(axis)) / h;
  double base = std::floor(u);
  double s = u - base;
  long ib = static_cast<long>(base);
  AxisStencil st;
  auto wrap = [&](long i) {
    long r = i % n;
    if (r < 0) r += n;
    return static_cast<int>(r);
  };
  st.idx[0] = wrap(ib - 1);
  st.idx[1] = wrap(ib);
  st.idx[2] = wrap(ib + 1);
  st.idx[3] = wrap(ib + 2);
  auto w = lagrange_cubic_weights(s);
  for (int k = 0; k < 4; ++k) st.w[k] = w[k];
  return st;
}

}  // namespace

double interpolate(const ScalarField& f, const std::array<double, 3>& x) {
  const Grid3& g = f.grid();
  const AxisStencil s1 = axis_stencil(g, 0, x[0]);
  const AxisStencil s2 = axis_stencil(g, 1, x[1]);
  const AxisStencil s3 = axis_stencil(g, 2, x[2]);
  double acc = 0.0;
  for (int c = 0; c < 4; ++c) {
    double acc2 = 0.0;
    for (int b = 0; b < 4; ++b) {
      double acc1 = 0.0;
      const double* row = f.data() + g.index(0, s2.idx[b], s3.idx[c]);
      for (int a = 0; a < 4; ++a) acc1 += s1.w[a] * row[s1.idx[a]];
      acc2 += s2.w[b] * acc1;
    }
    acc += s3.w[c] * acc2;
  }
  return acc;
}

std::array<double, 3> interpolate(const VectorField3& f,
                                  const std::array<double, 3>& x) {
  return {interpolate(f[0], x), interpolate(f[1], x), interpolate(f[2], x)};
}

}  // namespace alfven
