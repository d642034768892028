#pragma once

// Test-side oracles, independent of the library code paths they check.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <vector>

#include "geoflow/chart_geometry.hpp"
#include "geoflow/frame_geometry.hpp"

namespace oracles {

using geoflow::Mat;
using geoflow::Vec;

// tdot = c t^2 escapes at 1/(c t0) (separation of variables).
inline double riccati_escape_time(double c, double t0) { return 1.0 / (c * t0); }

// Frame pairings g(V,Y) = 1, g(X,X) = 1 in component order (V, X, Y).
inline double pairing(const Eigen::Vector3d& u, const Eigen::Vector3d& w) {
  return u[0] * w[2] + u[2] * w[0] + u[1] * w[1];
}

// Koszul pairings 2 g(nabla_A B, C) = g([A,B],C) + g([C,A],B) + g([C,B],A)
// for the frame with [V,X] = [V,Y] = 0, [X,Y] = mu V + h X + f Y; the metric
// terms drop because all frame pairings are constant.
struct FrameKoszul {
  std::array<std::array<Eigen::Vector3d, 3>, 3> lie{};  // [A][B]

  FrameKoszul(double f, double h, double mu) {
    for (auto& row : lie)
      for (auto& e : row) e.setZero();
    lie[1][2] = Eigen::Vector3d(mu, h, f);
    lie[2][1] = -lie[1][2];
  }

  double pair(int a, int b, int c) const {
    Eigen::Vector3d ea = Eigen::Vector3d::Zero(), eb = ea, ec = ea;
    ea[a] = 1.0;
    eb[b] = 1.0;
    ec[c] = 1.0;
    return 0.5 * (pairing(lie[std::size_t(a)][std::size_t(b)], ec) +
                  pairing(lie[std::size_t(c)][std::size_t(a)], eb) +
                  pairing(lie[std::size_t(c)][std::size_t(b)], ea));
  }

  // Reconstruct frame components of nabla_A B from the pairings:
  // w = g(w,Y) V + g(w,X) X + g(w,V) Y.
  Eigen::Vector3d derivative(int a, int b) const {
    return {pair(a, b, 2), pair(a, b, 1), pair(a, b, 0)};
  }
};

// Christoffel symbols from central finite differences of the metric alone.
inline std::vector<Mat> fd_christoffel(const geoflow::ChartMetric& metric, const Vec& p,
                                       double step = 1e-6) {
  const int dim = metric.dim();
  std::vector<Mat> dg;
  dg.resize(std::size_t(dim));
  Vec pp = p, pm = p;
  for (int k = 0; k < dim; ++k) {
    pp[k] = p[k] + step;
    pm[k] = p[k] - step;
    dg[std::size_t(k)] = (metric.g(pp) - metric.g(pm)) / (2.0 * step);
    pp[k] = p[k];
    pm[k] = p[k];
  }
  const Mat ginv = metric.g(p).inverse();
  std::vector<Mat> gamma(std::size_t(dim), Mat::Zero(dim, dim));
  for (int k = 0; k < dim; ++k)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        double s = 0.0;
        for (int l = 0; l < dim; ++l)
          s += ginv(k, l) * (dg[std::size_t(i)](j, l) + dg[std::size_t(j)](i, l) -
                             dg[std::size_t(l)](i, j));
        gamma[std::size_t(k)](i, j) = 0.5 * s;
      }
  return gamma;
}

}  // namespace oracles
