#pragma once

#include <array>
#include <functional>
#include <optional>
#include <string>

#include "geoflow/errors.hpp"
#include "geoflow/integrator.hpp"

namespace geoflow {

// Null-frame Lorentzian 3-manifold over a 2-torus base: structure functions
// (f, h, mu) of the frame bracket [X,Y] = f Y + h X + mu V, plus the base
// vector fields X*, Y* whose flow realizes the (x, y) motion.  Frame pairings
// are g(V,Y) = 1, g(X,X) = 1, all others zero.
class FrameStructure {
 public:
  using ScalarFn = std::function<double(double x, double y)>;
  using BaseFieldFn = std::function<Eigen::Vector2d(double x, double y)>;

  // Periodicity of f, h, mu (2*pi in each variable) is sampled to 1e-12 and
  // the bracket constraint [X*, Y*] = f Y* + h X* is checked by central
  // finite differences to 1e-8 at seeded sample points.
  FrameStructure(std::string name, ScalarFn f, ScalarFn h, ScalarFn mu,
                 BaseFieldFn base_x, BaseFieldFn base_y);

  const std::string& name() const { return name_; }
  double f(double x, double y) const { return f_(x, y); }
  double h(double x, double y) const { return h_(x, y); }
  double mu(double x, double y) const { return mu_(x, y); }
  Eigen::Vector2d base_x(double x, double y) const { return base_x_(x, y); }
  Eigen::Vector2d base_y(double x, double y) const { return base_y_(x, y); }

 private:
  std::string name_;
  ScalarFn f_, h_, mu_;
  BaseFieldFn base_x_, base_y_;
};

// Frame components are ordered (V, X, Y).
using FrameVec = Eigen::Vector3d;

// The nine covariant derivatives nabla_A B for A, B in {V, X, Y}.
struct ConnectionTable {
  std::array<std::array<FrameVec, 3>, 3> d;  // d[A][B]
  const FrameVec& operator()(int a, int b) const { return d[std::size_t(a)][std::size_t(b)]; }
};

// Indices into the frame.
inline constexpr int kV = 0, kX = 1, kY = 2;

// Pairing of two frame-component vectors under g(V,Y)=1, g(X,X)=1.
inline double frame_pairing(const FrameVec& u, const FrameVec& w) {
  return u[kV] * w[kY] + u[kY] * w[kV] + u[kX] * w[kX];
}

// Velocity decomposition gamma' = a V + b X + c Y with c = alpha throughout;
// beta = g(gamma', gamma') = 2 a alpha + b^2.
struct ReducedState {
  double x, y;    // torus-cover coordinates (never wrapped while integrating)
  double a, b;
  double alpha;   // Clairaut constant g(gamma', V), nonzero in the reduced system
  double beta;    // causal character g(gamma', gamma')
};

ConnectionTable connection_table(const FrameStructure& fr, const Eigen::Vector2d& p);

// (xdot, ydot, adot, bdot); alpha == 0 is rejected (leafwise geodesics are
// handled by the adapted-coordinate chart engine instead).
Eigen::Vector4d reduced_rhs(const FrameStructure& fr, const ReducedState& s);

// Integrator field over the stacked state (x, y, a, b).
Field reduced_field(const FrameStructure& fr, double alpha, double beta);

// Initial a from the pairing constraint beta = 2 a alpha + b^2.
inline double reduced_a0(double alpha, double beta, double b0) {
  return (beta - b0 * b0) / (2.0 * alpha);
}

// The Reeb-band example: f = sin x, h = cos x, mu = 0 with base fields
// X* = cos x d/dx - sin x d/dy, Y* = sin x d/dx + cos x d/dy.
FrameStructure reeb_structure();

FrameStructure frame_structure_by_name(const std::string& name);

struct BandReport {
  bool crossed_band = false;         // x attains two distinct multiples of pi/2
  bool turnaround = false;           // x returns to a previously attained multiple
  double x_min = 0.0, x_max = 0.0;
  bool b_monotone_increasing = false;
};

// Band diagnostics of a trajectory produced by reduced_field (state layout
// (x, y, a, b)); works on the torus-cover lift.
BandReport band_report(const Trajectory& traj);

struct FrameResiduals {
  double torsion = 0.0;        // max |nabla_A B - nabla_B A - [A,B]| component
  double metric_compat = 0.0;  // max |g(nabla_A B, C) + g(B, nabla_A C)|
};

FrameResiduals frame_consistency_residuals(const FrameStructure& fr, const Eigen::Vector2d& p);

}  // namespace geoflow
