#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "geoflow/errors.hpp"
#include "geoflow/integrator.hpp"

namespace geoflow {

// A scalar function of a chart point together with its analytic gradient.
struct AnalyticScalar {
  std::function<double(const Vec&)> value;
  std::function<Vec(const Vec&)> grad;
};

// Coordinate-chart pseudo-Riemannian metric with analytic first derivatives.
// dg(p)[k](i,j) = d g_ij / d x^k.  The derivatives are validated against
// central finite differences at construction (20 seeded points inside the
// sample box, step 1e-5, relative error <= 1e-6); the geodesic loop itself
// never differentiates numerically.
class ChartMetric {
 public:
  using MetricFn = std::function<Mat(const Vec&)>;
  using MetricDerivFn = std::function<std::vector<Mat>(const Vec&)>;

  ChartMetric(std::string name, int dim, MetricFn g, MetricDerivFn dg,
              DomainPredicate domain, Vec sample_lo, Vec sample_hi);

  const std::string& name() const { return name_; }
  int dim() const { return dim_; }
  Mat g(const Vec& p) const { return g_(p); }
  std::vector<Mat> dg(const Vec& p) const { return dg_(p); }
  bool in_domain(const Vec& p) const { return !domain_ || domain_(p); }
  const DomainPredicate& domain() const { return domain_; }
  const Vec& sample_lo() const { return sample_lo_; }
  const Vec& sample_hi() const { return sample_hi_; }

 private:
  std::string name_;
  int dim_;
  MetricFn g_;
  MetricDerivFn dg_;
  DomainPredicate domain_;
  Vec sample_lo_, sample_hi_;
};

struct ChartState {
  Vec position;
  Vec velocity;
};

// A vector field with its analytic Jacobian, derivative(p)(i,j) = d V^i / d x^j.
// Validated against finite differences like the metric derivatives.
class VectorFieldSpec {
 public:
  using ValueFn = std::function<Vec(const Vec&)>;
  using DerivFn = std::function<Mat(const Vec&)>;

  VectorFieldSpec(std::string name, int dim, ValueFn value, DerivFn derivative,
                  const Vec& sample_lo, const Vec& sample_hi,
                  const DomainPredicate& domain = {});

  const std::string& name() const { return name_; }
  Vec value(const Vec& p) const { return value_(p); }
  Mat derivative(const Vec& p) const { return derivative_(p); }

 private:
  std::string name_;
  ValueFn value_;
  DerivFn derivative_;
};

// Levi-Civita symbols; result[k](i,j) = Gamma^k_ij, symmetric in (i,j).
std::vector<Mat> christoffel(const ChartMetric& metric, const Vec& p);

// (velocity, acceleration) of the second-order geodesic system.
std::pair<Vec, Vec> geodesic_rhs(const ChartMetric& metric, const ChartState& s);

// Lie derivative (L_V g)_ij; zero iff V is Killing at p.
Mat killing_residual(const ChartMetric& metric, const VectorFieldSpec& V, const Vec& p);

// Clairaut pairing g_p(velocity, V(p)).
double clairaut(const ChartMetric& metric, const VectorFieldSpec& V, const ChartState& s);

// g_p(velocity, velocity).
double energy(const ChartMetric& metric, const ChartState& s);

// First-order field on the stacked state y = (position, velocity) for the
// integrator; a singular or out-of-chart metric evaluation yields NaN output,
// which the integrator treats as a field failure.
Field geodesic_field(const ChartMetric& metric);

// Euclidean coordinate field d/dx^index with vanishing Jacobian.
VectorFieldSpec coordinate_field(const ChartMetric& metric, int index);

// Built-in metrics (CLI-addressable names).
ChartMetric flat3_metric();          // "flat3": 2 du dv + dx^2 on R^3, coords (u,v,x)
ChartMetric clifton_pohl_metric();   // "clifton-pohl": 2 dx dy/(x^2+y^2) on R^2\{0}
ChartMetric pp_wave_cos_metric();    // "pp-wave-cos": du dv + cos(z) du^2 + dz^2, coords (u,v,z)
ChartMetric warped_sol_metric();     // "warped-sol": (2+sin z)(dx^2-dy^2) + dz^2, coords (x,y,z)
ChartMetric hopf_halfspace_metric(); // "hopf-halfspace": 2 du dv + dx^2 on v > 0, coords (v,x,u)

// Boost field y d/dx + x d/dy, Killing for "warped-sol".
VectorFieldSpec warped_sol_boost();

// Adapted-coordinate family 2 du dv + H du^2 + sum W_i du dx^i + sum h_ij dx^i dx^j
// in coordinates (u, v, x_1..x_n).  All structure functions may depend on the
// full point; the leafwise reduction expects h independent of v, which is
// documented, not enforced.
ChartMetric kundt_metric(int transverse_dim, AnalyticScalar H,
                         std::vector<AnalyticScalar> W,
                         std::vector<std::vector<AnalyticScalar>> h);

// Lookup by CLI name; input_error for unknown names ("kundt" requires the
// expression-based constructor in the CLI).
ChartMetric chart_metric_by_name(const std::string& name);

}  // namespace geoflow
