#include "geoflow/chart_geometry.hpp"

#include <cmath>
#include <limits>

#include "geoflow/rng.hpp"

namespace geoflow {

namespace {

constexpr double kFdStep = 1e-5;
constexpr double kFdRelTol = 1e-6;
constexpr int kFdSamples = 20;
constexpr std::uint64_t kValidationSeed = 0x67656f666c6f77ull;

Vec draw_domain_point(SeededRng& rng, const Vec& lo, const Vec& hi,
                      const DomainPredicate& domain) {
  Vec p(lo.size());
  for (int attempt = 0; attempt < 1000; ++attempt) {
    for (Eigen::Index i = 0; i < lo.size(); ++i) p[i] = rng.uniform(lo[i], hi[i]);
    if (!domain || domain(p)) return p;
  }
  throw invariant_violation("sample box does not intersect the domain");
}

// Shared Levi-Civita core; the public entry point adds the domain gate.
std::vector<Mat> christoffel_impl(const Mat& g, const std::vector<Mat>& dgs) {
  const int dim = int(g.rows());
  const double scale = g.cwiseAbs().maxCoeff();
  Eigen::PartialPivLU<Mat> lu(g);
  if (scale == 0.0 || std::abs(lu.determinant()) <= 1e-12 * std::pow(scale, dim))
    throw invariant_violation("metric is singular at the evaluation point");

  std::vector<Mat> gamma(std::size_t(dim), Mat::Zero(dim, dim));
  Vec rhs(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i; j < dim; ++j) {
      for (int l = 0; l < dim; ++l)
        rhs[l] = 0.5 * (dgs[std::size_t(i)](j, l) + dgs[std::size_t(j)](i, l) -
                        dgs[std::size_t(l)](i, j));
      const Vec gk = lu.solve(rhs);
      for (int k = 0; k < dim; ++k) {
        gamma[std::size_t(k)](i, j) = gk[k];
        gamma[std::size_t(k)](j, i) = gk[k];
      }
    }
  return gamma;
}

}  // namespace

ChartMetric::ChartMetric(std::string name, int dim, MetricFn g, MetricDerivFn dg,
                         DomainPredicate domain, Vec sample_lo, Vec sample_hi)
    : name_(std::move(name)), dim_(dim), g_(std::move(g)), dg_(std::move(dg)),
      domain_(std::move(domain)), sample_lo_(std::move(sample_lo)),
      sample_hi_(std::move(sample_hi)) {
  if (dim_ <= 0) throw input_error("ChartMetric: dim must be positive");
  if (sample_lo_.size() != dim_ || sample_hi_.size() != dim_)
    throw input_error("ChartMetric: sample box has wrong dimension");

  SeededRng rng(kValidationSeed);
  for (int s = 0; s < kFdSamples; ++s) {
    const Vec p = draw_domain_point(rng, sample_lo_, sample_hi_, domain_);
    const Mat gp = g_(p);
    if (gp.rows() != dim_ || gp.cols() != dim_)
      throw invariant_violation(name_ + ": metric callable returns wrong shape");
    if ((gp - gp.transpose()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, gp.cwiseAbs().maxCoeff()))
      throw invariant_violation(name_ + ": metric is not symmetric");
    const auto dgs = dg_(p);
    if (int(dgs.size()) != dim_)
      throw invariant_violation(name_ + ": metric derivative returns wrong shape");
    Vec pp = p, pm = p;
    for (int k = 0; k < dim_; ++k) {
      pp[k] = p[k] + kFdStep;
      pm[k] = p[k] - kFdStep;
      const Mat fd = (g_(pp) - g_(pm)) / (2.0 * kFdStep);
      const double rel = (fd - dgs[std::size_t(k)]).cwiseAbs().maxCoeff() /
                         std::max(1.0, dgs[std::size_t(k)].cwiseAbs().maxCoeff());
      if (!(rel <= kFdRelTol))
        throw invariant_violation(name_ + ": analytic dg disagrees with finite differences");
      pp[k] = p[k];
      pm[k] = p[k];
    }
  }
}

VectorFieldSpec::VectorFieldSpec(std::string name, int dim, ValueFn value, DerivFn derivative,
                                 const Vec& sample_lo, const Vec& sample_hi,
                                 const DomainPredicate& domain)
    : name_(std::move(name)), value_(std::move(value)), derivative_(std::move(derivative)) {
  SeededRng rng(kValidationSeed ^ 0x5642ull);
  for (int s = 0; s < kFdSamples; ++s) {
    const Vec p = draw_domain_point(rng, sample_lo, sample_hi, domain);
    const Mat d = derivative_(p);
    Vec pp = p, pm = p;
    for (int j = 0; j < dim; ++j) {
      pp[j] = p[j] + kFdStep;
      pm[j] = p[j] - kFdStep;
      const Vec fd = (value_(pp) - value_(pm)) / (2.0 * kFdStep);
      const double rel = (fd - d.col(j)).cwiseAbs().maxCoeff() /
                         std::max(1.0, d.cwiseAbs().maxCoeff());
      if (!(rel <= kFdRelTol))
        throw invariant_violation(name_ + ": analytic Jacobian disagrees with finite differences");
      pp[j] = p[j];
      pm[j] = p[j];
    }
  }
}

std::vector<Mat> christoffel(const ChartMetric& metric, const Vec& p) {
  if (p.size() != metric.dim()) throw input_error("christoffel: point has wrong dimension");
  if (!metric.in_domain(p)) throw input_error("christoffel: point outside chart domain");
  return christoffel_impl(metric.g(p), metric.dg(p));
}

std::pair<Vec, Vec> geodesic_rhs(const ChartMetric& metric, const ChartState& s) {
  if (!metric.in_domain(s.position))
    throw input_error("geodesic_rhs: position outside chart domain");
  const auto gamma = christoffel_impl(metric.g(s.position), metric.dg(s.position));
  const int dim = metric.dim();
  Vec acc(dim);
  for (int k = 0; k < dim; ++k)
    acc[k] = -s.velocity.dot(gamma[std::size_t(k)] * s.velocity);
  return {s.velocity, acc};
}

Mat killing_residual(const ChartMetric& metric, const VectorFieldSpec& V, const Vec& p) {
  if (!metric.in_domain(p)) throw input_error("killing_residual: point outside chart domain");
  const Mat g = metric.g(p);
  const auto dgs = metric.dg(p);
  const Vec v = V.value(p);
  const Mat d = V.derivative(p);
  Mat lie = d.transpose() * g + g * d;
  for (int k = 0; k < metric.dim(); ++k) lie += v[k] * dgs[std::size_t(k)];
  return lie;
}

double clairaut(const ChartMetric& metric, const VectorFieldSpec& V, const ChartState& s) {
  return s.velocity.dot(metric.g(s.position) * V.value(s.position));
}

double energy(const ChartMetric& metric, const ChartState& s) {
  return s.velocity.dot(metric.g(s.position) * s.velocity);
}

Field geodesic_field(const ChartMetric& metric) {
  const int dim = metric.dim();
  return [metric, dim](const Vec& y, Vec& dydt) {
    const Vec pos = y.head(dim);
    const Vec vel = y.tail(dim);
    try {
      const auto gamma = christoffel_impl(metric.g(pos), metric.dg(pos));
      dydt.head(dim) = vel;
      for (int k = 0; k < dim; ++k)
        dydt[dim + k] = -vel.dot(gamma[std::size_t(k)] * vel);
    } catch (const invariant_violation&) {
      dydt.setConstant(std::numeric_limits<double>::quiet_NaN());
    }
  };
}

VectorFieldSpec coordinate_field(const ChartMetric& metric, int index) {
  const int dim = metric.dim();
  if (index < 0 || index >= dim) throw input_error("coordinate_field: index out of range");
  Vec e = Vec::Zero(dim);
  e[index] = 1.0;
  return VectorFieldSpec("d/dx" + std::to_string(index), dim,
                         [e](const Vec&) { return e; },
                         [dim](const Vec&) { return Mat::Zero(dim, dim); },
                         metric.sample_lo(), metric.sample_hi(), metric.domain());
}

ChartMetric flat3_metric() {
  Mat g(3, 3);
  g << 0, 1, 0,
       1, 0, 0,
       0, 0, 1;
  Vec lo = Vec::Constant(3, -5.0), hi = Vec::Constant(3, 5.0);
  return ChartMetric("flat3", 3,
                     [g](const Vec&) { return g; },
                     [](const Vec&) { return std::vector<Mat>(3, Mat::Zero(3, 3)); },
                     {}, lo, hi);
}

ChartMetric clifton_pohl_metric() {
  auto g = [](const Vec& p) {
    const double f = 1.0 / (p[0] * p[0] + p[1] * p[1]);
    Mat m(2, 2);
    m << 0, f,
         f, 0;
    return m;
  };
  auto dg = [](const Vec& p) {
    const double r2 = p[0] * p[0] + p[1] * p[1];
    const double f2 = 1.0 / (r2 * r2);
    std::vector<Mat> d(2, Mat::Zero(2, 2));
    d[0](0, 1) = d[0](1, 0) = -2.0 * p[0] * f2;
    d[1](0, 1) = d[1](1, 0) = -2.0 * p[1] * f2;
    return d;
  };
  // Universal cover R^2 minus a small disc around the puncture.
  auto domain = [](const Vec& p) { return p[0] * p[0] + p[1] * p[1] > 1e-16; };
  Vec lo(2), hi(2);
  lo << 0.3, 0.3;
  hi << 2.0, 2.0;
  return ChartMetric("clifton-pohl", 2, g, dg, domain, lo, hi);
}

ChartMetric pp_wave_cos_metric() {
  auto g = [](const Vec& p) {
    Mat m(3, 3);
    m << std::cos(p[2]), 0.5, 0,
         0.5,            0,   0,
         0,              0,   1;
    return m;
  };
  auto dg = [](const Vec& p) {
    std::vector<Mat> d(3, Mat::Zero(3, 3));
    d[2](0, 0) = -std::sin(p[2]);
    return d;
  };
  Vec lo = Vec::Constant(3, -5.0), hi = Vec::Constant(3, 5.0);
  return ChartMetric("pp-wave-cos", 3, g, dg, {}, lo, hi);
}

ChartMetric warped_sol_metric() {
  auto g = [](const Vec& p) {
    const double f = 2.0 + std::sin(p[2]);
    Mat m = Mat::Zero(3, 3);
    m(0, 0) = f;
    m(1, 1) = -f;
    m(2, 2) = 1.0;
    return m;
  };
  auto dg = [](const Vec& p) {
    std::vector<Mat> d(3, Mat::Zero(3, 3));
    d[2](0, 0) = std::cos(p[2]);
    d[2](1, 1) = -std::cos(p[2]);
    return d;
  };
  Vec lo = Vec::Constant(3, -5.0), hi = Vec::Constant(3, 5.0);
  return ChartMetric("warped-sol", 3, g, dg, {}, lo, hi);
}

ChartMetric hopf_halfspace_metric() {
  // Coordinates (v, x, u) on the half-space v > 0.
  Mat g(3, 3);
  g << 0, 0, 1,
       0, 1, 0,
       1, 0, 0;
  auto domain = [](const Vec& p) { return p[0] > 0.0; };
  Vec lo(3), hi(3);
  lo << 0.2, -5.0, -5.0;
  hi << 8.0, 5.0, 5.0;
  return ChartMetric("hopf-halfspace", 3,
                     [g](const Vec&) { return g; },
                     [](const Vec&) { return std::vector<Mat>(3, Mat::Zero(3, 3)); },
                     domain, lo, hi);
}

VectorFieldSpec warped_sol_boost() {
  const ChartMetric m = warped_sol_metric();
  auto value = [](const Vec& p) {
    Vec v(3);
    v << p[1], p[0], 0.0;
    return v;
  };
  auto deriv = [](const Vec&) {
    Mat d = Mat::Zero(3, 3);
    d(0, 1) = 1.0;
    d(1, 0) = 1.0;
    return d;
  };
  return VectorFieldSpec("boost y d/dx + x d/dy", 3, value, deriv,
                         m.sample_lo(), m.sample_hi());
}

ChartMetric kundt_metric(int transverse_dim, AnalyticScalar H,
                         std::vector<AnalyticScalar> W,
                         std::vector<std::vector<AnalyticScalar>> h) {
  const int n = transverse_dim;
  if (n < 1) throw input_error("kundt_metric: transverse dimension must be >= 1");
  if (int(W.size()) != n) throw input_error("kundt_metric: expected n entries in W");
  if (int(h.size()) != n) throw input_error("kundt_metric: expected n x n entries in h");
  for (const auto& row : h)
    if (int(row.size()) != n) throw input_error("kundt_metric: expected n x n entries in h");
  const int dim = n + 2;

  auto g = [n, dim, H, W, h](const Vec& p) {
    Mat m = Mat::Zero(dim, dim);
    m(0, 0) = H.value(p);
    m(0, 1) = m(1, 0) = 1.0;
    for (int i = 0; i < n; ++i) {
      m(0, 2 + i) = m(2 + i, 0) = 0.5 * W[std::size_t(i)].value(p);
      for (int j = i; j < n; ++j) {
        const double hij = 0.5 * (h[std::size_t(i)][std::size_t(j)].value(p) +
                                  h[std::size_t(j)][std::size_t(i)].value(p));
        m(2 + i, 2 + j) = m(2 + j, 2 + i) = hij;
      }
    }
    return m;
  };
  auto dg = [n, dim, H, W, h](const Vec& p) {
    std::vector<Mat> d(std::size_t(dim), Mat::Zero(dim, dim));
    const Vec dH = H.grad(p);
    for (int k = 0; k < dim; ++k) d[std::size_t(k)](0, 0) = dH[k];
    for (int i = 0; i < n; ++i) {
      const Vec dW = W[std::size_t(i)].grad(p);
      for (int k = 0; k < dim; ++k)
        d[std::size_t(k)](0, 2 + i) = d[std::size_t(k)](2 + i, 0) = 0.5 * dW[k];
      for (int j = i; j < n; ++j) {
        const Vec dh = 0.5 * (h[std::size_t(i)][std::size_t(j)].grad(p) +
                              h[std::size_t(j)][std::size_t(i)].grad(p));
        for (int k = 0; k < dim; ++k)
          d[std::size_t(k)](2 + i, 2 + j) = d[std::size_t(k)](2 + j, 2 + i) = dh[k];
      }
    }
    return d;
  };
  Vec lo = Vec::Constant(dim, -2.0), hi = Vec::Constant(dim, 2.0);
  return ChartMetric("kundt", dim, g, dg, {}, lo, hi);
}

ChartMetric chart_metric_by_name(const std::string& name) {
  if (name == "flat3") return flat3_metric();
  if (name == "clifton-pohl") return clifton_pohl_metric();
  if (name == "pp-wave-cos") return pp_wave_cos_metric();
  if (name == "warped-sol") return warped_sol_metric();
  if (name == "hopf-halfspace") return hopf_halfspace_metric();
  throw input_error("unknown chart metric: " + name);
}

}  // namespace geoflow
