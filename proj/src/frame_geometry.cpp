#include "geoflow/frame_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "geoflow/rng.hpp"

namespace geoflow {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kPeriodTol = 1e-12;
constexpr double kBracketTol = 1e-8;

Eigen::Vector2d fd_bracket(const FrameStructure::BaseFieldFn& X,
                           const FrameStructure::BaseFieldFn& Y,
                           double x, double y) {
  const double d = 1e-5;
  auto jac = [&](const FrameStructure::BaseFieldFn& F) {
    Eigen::Matrix2d J;
    J.col(0) = (F(x + d, y) - F(x - d, y)) / (2.0 * d);
    J.col(1) = (F(x, y + d) - F(x, y - d)) / (2.0 * d);
    return J;
  };
  // [X,Y] = (DY) X - (DX) Y
  return jac(Y) * X(x, y) - jac(X) * Y(x, y);
}

}  // namespace

FrameStructure::FrameStructure(std::string name, ScalarFn f, ScalarFn h, ScalarFn mu,
                               BaseFieldFn base_x, BaseFieldFn base_y)
    : name_(std::move(name)), f_(std::move(f)), h_(std::move(h)), mu_(std::move(mu)),
      base_x_(std::move(base_x)), base_y_(std::move(base_y)) {
  SeededRng rng(0x6672616d65ull);
  for (int s = 0; s < 20; ++s) {
    const double x = rng.uniform(-kTwoPi, kTwoPi);
    const double y = rng.uniform(-kTwoPi, kTwoPi);
    for (const auto* fn : {&f_, &h_, &mu_}) {
      const double v = (*fn)(x, y);
      if (std::abs((*fn)(x + kTwoPi, y) - v) > kPeriodTol ||
          std::abs((*fn)(x, y + kTwoPi) - v) > kPeriodTol)
        throw invariant_violation(name_ + ": structure function is not 2*pi-periodic");
    }
    const Eigen::Vector2d lhs = fd_bracket(base_x_, base_y_, x, y);
    const Eigen::Vector2d rhs = f_(x, y) * base_y_(x, y) + h_(x, y) * base_x_(x, y);
    const double scale = std::max(1.0, std::max(base_x_(x, y).cwiseAbs().maxCoeff(),
                                                base_y_(x, y).cwiseAbs().maxCoeff()));
    if ((lhs - rhs).cwiseAbs().maxCoeff() > kBracketTol * scale)
      throw invariant_violation(name_ + ": [X*,Y*] != f Y* + h X* at sample point");
  }
}

ConnectionTable connection_table(const FrameStructure& fr, const Eigen::Vector2d& p) {
  const double f = fr.f(p[0], p[1]);
  const double h = fr.h(p[0], p[1]);
  const double mu = fr.mu(p[0], p[1]);
  ConnectionTable t;
  for (auto& row : t.d)
    for (auto& e : row) e.setZero();
  t.d[kV][kX] = t.d[kX][kV] = FrameVec(-0.5 * f, 0.0, 0.0);   // -f/2 V
  t.d[kV][kY] = t.d[kY][kV] = FrameVec(0.0, 0.5 * f, 0.0);    //  f/2 X
  t.d[kX][kX] = FrameVec(-h, 0.0, 0.0);                        // -h V
  t.d[kX][kY] = FrameVec(0.0, h, 0.5 * f);                     //  h X + f/2 Y
  t.d[kY][kX] = FrameVec(-mu, 0.0, -0.5 * f);                  // -mu V - f/2 Y
  t.d[kY][kY] = FrameVec(0.0, mu, 0.0);                        //  mu X
  return t;
}

Eigen::Vector4d reduced_rhs(const FrameStructure& fr, const ReducedState& s) {
  if (s.alpha == 0.0)
    throw input_error("reduced_rhs: alpha = 0 is leafwise; use the adapted-coordinate engine");
  const double f = fr.f(s.x, s.y);
  const double h = fr.h(s.x, s.y);
  const double mu = fr.mu(s.x, s.y);
  const double b = s.b, al = s.alpha, be = s.beta;

  const Eigen::Vector2d base = b * fr.base_x(s.x, s.y) + al * fr.base_y(s.x, s.y);
  const double bdot = 0.5 * f * b * b - al * h * b - (0.5 * be * f + al * al * mu);
  const double adot = -f / (2.0 * al) * b * b * b + h * b * b +
                      (mu * al + be / (2.0 * al) * f) * b;
  return {base[0], base[1], adot, bdot};
}

Field reduced_field(const FrameStructure& fr, double alpha, double beta) {
  if (alpha == 0.0)
    throw input_error("reduced_field: alpha = 0 is leafwise; use the adapted-coordinate engine");
  return [fr, alpha, beta](const Vec& y, Vec& dydt) {
    const Eigen::Vector4d d =
        reduced_rhs(fr, ReducedState{y[0], y[1], y[2], y[3], alpha, beta});
    dydt = d;
  };
}

FrameStructure reeb_structure() {
  return FrameStructure(
      "reeb",
      [](double x, double) { return std::sin(x); },
      [](double x, double) { return std::cos(x); },
      [](double, double) { return 0.0; },
      [](double x, double) { return Eigen::Vector2d(std::cos(x), -std::sin(x)); },
      [](double x, double) { return Eigen::Vector2d(std::sin(x), std::cos(x)); });
}

FrameStructure frame_structure_by_name(const std::string& name) {
  if (name == "reeb") return reeb_structure();
  throw input_error("unknown frame structure: " + name);
}

BandReport band_report(const Trajectory& traj) {
  BandReport rep;
  if (traj.states.empty()) return rep;
  const double half_pi = 0.5 * std::numbers::pi;

  rep.x_min = rep.x_max = traj.states.front()[0];
  rep.b_monotone_increasing = traj.states.size() > 1;

  // Attainment events of pi/2-multiples, in trajectory order.  A sample on a
  // multiple (exactly, as stored) is a contact; a segment passing strictly
  // across a multiple is a crossing.  Consecutive samples resting on the same
  // multiple form a single event.
  std::vector<long> events;
  auto contact = [&](double x) -> std::optional<long> {
    const long k = std::lround(x / half_pi);
    return x == double(k) * half_pi ? std::optional<long>(k) : std::nullopt;
  };

  double prev_x = traj.states.front()[0];
  double prev_b = traj.states.front()[3];
  std::optional<long> prev_contact = contact(prev_x);
  if (prev_contact) events.push_back(*prev_contact);

  for (std::size_t i = 1; i < traj.states.size(); ++i) {
    const double x = traj.states[i][0];
    const double b = traj.states[i][3];
    rep.x_min = std::min(rep.x_min, x);
    rep.x_max = std::max(rep.x_max, x);
    if (!(b > prev_b)) rep.b_monotone_increasing = false;

    bool crossed_now = false;
    if (x > prev_x) {
      for (long k = long(std::floor(prev_x / half_pi)) + 1;
           double(k) * half_pi < x; ++k) {
        if (double(k) * half_pi <= prev_x) continue;
        events.push_back(k);
        crossed_now = true;
      }
    } else if (x < prev_x) {
      for (long k = long(std::ceil(prev_x / half_pi)) - 1;
           double(k) * half_pi > x; --k) {
        if (double(k) * half_pi >= prev_x) continue;
        events.push_back(k);
        crossed_now = true;
      }
    }
    const std::optional<long> c = contact(x);
    if (c && !(prev_contact && *prev_contact == *c && !crossed_now)) events.push_back(*c);
    prev_contact = c;
    prev_x = x;
    prev_b = b;
  }

  std::vector<long> distinct;
  for (long k : events)
    if (std::find(distinct.begin(), distinct.end(), k) == distinct.end())
      distinct.push_back(k);
  rep.crossed_band = distinct.size() >= 2;
  for (std::size_t i = 0; i + 1 < events.size() && !rep.turnaround; ++i)
    for (std::size_t j = i + 1; j < events.size(); ++j)
      if (events[i] == events[j]) { rep.turnaround = true; break; }
  return rep;
}

FrameResiduals frame_consistency_residuals(const FrameStructure& fr, const Eigen::Vector2d& p) {
  const ConnectionTable t = connection_table(fr, p);
  const double f = fr.f(p[0], p[1]);
  const double h = fr.h(p[0], p[1]);
  const double mu = fr.mu(p[0], p[1]);

  // Frame brackets: [V,X] = [V,Y] = 0, [X,Y] = mu V + h X + f Y.
  std::array<std::array<FrameVec, 3>, 3> lie;
  for (auto& row : lie)
    for (auto& e : row) e.setZero();
  lie[kX][kY] = FrameVec(mu, h, f);
  lie[kY][kX] = -lie[kX][kY];

  FrameResiduals r;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      const FrameVec torsion = t(a, b) - t(b, a) - lie[std::size_t(a)][std::size_t(b)];
      r.torsion = std::max(r.torsion, torsion.cwiseAbs().maxCoeff());
      for (int c = 0; c < 3; ++c) {
        // A g(B,C) vanishes: all frame pairings are constant.
        FrameVec eb = FrameVec::Zero(), ec = FrameVec::Zero();
        eb[b] = 1.0;
        ec[c] = 1.0;
        const double compat = frame_pairing(t(a, b), ec) + frame_pairing(eb, t(a, c));
        r.metric_compat = std::max(r.metric_compat, std::abs(compat));
      }
    }
  return r;
}

}  // namespace geoflow
