#include <doctest.h>

#include <cmath>
#include <numbers>

#include "geoflow/frame_geometry.hpp"
#include "geoflow/rng.hpp"
#include "oracles.hpp"

using namespace geoflow;

namespace {

constexpr double kPi = std::numbers::pi;

// Reeb base fields with a free periodic mu: the bracket constraint only sees
// f and h, so mu can be varied independently.
FrameStructure reeb_with_mu(FrameStructure::ScalarFn mu) {
  return FrameStructure(
      "reeb-mu",
      [](double x, double) { return std::sin(x); },
      [](double x, double) { return std::cos(x); }, std::move(mu),
      [](double x, double) { return Eigen::Vector2d(std::cos(x), -std::sin(x)); },
      [](double x, double) { return Eigen::Vector2d(std::sin(x), std::cos(x)); });
}

Trajectory synthetic_x_path(const std::vector<double>& xs) {
  Trajectory tr;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    tr.times.push_back(double(i));
    Vec s(4);
    s << xs[i], 0.0, 0.0, double(i);  // b strictly increasing
    tr.states.push_back(s);
  }
  tr.verdict.kind = VerdictKind::Completed;
  tr.verdict.t = tr.times.back();
  return tr;
}

}  // namespace

TEST_CASE("connection table closed forms") {
  const auto fr = reeb_with_mu([](double x, double y) { return 0.3 + 0.1 * std::cos(x + y); });
  SeededRng rng(3);
  for (int rep = 0; rep < 50; ++rep) {
    const Eigen::Vector2d p(rng.uniform(-6, 6), rng.uniform(-6, 6));
    const double f = fr.f(p[0], p[1]), h = fr.h(p[0], p[1]), mu = fr.mu(p[0], p[1]);
    const auto t = connection_table(fr, p);

    CHECK(t(kV, kV).norm() == 0.0);
    CHECK((t(kX, kV) - FrameVec(-0.5 * f, 0, 0)).norm() == 0.0);
    CHECK((t(kV, kX) - FrameVec(-0.5 * f, 0, 0)).norm() == 0.0);
    CHECK((t(kY, kV) - FrameVec(0, 0.5 * f, 0)).norm() == 0.0);
    CHECK((t(kV, kY) - FrameVec(0, 0.5 * f, 0)).norm() == 0.0);
    CHECK((t(kX, kX) - FrameVec(-h, 0, 0)).norm() == 0.0);
    CHECK((t(kX, kY) - FrameVec(0, h, 0.5 * f)).norm() == 0.0);
    CHECK((t(kY, kX) - FrameVec(-mu, 0, -0.5 * f)).norm() == 0.0);
    CHECK((t(kY, kY) - FrameVec(0, mu, 0)).norm() == 0.0);
  }
}

TEST_CASE("koszul oracle reproduces the table and the pairing values") {
  const auto fr = reeb_with_mu([](double x, double y) { return std::sin(x) * std::cos(y); });
  SeededRng rng(5);
  for (int rep = 0; rep < 100; ++rep) {
    const Eigen::Vector2d p(rng.uniform(-6, 6), rng.uniform(-6, 6));
    const double f = fr.f(p[0], p[1]), h = fr.h(p[0], p[1]), mu = fr.mu(p[0], p[1]);
    const auto t = connection_table(fr, p);
    const oracles::FrameKoszul oracle(f, h, mu);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        CHECK((t(a, b) - oracle.derivative(a, b)).cwiseAbs().maxCoeff() == 0.0);

    // the six nontrivial pairing values
    CHECK(oracles::pairing(t(kV, kY), FrameVec(0, 1, 0)) == 0.5 * f);   // g(nab_V Y, X)
    CHECK(oracles::pairing(t(kX, kY), FrameVec(1, 0, 0)) == 0.5 * f);   // g(nab_X Y, V)
    CHECK(oracles::pairing(t(kX, kY), FrameVec(0, 1, 0)) == h);         // g(nab_X Y, X)
    CHECK(oracles::pairing(t(kX, kX), FrameVec(0, 0, 1)) == -h);        // g(nab_X X, Y)
    CHECK(oracles::pairing(t(kY, kY), FrameVec(0, 1, 0)) == mu);        // g(nab_Y Y, X)
    CHECK(oracles::pairing(t(kY, kX), FrameVec(0, 0, 1)) == -mu);       // g(nab_Y X, Y)
  }
}

TEST_CASE("torsion and metric-compatibility residuals") {
  const auto fr = reeb_with_mu([](double x, double y) { return 0.5 * std::cos(y - x); });
  const auto r = frame_consistency_residuals(fr, {0.7, 0.2});
  CHECK(r.torsion <= 1e-12);
  CHECK(r.metric_compat <= 1e-12);

  const FrameStructure abelian(
      "flat", [](double, double) { return 0.0; }, [](double, double) { return 0.0; },
      [](double, double) { return 0.0; },
      [](double, double) { return Eigen::Vector2d(1.0, 0.0); },
      [](double, double) { return Eigen::Vector2d(0.0, 1.0); });
  const auto r0 = frame_consistency_residuals(abelian, {1.0, -1.0});
  CHECK(r0.torsion == 0.0);
  CHECK(r0.metric_compat == 0.0);
  for (const auto& e : connection_table(abelian, {0.0, 0.0}).d)
    for (const auto& v : e) CHECK(v.norm() == 0.0);

  // Fault injection: zeroing nabla_Y Y with mu = 1 breaks the identities by >= 0.5.
  const auto fr1 = reeb_with_mu([](double, double) { return 1.0; });
  auto t = connection_table(fr1, {0.3, 0.9});
  t.d[kY][kY].setZero();
  const auto lie_xy = FrameVec(1.0, fr1.h(0.3, 0.9), fr1.f(0.3, 0.9));
  double torsion = 0.0, compat = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      FrameVec lie = FrameVec::Zero();
      if (a == kX && b == kY) lie = lie_xy;
      if (a == kY && b == kX) lie = -lie_xy;
      torsion = std::max(torsion, (t(a, b) - t(b, a) - lie).cwiseAbs().maxCoeff());
      for (int c = 0; c < 3; ++c) {
        FrameVec eb = FrameVec::Zero(), ec = FrameVec::Zero();
        eb[b] = 1.0;
        ec[c] = 1.0;
        compat = std::max(compat, std::abs(frame_pairing(t(a, b), ec) +
                                           frame_pairing(eb, t(a, c))));
      }
    }
  CHECK(std::max(torsion, compat) >= 0.5);
}

TEST_CASE("reduced system right-hand side") {
  const auto reeb = reeb_structure();

  // alpha = 1, beta = 0 at x = pi/2, b = 1: bdot = 1/2 and xdot = 1.
  const auto d = reduced_rhs(reeb, {kPi / 2.0, 0.0, -0.5, 1.0, 1.0, 0.0});
  CHECK(d[3] == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(d[0] == doctest::Approx(1.0).epsilon(1e-15));

  // b = 0, beta = 0, mu = 0: b stays zero and the motion follows alpha Y*.
  for (double alpha : {0.5, 1.0, -2.0}) {
    const double x = 0.8, y = -0.3;
    const auto dz = reduced_rhs(reeb, {x, y, 0.7, 0.0, alpha, 0.0});
    CHECK(dz[3] == 0.0);                                        // bdot
    CHECK(dz[2] == 0.0);                                        // adot
    CHECK(dz[0] == doctest::Approx(alpha * std::sin(x)));       // xdot
    CHECK(dz[1] == doctest::Approx(alpha * std::cos(x)));       // ydot
  }

  // f = 0, h = 1 realized by X* = e^y d/dx, Y* = -d/dy: bdot = -b.
  const FrameStructure shear(
      "shear", [](double, double) { return 0.0; }, [](double, double) { return 1.0; },
      [](double, double) { return 0.0; },
      [](double, double y) { return Eigen::Vector2d(std::exp(y), 0.0); },
      [](double, double) { return Eigen::Vector2d(0.0, -1.0); });
  for (double b : {0.3, 1.0, -0.8}) {
    const auto ds = reduced_rhs(shear, {0.1, 0.2, 0.5, b, 1.0, 0.0});
    CHECK(ds[3] == doctest::Approx(-b).epsilon(1e-15));
  }

  CHECK_THROWS_AS(reduced_rhs(reeb, {0, 0, 0, 1, 0.0, 0.0}), input_error);
  CHECK_THROWS_AS(reduced_field(reeb, 0.0, 0.0), input_error);
}

TEST_CASE("bdot and adot agree with the connection-table assembly") {
  const auto fr = reeb_with_mu([](double x, double y) { return 0.2 + 0.3 * std::sin(y - x); });
  SeededRng rng(9);
  for (int rep = 0; rep < 100; ++rep) {
    const double x = rng.uniform(-6, 6), y = rng.uniform(-6, 6);
    const double alpha = rng.uniform(0.2, 2.0) * (rng.next() & 1u ? 1.0 : -1.0);
    const double beta = rng.uniform(-2.0, 2.0);
    const double b = rng.uniform(-2.0, 2.0);
    const double a = reduced_a0(alpha, beta, b);

    const auto table = connection_table(fr, {x, y});
    const FrameVec w(a, b, alpha);  // velocity components along (V, X, Y)
    FrameVec conn = FrameVec::Zero();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) conn += w[i] * w[j] * table(i, j);

    const auto d = reduced_rhs(fr, {x, y, a, b, alpha, beta});
    CHECK(conn[kX] == doctest::Approx(-d[3]).epsilon(1e-12));  // X-component vs -bdot
    CHECK(conn[kV] == doctest::Approx(-d[2]).epsilon(1e-12));  // V-component vs -adot
    CHECK(conn[kY] == doctest::Approx(0.0).epsilon(1e-12));    // c is constant
  }
}

TEST_CASE("reeb structure data and bracket identity") {
  const auto reeb = reeb_structure();
  CHECK(reeb.f(kPi / 2.0, 123.0) == 1.0);
  CHECK(reeb.h(kPi / 2.0, -4.0) == doctest::Approx(0.0));
  CHECK(reeb.f(0.0, 0.3) == 0.0);
  CHECK(reeb.h(0.0, 0.3) == 1.0);

  // [X*,Y*] = d/dx = cos(x) X* + sin(x) Y*, checked with analytic jacobians.
  for (double x : {0.3, 1.2, -2.7}) {
    const Eigen::Matrix2d jx =
        (Eigen::Matrix2d() << -std::sin(x), 0, -std::cos(x), 0).finished();
    const Eigen::Matrix2d jy =
        (Eigen::Matrix2d() << std::cos(x), 0, -std::sin(x), 0).finished();
    const Eigen::Vector2d lie =
        jy * reeb.base_x(x, 0.0) - jx * reeb.base_y(x, 0.0);
    const Eigen::Vector2d rhs =
        reeb.f(x, 0.0) * reeb.base_y(x, 0.0) + reeb.h(x, 0.0) * reeb.base_x(x, 0.0);
    CHECK((lie - rhs).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((lie - Eigen::Vector2d(1.0, 0.0)).cwiseAbs().maxCoeff() <= 1e-12);
  }
}

TEST_CASE("structure validation rejects bad data") {
  CHECK_THROWS_AS(FrameStructure(
                      "aperiodic", [](double x, double) { return x; },
                      [](double, double) { return 0.0; }, [](double, double) { return 0.0; },
                      [](double, double) { return Eigen::Vector2d(1, 0); },
                      [](double, double) { return Eigen::Vector2d(0, 1); }),
                  invariant_violation);
  // Reeb base fields with wrong (f, h).
  CHECK_THROWS_AS(
      FrameStructure(
          "mismatch", [](double, double) { return 0.0; },
          [](double, double) { return 0.0; }, [](double, double) { return 0.0; },
          [](double x, double) { return Eigen::Vector2d(std::cos(x), -std::sin(x)); },
          [](double x, double) { return Eigen::Vector2d(std::sin(x), std::cos(x)); }),
      invariant_violation);
  CHECK_THROWS_AS(frame_structure_by_name("nope"), input_error);
}

TEST_CASE("band report diagnostics") {
  // Monotone sweep across x = pi crosses a second boundary multiple.
  const auto crossing = synthetic_x_path({kPi / 2.0, 2.0, 2.8, 3.5, 4.0});
  const auto r1 = band_report(crossing);
  CHECK(r1.crossed_band);
  CHECK_FALSE(r1.turnaround);
  CHECK(r1.b_monotone_increasing);
  CHECK(r1.x_min == kPi / 2.0);
  CHECK(r1.x_max == 4.0);

  // Out and back to the starting leaf: a turnaround, not a crossing.
  const auto back = synthetic_x_path({kPi / 2.0, 2.0, 2.2, 1.8, kPi / 2.0});
  const auto r2 = band_report(back);
  CHECK_FALSE(r2.crossed_band);
  CHECK(r2.turnaround);

  // Asymptotic approach to pi without touching it: neither.
  const auto hetero = synthetic_x_path({kPi / 2.0, 2.0, 2.8, 3.0, 3.1, kPi - 1e-7});
  const auto r3 = band_report(hetero);
  CHECK_FALSE(r3.crossed_band);
  CHECK_FALSE(r3.turnaround);

  // The b = 0 reduced flow from x0 = pi/2 stays inside (0, pi).
  const auto reeb = reeb_structure();
  Vec y0(4);
  y0 << kPi / 2.0, 0.0, 0.0, 0.0;
  const auto tr = integrate(reduced_field(reeb, 1.0, 0.0), y0, 100.0);
  REQUIRE(tr.verdict.kind == VerdictKind::Completed);
  const auto r4 = band_report(tr);
  CHECK_FALSE(r4.crossed_band);
  CHECK_FALSE(r4.turnaround);
  CHECK(r4.x_min == kPi / 2.0);
  CHECK(r4.x_max < kPi);
  double max_abs_b = 0.0;
  for (const auto& s : tr.states) max_abs_b = std::max(max_abs_b, std::abs(s[3]));
  CHECK(max_abs_b == 0.0);  // b(t0) = 0 forces b identically zero
}
