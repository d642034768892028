#include <doctest.h>

#include <cmath>
#include <sstream>

#include "geoflow/integrator.hpp"
#include "oracles.hpp"

using namespace geoflow;

namespace {

Vec scalar_state(double v) {
  Vec y(1);
  y[0] = v;
  return y;
}

Field riccati(double c) {
  return [c](const Vec& y, Vec& dydt) { dydt[0] = c * y[0] * y[0]; };
}

const Field kHarmonic = [](const Vec& y, Vec& dydt) {
  dydt[0] = y[1];
  dydt[1] = -y[0];
};

}  // namespace

TEST_CASE("constant field completes with constant state") {
  Vec y0(2);
  y0 << 1.0, 2.0;
  const auto tr = integrate([](const Vec&, Vec& d) { d.setZero(); }, y0, 10.0);
  CHECK(tr.verdict.kind == VerdictKind::Completed);
  CHECK(tr.verdict.t == 10.0);
  for (const auto& s : tr.states) CHECK((s - y0).norm() == 0.0);
}

TEST_CASE("linear growth is not a blow-up") {
  const auto tr = integrate([](const Vec& y, Vec& d) { d = y; }, scalar_state(1.0), 5.0);
  CHECK(tr.verdict.kind == VerdictKind::Completed);
  const double y5 = tr.states.back()[0];
  CHECK(std::abs(y5 - std::exp(5.0)) / std::exp(5.0) <= 1e-8);
}

TEST_CASE("riccati blow-up bracket") {
  const auto tr = integrate(riccati(0.5), scalar_state(1.0), 10.0);
  REQUIRE(tr.verdict.kind == VerdictKind::BlowUp);
  const auto [lo, hi] = escape_time_bracket(tr);
  CHECK(lo <= 2.0);
  CHECK(2.0 <= hi);
  CHECK(hi - lo < 0.02);
}

TEST_CASE("riccati family brackets contain the analytic escape time") {
  for (double c : {0.5, 1.0, 2.0})
    for (double t0 : {0.5, 1.0, 2.0, 4.0}) {
      const auto tr = integrate(riccati(c), scalar_state(t0), 50.0);
      REQUIRE(tr.verdict.kind == VerdictKind::BlowUp);
      const auto [lo, hi] = escape_time_bracket(tr);
      const double star = oracles::riccati_escape_time(c, t0);
      CHECK(lo <= star);
      CHECK(star <= hi);
      CHECK(hi - lo < 0.02);
    }
}

TEST_CASE("escape_time_bracket demands a blow-up verdict") {
  const auto tr = integrate([](const Vec&, Vec& d) { d.setZero(); }, scalar_state(1.0), 1.0);
  CHECK_THROWS_AS(escape_time_bracket(tr), state_error);
}

TEST_CASE("harmonic oscillator conserves energy within budget") {
  Vec y0(2);
  y0 << 1.0, 0.0;
  const std::vector<Monitor> mon{
      {"energy", [](const Vec& y) { return y[0] * y[0] + y[1] * y[1]; }}};
  IntegratorConfig cfg;
  const auto tr = integrate(kHarmonic, y0, 100.0, cfg, {}, mon);
  CHECK(tr.verdict.kind == VerdictKind::Completed);
  const double drift = max_drift(tr, "energy");
  CHECK(drift <= 1e-8);

  // Halving both tolerances must not make conservation worse.
  cfg.rel_tol /= 2.0;
  cfg.abs_tol /= 2.0;
  const auto tr2 = integrate(kHarmonic, y0, 100.0, cfg, {}, mon);
  CHECK(max_drift(tr2, "energy") <= drift);
}

TEST_CASE("max_drift semantics and unknown monitors") {
  const std::vector<Monitor> mon{{"first", [](const Vec& y) { return y[0]; }}};
  Vec y0(2);
  y0 << 3.0, 4.0;
  const auto tr = integrate([](const Vec&, Vec& d) { d.setZero(); }, y0, 1.0, {}, {}, mon);
  CHECK(max_drift(tr, "first") == 0.0);
  CHECK_THROWS_AS(max_drift(tr, "nope"), input_error);

  // |m(t) - m(0)| is normalized by max(1, |m(0)|).
  const std::vector<Monitor> lin{{"t-like", [](const Vec& y) { return y[0]; }}};
  Vec z0(1);
  z0 << 4.0;
  const auto tl = integrate([](const Vec&, Vec& d) { d[0] = 1.0; }, z0, 2.0, {}, {}, lin);
  CHECK(max_drift(tl, "t-like") == doctest::Approx(0.5).epsilon(1e-9));  // 2 / 4
  z0[0] = 0.5;
  const auto ts = integrate([](const Vec&, Vec& d) { d[0] = 1.0; }, z0, 2.0, {}, {}, lin);
  CHECK(max_drift(ts, "t-like") == doctest::Approx(2.0).epsilon(1e-9));  // 2 / 1
}

TEST_CASE("h_max caps the accepted step size") {
  IntegratorConfig cfg;
  cfg.h_max = 0.01;
  Vec y0(1);
  y0 << 1.0;
  const auto tr = integrate([](const Vec&, Vec& d) { d.setZero(); }, y0, 10.0, cfg);
  CHECK(tr.verdict.kind == VerdictKind::Completed);
  CHECK(tr.size() >= 1000);  // would be ~15 steps unconstrained
  // the final step may stretch by 1% to land exactly on t_max
  for (std::size_t i = 1; i < tr.size(); ++i)
    CHECK(tr.times[i] - tr.times[i - 1] <= 0.0101 + 1e-12);
}

TEST_CASE("domain exit is located by bisection") {
  const auto tr = integrate([](const Vec&, Vec& d) { d[0] = -1.0; }, scalar_state(1.0), 10.0,
                            {}, [](const Vec& y) { return y[0] > 0.0; });
  REQUIRE(tr.verdict.kind == VerdictKind::LeftDomain);
  CHECK(tr.verdict.t >= 1.0 - 1e-10);
  CHECK(tr.verdict.t <= 1.0 + 1e-10);
  CHECK(tr.times.back() <= 1.0 + 1e-10);
}

TEST_CASE("identical inputs give identical trajectories") {
  Vec y0(2);
  y0 << 0.3, 0.7;
  const auto a = integrate(kHarmonic, y0, 25.0);
  const auto b = integrate(kHarmonic, y0, 25.0);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a.times[i] == b.times[i]);
    CHECK((a.states[i] - b.states[i]).norm() == 0.0);
  }
}

TEST_CASE("step limit verdict") {
  IntegratorConfig cfg;
  cfg.max_steps = 5;
  const auto tr = integrate(kHarmonic, scalar_state(1.0).replicate(2, 1), 1e6, cfg);
  CHECK(tr.verdict.kind == VerdictKind::StepLimit);
  CHECK(tr.verdict.t < 1e6);
}

TEST_CASE("field failure inside the domain certifies a blow-up") {
  const Field f = [](const Vec& y, Vec& d) {
    d[0] = y[0] > 2.0 ? std::numeric_limits<double>::quiet_NaN() : 1.0;
  };
  const auto tr = integrate(f, scalar_state(1.0), 10.0);
  REQUIRE(tr.verdict.kind == VerdictKind::BlowUp);
  CHECK(tr.verdict.t_escape_low < tr.verdict.t_escape_high);
  CHECK(tr.verdict.t >= 0.9);  // y = 1 + t reaches the bad region near t = 1
  CHECK(tr.verdict.t <= 1.1);
}

TEST_CASE("config validation") {
  IntegratorConfig cfg;
  cfg.rel_tol = 0.0;
  CHECK_THROWS_AS(integrate(riccati(1.0), scalar_state(1.0), 1.0, cfg), input_error);
  cfg = {};
  cfg.h_min = 1.0;
  cfg.h_max = 0.5;
  CHECK_THROWS_AS(integrate(riccati(1.0), scalar_state(1.0), 1.0, cfg), input_error);
  cfg = {};
  cfg.blowup_norm = 0.5;
  CHECK_THROWS_AS(integrate(riccati(1.0), scalar_state(1.0), 1.0, cfg), input_error);
  CHECK_THROWS_AS(integrate(riccati(1.0), scalar_state(1.0), -1.0), input_error);
  CHECK_THROWS_AS(integrate(riccati(1.0), scalar_state(1.0), 1.0, {},
                            [](const Vec& y) { return y[0] < 0.0; }),
                  input_error);
}

TEST_CASE("trajectory CSV layout and precision") {
  Vec y0(2);
  y0 << M_PI, 1.0;
  const std::vector<Monitor> mon{{"sum", [](const Vec& y) { return y[0] + y[1]; }}};
  const auto tr = integrate([](const Vec&, Vec& d) { d.setZero(); }, y0, 1.0, {}, {}, mon);
  std::ostringstream os;
  tr.write_csv(os);
  const std::string text = os.str();
  CHECK(text.rfind("t,y0,y1,m:sum\n", 0) == 0);
  CHECK(text.find("3.1415926535897931") != std::string::npos);  // 17 significant digits
  std::size_t rows = 0;
  for (char ch : text)
    if (ch == '\n') ++rows;
  CHECK(rows == tr.size() + 1);
}
