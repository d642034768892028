#include "geoflow/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <numbers>

#include <json.hpp>

namespace geoflow {

namespace {

constexpr double kPi = std::numbers::pi;

std::string strf(const char* fmt, ...) {
  char buf[256];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

IntegratorConfig make_config(double rel, double abs, const ScenarioOptions& o) {
  IntegratorConfig c;
  c.rel_tol = o.rel_tol.value_or(rel);
  c.abs_tol = o.abs_tol.value_or(abs);
  return c;
}

std::uint64_t seed_of(const ScenarioOptions& o) { return o.seed.value_or(kDefaultScenarioSeed); }

ScenarioReport new_report(const std::string& name, const std::string& ref,
                          const IntegratorConfig& cfg, std::uint64_t seed) {
  ScenarioReport rep;
  rep.name = name;
  rep.paper_ref = ref;
  rep.config = cfg;
  rep.seed = seed;
  return rep;
}

CheckResult check(std::string name, bool pass, std::string detail) {
  return {std::move(name), pass, std::move(detail)};
}

CheckResult verdict_check(const Trajectory& tr, VerdictKind want) {
  return check("verdict", tr.verdict.kind == want,
               strf("expected %s, got %s at t=%.6g", to_string(want),
                    to_string(tr.verdict.kind), tr.verdict.t));
}

CheckResult escape_check(const Trajectory& tr, double ref, double width_budget) {
  if (tr.verdict.kind != VerdictKind::BlowUp)
    return check("escape-bracket", false, "no blow-up was certified");
  const auto [lo, hi] = escape_time_bracket(tr);
  const bool pass = lo <= ref && ref <= hi && (hi - lo) <= width_budget;
  return check("escape-bracket", pass,
               strf("bracket [%.10g, %.10g], reference %.6g, width budget %.3g",
                    lo, hi, ref, width_budget));
}

CheckResult drift_check(const Trajectory& tr, const std::string& monitor, double budget,
                        const std::string& name) {
  const double d = max_drift(tr, monitor);
  return check(name, d <= budget, strf("drift %.3e, budget %.3e", d, budget));
}

RunRecord make_run(const Vec& y0, Trajectory&& tr, std::vector<CheckResult> checks,
                   bool keep) {
  RunRecord r;
  r.initial = y0;
  r.verdict = tr.verdict;
  for (const auto& [name, series] : tr.monitors)
    r.drifts.emplace_back(name, max_drift(tr, name));
  r.checks = std::move(checks);
  if (keep) r.trajectory = std::move(tr);
  return r;
}

Monitor component_monitor(const std::string& name, int index) {
  return {name, [index](const Vec& y) { return y[index]; }};
}

CheckResult killing_points_check(const ChartMetric& metric, const VectorFieldSpec& field,
                                 SeededRng& rng, const std::string& name) {
  double worst = 0.0;
  Vec p(metric.dim());
  for (int s = 0; s < 100; ++s) {
    for (int i = 0; i < metric.dim(); ++i)
      p[i] = rng.uniform(metric.sample_lo()[i], metric.sample_hi()[i]);
    worst = std::max(worst, killing_residual(metric, field, p).cwiseAbs().maxCoeff());
  }
  return check(name, worst <= 1e-12, strf("max |L_V g| = %.3e at 100 points", worst));
}

// ---- scenario runners -------------------------------------------------------

ScenarioReport run_aff_r_incomplete(const std::string& name, const std::string& ref,
                                    const ScenarioOptions& opt) {
  const IntegratorConfig cfg = make_config(1e-12, 1e-14, opt);
  ScenarioReport rep = new_report(name, ref, cfg, seed_of(opt));
  const MetricLieAlgebra mla = built_in_algebra(AlgebraKind::AffR);
  Vec y0(3);
  y0 << 1.0, 1.0, -0.5;  // null: q(y0,y0) = 1 + 2*1*(-1/2) = 0
  std::vector<Monitor> mon{energy_residual_monitor(mla, y0),
                           pairing_monitor(mla, 2, "killing-pairing")};
  Trajectory tr = integrate(euler_arnold_ode(mla), y0, 10.0, cfg, {}, mon);

  std::vector<CheckResult> checks;
  checks.push_back(verdict_check(tr, VerdictKind::BlowUp));
  checks.push_back(escape_check(tr, 2.0, 0.02));
  checks.push_back(drift_check(tr, "energy-residual", 1e-8, "energy-residual-drift"));
  rep.runs.push_back(make_run(y0, std::move(tr), std::move(checks), opt.keep_trajectories));
  return rep;
}

ScenarioReport run_aff_r_hyperplane(const std::string& name, const std::string& ref,
                                    const ScenarioOptions& opt) {
  const IntegratorConfig cfg = make_config(1e-10, 1e-12, opt);
  ScenarioReport rep = new_report(name, ref, cfg, seed_of(opt));
  const MetricLieAlgebra mla = built_in_algebra(AlgebraKind::AffR);
  SeededRng rng(rep.seed ^ 0xA1ull);
  for (int k = 0; k < 20; ++k) {
    const Vec y0 = draw_hyperplane_state(AlgebraKind::AffR, rng);
    std::vector<Monitor> mon{pairing_monitor(mla, 2, "killing-pairing"),
                             energy_residual_monitor(mla, y0)};
    Trajectory tr = integrate(euler_arnold_ode(mla), y0, 1e4, cfg, {}, mon);
    std::vector<CheckResult> checks;
    checks.push_back(verdict_check(tr, VerdictKind::Completed));
    checks.push_back(drift_check(tr, "killing-pairing", 1e-9, "killing-pairing-max"));
    rep.runs.push_back(make_run(y0, std::move(tr), std::move(checks), opt.keep_trajectories));
  }
  return rep;
}

ScenarioReport run_sol_r_incomplete(const std::string& name, const std::string& ref,
                                    const ScenarioOptions& opt) {
  const IntegratorConfig cfg = make_config(1e-12, 1e-14, opt);
  ScenarioReport rep = new_report(name, ref, cfg, seed_of(opt));
  const MetricLieAlgebra mla = built_in_algebra(AlgebraKind::SolR);
  Vec y0(4);
  y0 << 1.0, 1.0, 0.0, -0.5;  // the aff(R)+R null datum embedded in the slice y = 0
  std::vector<Monitor> mon{energy_residual_monitor(mla, y0),
                           component_monitor("y-slice", 2),
                           pairing_monitor(mla, 3, "killing-pairing")};
  Trajectory tr = integrate(euler_arnold_ode(mla), y0, 10.0, cfg, {}, mon);

  std::vector<CheckResult> checks;
  checks.push_back(verdict_check(tr, VerdictKind::BlowUp));
  checks.push_back(escape_check(tr, 2.0, 0.02));
  checks.push_back(drift_check(tr, "y-slice", 1e-10, "y-slice-max"));
  checks.push_back(drift_check(tr, "energy-residual", 1e-8, "energy-residual-drift"));
  rep.runs.push_back(make_run(y0, std::move(tr), std::move(checks), opt.keep_trajectories));
  return rep;
}

ScenarioReport run_reeb_null_incomplete(const std::string& name, const std::string& ref,
                                        const ScenarioOptions& opt) {
  const IntegratorConfig cfg = make_config(1e-12, 1e-14, opt);
  ScenarioReport rep = new_report(name, ref, cfg, seed_of(opt));
  const FrameStructure fr = reeb_structure();
  const double alpha = 1.0, beta = 0.0;
  std::vector<double> midpoints;

  for (double b0 : {0.5, 1.0, 2.0}) {
    Vec y0(4);
    y0 << kPi / 2.0, 0.0, reduced_a0(alpha, beta, b0), b0;
    std::vector<Monitor> mon{frame_constraint_monitor(alpha, beta)};
    Trajectory tr = integrate(reduced_field(fr, alpha, beta), y0, 100.0, cfg, {}, mon);
    const BandReport band = band_report(tr);

    std::vector<CheckResult> checks;
    checks.push_back(verdict_check(tr, VerdictKind::BlowUp));
    checks.push_back(check("band-no-crossing", !band.crossed_band,
                           strf("crossed_band=%d", int(band.crossed_band))));
    checks.push_back(check("band-no-turnaround", !band.turnaround,
                           strf("turnaround=%d", int(band.turnaround))));
    // x starts on the boundary leaf x = pi/2 and must stay strictly inside
    // (pi/2, pi) afterwards.
    double x_after = kPi;  // min over steps >= 1
    for (std::size_t i = 1; i < tr.states.size(); ++i)
      x_after = std::min(x_after, tr.states[i][0]);
    checks.push_back(check("band-x-range",
                           tr.states.front()[0] == kPi / 2.0 && x_after > kPi / 2.0 &&
                               band.x_max < kPi,
                           strf("x in [%.12g, %.12g]", band.x_min, band.x_max)));
    checks.push_back(check("b-monotone", band.b_monotone_increasing,
                           strf("b increases from %.3g", b0)));
    checks.push_back(drift_check(tr, "frame-constraint", 1e-8, "constraint-drift"));

    if (tr.verdict.kind == VerdictKind::BlowUp) {
      const auto [lo, hi] = escape_time_bracket(tr);
      midpoints.push_back(0.5 * (lo + hi));
      checks.push_back(check("escape-bracket-width",
                             (hi - lo) < 0.05 * 0.5 * (lo + hi),
                             strf("width %.3e, midpoint %.6g", hi - lo, 0.5 * (lo + hi))));
    }
    rep.runs.push_back(make_run(y0, std::move(tr), std::move(checks), opt.keep_trajectories));
  }

  const bool monotone = midpoints.size() == 3 && midpoints[0] > midpoints[1] &&
                        midpoints[1] > midpoints[2];
  rep.checks.push_back(check("escape-monotone-in-b0", monotone,
                             midpoints.size() == 3
                                 ? strf("midpoints %.6g > %.6g > %.6g", midpoints[0],
                                        midpoints[1], midpoints[2])
                                 : "missing blow-up brackets"));
  return rep;
}

ScenarioReport run_reeb_b_zero(const std::string& name, const std::string& ref,
                               const ScenarioOptions& opt) {
  const IntegratorConfig cfg = make_config(1e-10, 1e-12, opt);
  ScenarioReport rep = new_report(name, ref, cfg, seed_of(opt));
  const FrameStructure fr = reeb_structure();
  const double alpha = 1.0, beta = 0.0;
  Vec y0(4);
  y0 << kPi / 2.0, 0.0, 0.0, 0.0;
  std::vector<Monitor> mon{component_monitor("b-component", 3),
                           frame_constraint_monitor(alpha, beta)};
  Trajectory tr = integrate(reduced_field(fr, alpha, beta), y0, 1e3, cfg, {}, mon);

  std::vector<CheckResult> checks;
  checks.push_back(verdict_check(tr, VerdictKind::Completed));
  checks.push_back(drift_check(tr, "b-component", 1e-12, "b-max"));
  checks.push_back(drift_check(tr, "frame-constraint", 1e-8, "constraint-drift"));
  const BandReport band = band_report(tr);
  checks.push_back(check("band-no-crossing", !band.crossed_band,
                         strf("heteroclinic run, x in [%.6g, %.6g]", band.x_min, band.x_max)));
  rep.runs.push_back(make_run(y0, std::move(tr), std::move(checks), opt.keep_trajectories));
  return rep;
}

ScenarioReport run_clifton_pohl(const std::string& name, const std::string& ref,
                                const ScenarioOptions& opt) {
  const IntegratorConfig cfg = make_config(1e-12, 1e-14, opt);
  ScenarioReport rep = new_report(name, ref, cfg, seed_of(opt));
  const ChartMetric metric = clifton_pohl_metric();
  Vec y0(4);
  y0 << 1.0, 0.0, 1.0, 0.0;  // position (1,0), velocity (1,0): null leaf geodesic
  std::vector<Monitor> mon{chart_energy_residual_monitor(metric, y0)};
  Trajectory tr = integrate(geodesic_field(metric), y0, 5.0, cfg,
                            [metric](const Vec& y) {
                              return metric.in_domain(y.head(2));
                            },
                            mon);

  std::vector<CheckResult> checks;
  checks.push_back(verdict_check(tr, VerdictKind::BlowUp));
  checks.push_back(escape_check(tr, 1.0, 0.01));
  checks.push_back(drift_check(tr, "energy-residual", 1e-8, "energy-residual-drift"));
  rep.runs.push_back(make_run(y0, std::move(tr), std::move(checks), opt.keep_trajectories));
  return rep;
}

ScenarioReport run_pp_wave(const std::string& name, const std::string& ref,
                           const ScenarioOptions& opt) {
  // Tighter than default: the Clairaut budget of 1e-8 over a 1e3 horizon
  // leaves no margin at 1e-10.
  const IntegratorConfig cfg = make_config(1e-12, 1e-14, opt);
  ScenarioReport rep = new_report(name, ref, cfg, seed_of(opt));
  const ChartMetric metric = pp_wave_cos_metric();
  const VectorFieldSpec du = coordinate_field(metric, 0);
  const VectorFieldSpec dv = coordinate_field(metric, 1);
  SeededRng rng(rep.seed ^ 0x77ull);

  for (int k = 0; k < 10; ++k) {
    Vec y0(6);
    for (int i = 0; i < 3; ++i) y0[i] = rng.uniform(-2.0, 2.0);
    for (int i = 3; i < 6; ++i) y0[i] = rng.uniform(-1.0, 1.0);
    std::vector<Monitor> mon{chart_clairaut_monitor(metric, du, "clairaut-u"),
                             chart_clairaut_monitor(metric, dv, "clairaut-v"),
                             chart_energy_residual_monitor(metric, y0)};
    Trajectory tr = integrate(geodesic_field(metric), y0, 1e3, cfg, {}, mon);
    std::vector<CheckResult> checks;
    checks.push_back(verdict_check(tr, VerdictKind::Completed));
    checks.push_back(drift_check(tr, "clairaut-u", 1e-8, "clairaut-u-drift"));
    checks.push_back(drift_check(tr, "clairaut-v", 1e-8, "clairaut-v-drift"));
    rep.runs.push_back(make_run(y0, std::move(tr), std::move(checks), opt.keep_trajectories));
  }

  SeededRng prng(rep.seed ^ 0x7Bull);
  rep.checks.push_back(killing_points_check(metric, du, prng, "killing-residual-du"));
  rep.checks.push_back(killing_points_check(metric, dv, prng, "killing-residual-dv"));
  return rep;
}

ScenarioReport run_warped_sol(const std::string& name, const std::string& ref,
                              const ScenarioOptions& opt) {
  const IntegratorConfig cfg = make_config(1e-10, 1e-12, opt);
  ScenarioReport rep = new_report(name, ref, cfg, seed_of(opt));
  const ChartMetric metric = warped_sol_metric();
  SeededRng rng(rep.seed ^ 0x57ull);
  rep.checks.push_back(
      killing_points_check(metric, coordinate_field(metric, 0), rng, "killing-residual-dx"));
  rep.checks.push_back(
      killing_points_check(metric, coordinate_field(metric, 1), rng, "killing-residual-dy"));
  rep.checks.push_back(
      killing_points_check(metric, warped_sol_boost(), rng, "killing-residual-boost"));
  return rep;
}

ScenarioReport run_hopf(const std::string& name, const std::string& ref,
                        const ScenarioOptions& opt) {
  const IntegratorConfig cfg = make_config(1e-10, 1e-12, opt);
  ScenarioReport rep = new_report(name, ref, cfg, seed_of(opt));
  const ChartMetric metric = hopf_halfspace_metric();
  std::vector<double> heights = opt.v0 ? std::vector<double>{*opt.v0}
                                       : std::vector<double>{1.0, 3.0, 7.0};
  for (double v0 : heights) {
    if (!(v0 > 0.0)) throw input_error("hopf-affine-length: v0 must be positive");
    Vec y0(6);
    y0 << v0, 0.0, 0.0, -1.0, 0.0, 0.0;  // coordinates (v,x,u); velocity -d/dv
    Trajectory tr = integrate(geodesic_field(metric), y0, 2.0 * v0 + 10.0, cfg,
                              [metric](const Vec& y) {
                                return metric.in_domain(y.head(3));
                              },
                              {});
    std::vector<CheckResult> checks;
    checks.push_back(verdict_check(tr, VerdictKind::LeftDomain));
    const double t_exit = tr.verdict.t;
    checks.push_back(check("exit-time", tr.verdict.kind == VerdictKind::LeftDomain &&
                                            std::abs(t_exit - v0) <= 1e-8,
                           strf("t_exit %.12g, affine length %.12g", t_exit, v0)));
    rep.runs.push_back(make_run(y0, std::move(tr), std::move(checks), opt.keep_trajectories));
  }
  return rep;
}

}  // namespace

// ---- shared assembly --------------------------------------------------------

Field euler_arnold_ode(const MetricLieAlgebra& mla) {
  return [mla](const Vec& y, Vec& dydt) { dydt = mla.euler_arnold_field(y); };
}

MetricLieAlgebra built_in_algebra(AlgebraKind kind) {
  return kind == AlgebraKind::AffR ? aff_r_metric_algebra() : sol_r_metric_algebra();
}

int killing_generator_index(AlgebraKind kind) {
  return kind == AlgebraKind::AffR ? 2 : 3;
}

Vec draw_bounded_state(AlgebraKind kind, SeededRng& rng) {
  // tdot = (t^2 - C)/2 on the aff(R)+R factor: forward-bounded orbits sink to
  // t = -sqrt(C), which requires C > 0 and t0 below the unstable root.
  auto aff_ok = [](double t, double x, double v) {
    const double c = t * t + 2.0 * x * v;
    return c >= 0.25 && t <= std::sqrt(c) - 0.1;
  };
  for (int attempt = 0; attempt < 100000; ++attempt) {
    if (kind == AlgebraKind::AffR) {
      Vec y(3);
      for (int i = 0; i < 3; ++i) y[i] = rng.uniform(-2.0, 2.0);
      if (aff_ok(y[0], y[1], y[2])) return y;
    } else {
      // Off the invariant slices the sol+R reduction is a pair of saddles and
      // generic orbits blow up; the forward-bounded families live on the
      // slices y = 0 (embedded aff dynamics) and v = 0 (circle flow
      // t^2 + y^2 = C with t -> +sqrt(C)).
      Vec y = Vec::Zero(4);
      if (rng.next() & 1u) {
        y[0] = rng.uniform(-2.0, 2.0);
        y[1] = rng.uniform(-2.0, 2.0);
        y[3] = rng.uniform(-2.0, 2.0);
        if (!aff_ok(y[0], y[1], y[3])) continue;
      } else {
        y[0] = rng.uniform(-2.0, 2.0);
        y[1] = rng.uniform(-2.0, 2.0);
        y[2] = rng.uniform(-2.0, 2.0);
        if (y[0] * y[0] + y[2] * y[2] < 0.05) continue;
      }
      return y;
    }
  }
  throw std::runtime_error("draw_bounded_state: rejection sampling failed");
}

Vec draw_hyperplane_state(AlgebraKind kind, SeededRng& rng) {
  if (kind == AlgebraKind::AffR) {
    Vec y = Vec::Zero(3);
    y[0] = rng.uniform(-2.0, 2.0);
    // vdot = t v: a nonzero V-slot is safe only when it decays.
    y[2] = (y[0] < -0.05) ? rng.uniform(-1.0, 1.0) : 0.0;
    return y;
  }
  Vec y = Vec::Zero(4);
  if (rng.next() & 1u) {
    y[0] = rng.uniform(-2.0, -0.1);  // t < 0, y = 0: V-slot decays
    y[3] = rng.uniform(-1.0, 1.0);
  } else {
    y[0] = rng.uniform(-2.0, 2.0);   // circle flow t^2 + y^2 = const, V-slot 0
    y[2] = rng.uniform(-1.0, 1.0);
  }
  return y;
}

Monitor energy_residual_monitor(const MetricLieAlgebra& mla, const Vec& y0) {
  const double e0 = mla.energy(y0);
  return {"energy-residual", [mla, e0](const Vec& y) {
            return (mla.energy(y) - e0) / std::max(1.0, y.squaredNorm());
          }};
}

Monitor pairing_monitor(const MetricLieAlgebra& mla, int generator_index,
                        const std::string& name) {
  Vec gen = Vec::Zero(mla.dim());
  gen[generator_index] = 1.0;
  return {name, [mla, gen](const Vec& y) { return mla.pairing(y, gen); }};
}

Monitor chart_energy_residual_monitor(const ChartMetric& metric, const Vec& y0) {
  const int d = metric.dim();
  const double e0 = y0.tail(d).dot(metric.g(y0.head(d)) * y0.tail(d));
  return {"energy-residual", [metric, d, e0](const Vec& y) {
            const double e = y.tail(d).dot(metric.g(y.head(d)) * y.tail(d));
            return (e - e0) / std::max(1.0, y.squaredNorm());
          }};
}

Monitor chart_clairaut_monitor(const ChartMetric& metric, const VectorFieldSpec& field,
                               const std::string& name) {
  const int d = metric.dim();
  return {name, [metric, field, d](const Vec& y) {
            const Vec pos = y.head(d);
            return y.tail(d).dot(metric.g(pos) * field.value(pos));
          }};
}

Monitor frame_constraint_monitor(double alpha, double beta) {
  return {"frame-constraint", [alpha, beta](const Vec& y) {
            const double raw = 2.0 * y[2] * alpha + y[3] * y[3] - beta;
            const double scale =
                std::abs(2.0 * y[2] * alpha) + y[3] * y[3] + std::abs(beta);
            return raw / std::max(1.0, scale);
          }};
}

// ---- registry ---------------------------------------------------------------

const std::vector<Scenario>& registry() {
  static const std::vector<Scenario> scenarios = [] {
    std::vector<Scenario> v;
    auto add = [&v](std::string name, std::string ref, std::string system, double t_max,
                    std::string expected,
                    ScenarioReport (*fn)(const std::string&, const std::string&,
                                         const ScenarioOptions&)) {
      Scenario sc;
      sc.name = name;
      sc.paper_ref = ref;
      sc.system = std::move(system);
      sc.t_max = t_max;
      sc.expected = std::move(expected);
      sc.run = [name, ref, fn](const ScenarioOptions& opt) { return fn(name, ref, opt); };
      v.push_back(std::move(sc));
    };

    add("aff-r-incomplete",
        "aff(R)+R with central null Killing generator: incomplete left-invariant "
        "Lorentzian metric. Null datum (t,x,v) = (1,1,-1/2); with x = 1 and q(y,y) = 0 "
        "the T-component obeys tdot = t^2/2, so the flow escapes at parameter 2/t0 = 2. "
        "(The velocity curve (-2/s, 2/s^2, 1) often quoted for this example does not "
        "solve the system - its X-component is not constant; the separable solution "
        "(-2/s, 1, -2/s^2) is the oracle used here.)",
        "euler_arnold", 10.0, "BlowUp", &run_aff_r_incomplete);

    add("aff-r-hyperplane-complete",
        "Euler-Arnold orbits tangent to the hyperplane q(.,V) = 0 are complete and keep "
        "q(y,V) = 0. Draws are restricted to the bounded subfamily: the complete "
        "directions with exponential V-slot growth exceed double-precision range long "
        "before t = 1e4.",
        "euler_arnold", 1e4, "Completed", &run_aff_r_hyperplane);

    add("sol-r-incomplete",
        "sol+R with central null Killing generator: the slice y = 0 is totally geodesic "
        "and carries the aff(R)+R dynamics, so the embedded null datum blows up at "
        "parameter 2; the incomplete geodesics are timelike and lightlike.",
        "euler_arnold", 10.0, "BlowUp", &run_sol_r_incomplete);

    add("reeb-null-incomplete",
        "Reeb-band null frame (f = sin x, h = cos x, mu = 0): null geodesics with "
        "alpha = 1 and b0 > 0 started on the boundary leaf x = pi/2 stay inside one "
        "half band, have strictly increasing b, and blow up in finite parameter "
        "(comparison bdot >= f b^2 / 2). No closed-form escape time is available; the "
        "measured bracket is reported.",
        "frame", 100.0, "BlowUp", &run_reeb_null_incomplete);

    add("reeb-b-zero-complete",
        "Reeb-band null frame: if b vanishes once it vanishes identically and the orbit "
        "follows the geodesic Y-flow; the run stays on the heteroclinic x-line and "
        "completes the horizon.",
        "frame", 1e3, "Completed", &run_reeb_b_zero);

    add("clifton-pohl-null-incomplete",
        "Clifton-Pohl plane 2 dx dy/(x^2+y^2) on R^2 minus the origin (universal cover; "
        "the homothety quotient does not change completeness verdicts): the null "
        "geodesic t -> (1/(1-t), 0) escapes at t = 1. The product with a flat circle "
        "adds no new dynamics and is covered by this entry.",
        "chart", 5.0, "BlowUp", &run_clifton_pohl);

    add("pp-wave-cos-complete",
        "pp-wave du dv + cos(z) du^2 + dz^2: d/du and d/dv are Killing; their Clairaut "
        "pairings are first integrals along geodesics. Completeness is certified to the "
        "finite horizon t = 1e3 only.",
        "chart", 1e3, "Completed", &run_pp_wave);

    add("warped-sol-killing",
        "Warped product (2+sin z)(dx^2 - dy^2) + dz^2: the translations d/dx, d/dy and "
        "the hyperbolic rotation y d/dx + x d/dy preserve the metric (the sol-type "
        "isometries of the flat Lorentzian planes).",
        "chart", 0.0, "checks-only", &run_warped_sol);

    add("hopf-affine-length",
        "Flat half-space 2 du dv + dx^2 on v > 0 (Hopf circle times torus, lifted): the "
        "geodesic from height v0 with velocity -d/dv is a straight line that leaves the "
        "chart after affine length exactly v0.",
        "chart", 20.0, "LeftDomain", &run_hopf);

    return v;
  }();
  return scenarios;
}

ScenarioReport run_scenario(const std::string& name, const ScenarioOptions& options) {
  for (const auto& sc : registry())
    if (sc.name == name) return sc.run(options);
  throw input_error("unknown scenario: " + name);
}

bool ScenarioReport::all_pass() const {
  for (const auto& c : checks)
    if (!c.pass) return false;
  for (const auto& r : runs)
    for (const auto& c : r.checks)
      if (!c.pass) return false;
  return true;
}

std::string ScenarioReport::to_json(int indent) const {
  using nlohmann::json;
  json j;
  j["name"] = name;
  j["paper_ref"] = paper_ref;
  j["seed"] = seed;
  j["config"] = {{"rel_tol", config.rel_tol},
                 {"abs_tol", config.abs_tol},
                 {"h_min", config.h_min},
                 {"h_max", std::isfinite(config.h_max) ? json(config.h_max) : json("inf")},
                 {"blowup_norm", config.blowup_norm},
                 {"max_steps", config.max_steps}};
  auto check_json = [](const CheckResult& c) {
    return json{{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}};
  };
  j["runs"] = json::array();
  for (const auto& r : runs) {
    json run;
    run["initial"] = std::vector<double>(r.initial.data(), r.initial.data() + r.initial.size());
    json verdict;
    verdict["kind"] = to_string(r.verdict.kind);
    verdict["t"] = r.verdict.t;
    if (r.verdict.kind == VerdictKind::BlowUp)
      verdict["bracket"] = {r.verdict.t_escape_low, r.verdict.t_escape_high};
    run["verdict"] = verdict;
    json drifts = json::object();
    for (const auto& [mname, value] : r.drifts) drifts[mname] = value;
    run["drifts"] = drifts;
    run["checks"] = json::array();
    for (const auto& c : r.checks) run["checks"].push_back(check_json(c));
    j["runs"].push_back(run);
  }
  j["checks"] = json::array();
  for (const auto& c : checks) j["checks"].push_back(check_json(c));
  j["all_pass"] = all_pass();
  return j.dump(indent);
}

}  // namespace geoflow
