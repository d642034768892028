// Adaptive Dormand-Prince 5(4) integration with conserved-quantity logging,
// domain-exit location and finite-time blow-up certification.
//
// The tableau and the quartic dense-output formula follow the classic DOPRI5
// code of E. Hairer and G. Wanner (Solving Ordinary Differential Equations I,
// 2nd edition, Springer 1993).

#include "geoflow/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace geoflow {

namespace {

// RK5(4)7M coefficients, 1980 JCoAM 6 19.
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0, c5 = 8.0 / 9.0;

constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0, a63 = 46732.0 / 5247.0,
                 a64 = 49.0 / 176.0, a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;

// e = b5 - b4, the embedded error weights.
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;

// Dense-output weights (CONTD5).
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

// Step controller constants (dopri5 defaults).
constexpr double kSafe = 0.9;
constexpr double kFacShrinkMax = 5.0;   // h never shrinks by more than 5x
constexpr double kFacGrowMax = 10.0;    // h never grows by more than 10x
constexpr double kBeta = 0.04;
constexpr double kExpo1 = 0.2 - kBeta * 0.75;

// Absolute cushion added to each side of an escape bracket.  It covers the
// accumulated time bias of the solver at default tolerances, which dwarfs the
// width of the raw extrapolation.
constexpr double kEscapeSlack = 1e-5;

bool finite(const Vec& v) { return v.allFinite(); }

struct FitLine {
  double slope = 0.0;
  double intercept = 0.0;
  bool ok = false;
};

// Least-squares line through (t_i, u_i).
FitLine fit_line(const std::vector<double>& t, const std::vector<double>& u) {
  FitLine r;
  const std::size_t n = t.size();
  if (n < 2) return r;
  double mt = 0, mu = 0;
  for (std::size_t i = 0; i < n; ++i) { mt += t[i]; mu += u[i]; }
  mt /= double(n); mu /= double(n);
  double stt = 0, stu = 0;
  for (std::size_t i = 0; i < n; ++i) {
    stt += (t[i] - mt) * (t[i] - mt);
    stu += (t[i] - mt) * (u[i] - mu);
  }
  if (stt <= 0) return r;
  r.slope = stu / stt;
  r.intercept = mu - r.slope * mt;
  r.ok = true;
  return r;
}

class Stepper {
 public:
  Stepper(const Field& field, int n) : field_(field) {
    for (Vec* k : {&k1_, &k2_, &k3_, &k4_, &k5_, &k6_, &k7_, &ytmp_, &ynew_, &yerr_})
      k->resize(n);
  }

  // One trial step from (y, h).  Returns false if any stage produced a
  // non-finite value; otherwise fills ynew/yerr and k-stages.
  bool attempt(const Vec& y, double h) {
    ytmp_ = y + h * (a21 * k1_);
    if (!eval(ytmp_, k2_)) return false;
    ytmp_ = y + h * (a31 * k1_ + a32 * k2_);
    if (!eval(ytmp_, k3_)) return false;
    ytmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
    if (!eval(ytmp_, k4_)) return false;
    ytmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
    if (!eval(ytmp_, k5_)) return false;
    ytmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
    if (!eval(ytmp_, k6_)) return false;
    ynew_ = y + h * (a71 * k1_ + a73 * k3_ + a74 * k4_ + a75 * k5_ + a76 * k6_);
    if (!finite(ynew_)) return false;
    if (!eval(ynew_, k7_)) return false;  // FSAL stage
    yerr_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
    return true;
  }

  double error_norm(const Vec& y, const IntegratorConfig& cfg) const {
    double s = 0.0;
    for (Eigen::Index i = 0; i < y.size(); ++i) {
      double sk = cfg.abs_tol + cfg.rel_tol * std::max(std::abs(y[i]), std::abs(ynew_[i]));
      double q = yerr_[i] / sk;
      s += q * q;
    }
    return std::sqrt(s / double(y.size()));
  }

  bool eval(const Vec& y, Vec& dydt) {
    field_(y, dydt);
    return finite(dydt);
  }

  // Quartic interpolant over the accepted step [t, t+h].
  void prepare_dense(const Vec& y, double h) {
    r1_ = y;
    r2_ = ynew_ - y;
    r3_ = h * k1_ - r2_;
    r4_ = r2_ - h * k7_ - r3_;
    r5_ = h * (d1 * k1_ + d3 * k3_ + d4 * k4_ + d5 * k5_ + d6 * k6_ + d7 * k7_);
  }

  Vec dense(double theta) const {
    const double th1 = 1.0 - theta;
    return r1_ + theta * (r2_ + th1 * (r3_ + theta * (r4_ + th1 * r5_)));
  }

  void rotate_fsal() { k1_.swap(k7_); }

  Vec k1_, k2_, k3_, k4_, k5_, k6_, k7_, ytmp_, ynew_, yerr_;
  Vec r1_, r2_, r3_, r4_, r5_;

 private:
  const Field& field_;
};

double initial_step(Stepper& st, const Vec& y0, double t_max, const IntegratorConfig& cfg) {
  const int n = int(y0.size());
  double dnf = 0.0, dny = 0.0;
  for (int i = 0; i < n; ++i) {
    double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y0[i]);
    double q = st.k1_[i] / sk;
    dnf += q * q;
    q = y0[i] / sk;
    dny += q * q;
  }
  double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : std::sqrt(dny / dnf) * 0.01;
  h = std::min(h, t_max);

  Vec y1 = y0 + h * st.k1_;
  Vec f1(n);
  double h1 = h;
  if (st.eval(y1, f1)) {
    double der2 = 0.0;
    for (int i = 0; i < n; ++i) {
      double sk = cfg.abs_tol + cfg.rel_tol * std::abs(y0[i]);
      double q = (f1[i] - st.k1_[i]) / sk;
      der2 += q * q;
    }
    der2 = std::sqrt(der2) / h;
    double der12 = std::max(der2, std::sqrt(dnf));
    h1 = (der12 <= 1e-15) ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
  }
  h = std::min({100.0 * h, h1, cfg.h_max, t_max});
  return std::max(h, cfg.h_min);
}

}  // namespace

void IntegratorConfig::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw input_error("integrator config: tolerances must be positive");
  if (!(h_min > 0.0) || !(h_min <= h_max))
    throw input_error("integrator config: requires 0 < h_min <= h_max");
  if (!(blowup_norm > 1.0))
    throw input_error("integrator config: blowup_norm must exceed 1");
  if (max_steps <= 0)
    throw input_error("integrator config: max_steps must be positive");
}

const char* to_string(VerdictKind kind) {
  switch (kind) {
    case VerdictKind::Completed: return "Completed";
    case VerdictKind::BlowUp: return "BlowUp";
    case VerdictKind::LeftDomain: return "LeftDomain";
    case VerdictKind::StepLimit: return "StepLimit";
  }
  return "?";
}

const std::vector<double>& Trajectory::monitor(const std::string& name) const {
  for (const auto& [n, series] : monitors)
    if (n == name) return series;
  throw input_error("unknown monitor: " + name);
}

void Trajectory::write_csv(std::ostream& os) const {
  os << "t";
  const Eigen::Index dim = states.empty() ? 0 : states.front().size();
  for (Eigen::Index i = 0; i < dim; ++i) os << ",y" << i;
  for (const auto& [name, series] : monitors) os << ",m:" << name;
  os << "\n";
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (std::size_t r = 0; r < times.size(); ++r) {
    put(times[r]);
    for (Eigen::Index i = 0; i < dim; ++i) { os << ','; put(states[r][i]); }
    for (const auto& [name, series] : monitors) { os << ','; put(series[r]); }
    os << "\n";
  }
}

double max_drift(const Trajectory& trajectory, const std::string& monitor_name) {
  const auto& m = trajectory.monitor(monitor_name);
  if (m.empty()) return 0.0;
  const double m0 = m.front();
  const double denom = std::max(1.0, std::abs(m0));
  double worst = 0.0;
  for (double v : m) worst = std::max(worst, std::abs(v - m0));
  return worst / denom;
}

std::pair<double, double> escape_time_bracket(const Trajectory& trajectory) {
  if (trajectory.verdict.kind != VerdictKind::BlowUp)
    throw state_error("escape_time_bracket requires a BlowUp verdict");
  return {trajectory.verdict.t_escape_low, trajectory.verdict.t_escape_high};
}

Trajectory integrate(const Field& field, const Vec& y0, double t_max,
                     const IntegratorConfig& config, const DomainPredicate& domain,
                     const std::vector<Monitor>& monitors) {
  config.validate();
  if (!(t_max > 0.0)) throw input_error("integrate: t_max must be positive");
  if (y0.size() == 0) throw input_error("integrate: empty state");
  if (domain && !domain(y0)) throw input_error("integrate: y0 outside domain");

  Trajectory traj;
  traj.monitors.reserve(monitors.size());
  for (const auto& m : monitors) traj.monitors.emplace_back(m.name, std::vector<double>{});

  auto record = [&](double t, const Vec& y) {
    traj.times.push_back(t);
    traj.states.push_back(y);
    for (std::size_t i = 0; i < monitors.size(); ++i)
      traj.monitors[i].second.push_back(monitors[i].eval(y));
  };

  // Fits 1/|y| linearly in t over the last accepted samples; the root
  // estimates the escape time (blow-ups here are Riccati-type, so 1/|y| is
  // asymptotically linear).  Both ends are cushioned so that the analytic
  // escape time stays inside despite solver time bias.
  auto blowup_verdict = [&](double t_reached) {
    const std::size_t n = traj.times.size();
    const std::size_t m = std::min<std::size_t>(8, n);
    std::vector<double> ts, us;
    for (std::size_t i = n - m; i < n; ++i) {
      ts.push_back(traj.times[i]);
      us.push_back(1.0 / traj.states[i].norm());
    }
    double est = t_reached;
    FitLine line = fit_line(ts, us);
    if (line.ok && line.slope < 0.0) est = std::max(est, -line.intercept / line.slope);
    const double slack =
        std::max(4.0 * (est - t_reached), kEscapeSlack * (1.0 + std::abs(est)));
    TerminationVerdict v;
    v.kind = VerdictKind::BlowUp;
    v.t = t_reached;
    v.t_escape_low = std::min(t_reached, est - slack);
    v.t_escape_high = est + slack;
    return v;
  };

  Vec y = y0;
  double t = 0.0;
  Stepper st(field, int(y0.size()));

  if (!st.eval(y, st.k1_)) {
    // Field already singular at the initial point.
    record(t, y);
    traj.verdict.kind = VerdictKind::BlowUp;
    traj.verdict.t = 0.0;
    traj.verdict.t_escape_low = 0.0;
    traj.verdict.t_escape_high = std::min(t_max, 1e-6);
    return traj;
  }
  record(t, y);

  double h = initial_step(st, y, t_max, config);
  double facold = 1e-4;
  bool rejected = false;
  double prev_norm = y.norm();

  for (std::int64_t step = 0;; ++step) {
    if (step >= config.max_steps) {
      traj.verdict.kind = VerdictKind::StepLimit;
      traj.verdict.t = t;
      return traj;
    }

    bool last = false;
    if (t + 1.01 * h >= t_max) {
      h = t_max - t;
      last = true;
    }

    if (!st.attempt(y, h)) {
      // Non-finite stage: shrink and retry; certify blow-up when the step
      // floor is reached (the failure is then adjacent to the current state).
      if (h * 0.25 >= config.h_min) {
        h *= 0.25;
        rejected = true;
        continue;
      }
      traj.verdict = blowup_verdict(t);
      traj.verdict.t_escape_high = std::max(traj.verdict.t_escape_high, t + h);
      return traj;
    }

    const double err = st.error_norm(y, config);
    const double fac11 = std::pow(err, kExpo1);
    double fac = fac11 / std::pow(facold, kBeta);
    fac = std::max(1.0 / kFacGrowMax, std::min(kFacShrinkMax, fac / kSafe));
    double h_next = h / fac;

    if (err > 1.0) {
      h = h / std::min(kFacShrinkMax, fac11 / kSafe);
      rejected = true;
      if (h < config.h_min) {
        if (prev_norm > config.blowup_norm) {
          traj.verdict = blowup_verdict(t);
          return traj;
        }
        throw std::runtime_error("integrate: step size underflow at t=" + std::to_string(t));
      }
      continue;
    }

    // Accepted.
    facold = std::max(err, 1e-4);
    const double t_new = last ? t_max : t + h;
    if (!(t_new > t))
      throw std::runtime_error("integrate: step below time resolution at t=" + std::to_string(t));

    if (domain && !domain(st.ynew_)) {
      // Locate the first exit by bisection on the step interpolant.
      st.prepare_dense(y, h);
      double lo = 0.0, hi = (t_new - t) / h;
      while ((hi - lo) * h > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (domain(st.dense(mid))) lo = mid; else hi = mid;
      }
      const double theta = 0.5 * (lo + hi);
      const double t_exit = t + theta * h;
      if (t_exit > t) record(t_exit, st.dense(theta));
      traj.verdict.kind = VerdictKind::LeftDomain;
      traj.verdict.t = t_exit;
      return traj;
    }

    record(t_new, st.ynew_);
    const double norm_new = st.ynew_.norm();

    if (rejected) h_next = std::min(h_next, h);
    rejected = false;
    h_next = std::min(h_next, config.h_max);

    if (norm_new > config.blowup_norm &&
        (norm_new >= 2.0 * prev_norm || h_next < config.h_min)) {
      traj.verdict = blowup_verdict(t_new);
      return traj;
    }

    t = t_new;
    y = st.ynew_;
    prev_norm = norm_new;
    st.rotate_fsal();

    if (last) {
      traj.verdict.kind = VerdictKind::Completed;
      traj.verdict.t = t_max;
      return traj;
    }

    if (h_next < config.h_min)
      throw std::runtime_error("integrate: step size underflow at t=" + std::to_string(t));
    h = h_next;
  }
}

}  // namespace geoflow
