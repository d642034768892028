#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "geoflow/errors.hpp"

namespace geoflow {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

// Right-hand side of an autonomous system ydot = field(y).
// Writes the derivative into dydt (pre-sized to y.size()).
using Field = std::function<void(const Vec& y, Vec& dydt)>;

// True while the state is inside the admissible region.
using DomainPredicate = std::function<bool(const Vec& y)>;

// Named scalar observable logged at every accepted step.
struct Monitor {
  std::string name;
  std::function<double(const Vec& y)> eval;
};

struct IntegratorConfig {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double h_min = 1e-14;
  double h_max = std::numeric_limits<double>::infinity();
  double blowup_norm = 1e8;  // escape radius
  std::int64_t max_steps = 10'000'000;

  void validate() const;
};

enum class VerdictKind { Completed, BlowUp, LeftDomain, StepLimit };

struct TerminationVerdict {
  VerdictKind kind = VerdictKind::Completed;
  // Completed: t_final; LeftDomain: t_exit; StepLimit: t_reached.
  double t = 0.0;
  // BlowUp only: bracket around the escape parameter.
  double t_escape_low = 0.0;
  double t_escape_high = 0.0;
};

const char* to_string(VerdictKind kind);

struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;
  // One series per monitor, aligned with times; registration order preserved.
  std::vector<std::pair<std::string, std::vector<double>>> monitors;
  TerminationVerdict verdict;

  std::size_t size() const { return times.size(); }
  const std::vector<double>& monitor(const std::string& name) const;

  // Header "t,y0,...,m:<name>...", one row per accepted step, 17 significant digits.
  void write_csv(std::ostream& os) const;
};

// Advances an error-controlled Dormand-Prince 5(4) pair until t_max, domain
// exit, blow-up certification or the step budget runs out.
Trajectory integrate(const Field& field, const Vec& y0, double t_max,
                     const IntegratorConfig& config = {},
                     const DomainPredicate& domain = {},
                     const std::vector<Monitor>& monitors = {});

// Bracket of the escape parameter; requires a BlowUp verdict.
std::pair<double, double> escape_time_bracket(const Trajectory& trajectory);

// max over samples of |m(t) - m(0)| / max(1, |m(0)|).
double max_drift(const Trajectory& trajectory, const std::string& monitor_name);

}  // namespace geoflow
