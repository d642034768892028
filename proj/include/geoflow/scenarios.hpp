#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "geoflow/chart_geometry.hpp"
#include "geoflow/frame_geometry.hpp"
#include "geoflow/integrator.hpp"
#include "geoflow/metric_lie_algebra.hpp"
#include "geoflow/rng.hpp"

namespace geoflow {

inline constexpr std::uint64_t kDefaultScenarioSeed = 20250811ull;

struct ScenarioOptions {
  std::optional<double> rel_tol;
  std::optional<double> abs_tol;
  std::optional<std::uint64_t> seed;
  std::optional<double> v0;        // hopf-affine-length initial height
  bool keep_trajectories = false;  // retain full trajectories (CSV export)
};

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct RunRecord {
  Vec initial;
  TerminationVerdict verdict;
  std::vector<std::pair<std::string, double>> drifts;
  std::vector<CheckResult> checks;
  Trajectory trajectory;  // populated only when keep_trajectories is set
};

struct ScenarioReport {
  std::string name;
  std::string paper_ref;
  IntegratorConfig config;
  std::uint64_t seed = 0;
  std::vector<RunRecord> runs;
  std::vector<CheckResult> checks;  // cross-run checks

  bool all_pass() const;
  std::string to_json(int indent = 2) const;
};

struct Scenario {
  std::string name;
  std::string paper_ref;
  std::string system;  // euler_arnold | chart | frame
  double t_max = 0.0;
  std::string expected;
  std::function<ScenarioReport(const ScenarioOptions&)> run;
};

// The nine named reference examples, in registry order.
const std::vector<Scenario>& registry();

ScenarioReport run_scenario(const std::string& name, const ScenarioOptions& options = {});

// ---- system assembly shared with the acceptance suite ----------------------

// Euler-Arnold flow ydot = ad*_y y as an integrator field.
Field euler_arnold_ode(const MetricLieAlgebra& mla);

enum class AlgebraKind { AffR, SolR };

MetricLieAlgebra built_in_algebra(AlgebraKind kind);

// Index of the central null Killing generator V in the fixed basis.
int killing_generator_index(AlgebraKind kind);

// Seeded draw with a forward-bounded orbit (closed-form trapping condition).
// Generic initial data on these algebras blows up in finite time or grows
// exponentially; conservation over t in [0, 100] is only a meaningful float
// statement on orbits that stay at unit scale.
Vec draw_bounded_state(AlgebraKind kind, SeededRng& rng);

// Seeded draw tangent to the hyperplane q(. , V) = 0 whose orbit stays
// bounded for all time (the complete-but-exponential directions exceed
// double range long before t = 1e4 and are excluded).
Vec draw_hyperplane_state(AlgebraKind kind, SeededRng& rng);

// Conserved-quantity monitors.  Quantities that blow up with the state are
// logged as scale-normalized residuals (value - initial) / max(1, scale);
// the raw difference through a certified blow-up is ulp-dominated.
Monitor energy_residual_monitor(const MetricLieAlgebra& mla, const Vec& y0);
Monitor pairing_monitor(const MetricLieAlgebra& mla, int generator_index,
                        const std::string& name);
Monitor chart_energy_residual_monitor(const ChartMetric& metric, const Vec& y0);
Monitor chart_clairaut_monitor(const ChartMetric& metric, const VectorFieldSpec& field,
                               const std::string& name);
Monitor frame_constraint_monitor(double alpha, double beta);

}  // namespace geoflow
