#include "geoflow/cli.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geoflow/chart_geometry.hpp"
#include "geoflow/expression.hpp"
#include "geoflow/frame_geometry.hpp"
#include "geoflow/integrator.hpp"
#include "geoflow/metric_lie_algebra.hpp"
#include "geoflow/scenarios.hpp"

namespace geoflow {

namespace {

Vec parse_vector(const std::string& text) {
  std::vector<double> vals;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      vals.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw input_error("could not parse number '" + item + "' in --y0");
    }
  }
  if (vals.empty()) throw input_error("--y0 must be a comma-separated list of numbers");
  Vec y(Eigen::Index(vals.size()));
  for (std::size_t i = 0; i < vals.size(); ++i) y[Eigen::Index(i)] = vals[i];
  return y;
}

std::optional<std::uint64_t> seed_from_env() {
  const char* s = std::getenv("GEOFLOW_SEED");
  if (!s || !*s) return std::nullopt;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(s, &end, 10);
  if (end == s || *end != '\0')
    throw input_error("GEOFLOW_SEED must be a non-negative integer");
  return std::uint64_t(v);
}

// Writes text to a file, or to `out` when path is empty.  I/O problems map
// to exit code 3 via io_error.
struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    return;
  }
  std::ofstream f(path);
  if (!f) throw io_error("cannot open output file: " + path);
  f << text << '\n';
  if (!f.good()) throw io_error("write failed: " + path);
}

struct RunFlags {
  std::string name;
  std::string out_path;
  std::string csv_dir;
  double rel_tol = 0.0, abs_tol = 0.0;
  bool has_rel = false, has_abs = false;
  double v0 = 0.0;
  bool has_v0 = false;
};

int do_run(const RunFlags& flags, std::ostream& out, std::ostream& err) {
  ScenarioOptions opt;
  if (flags.has_rel) opt.rel_tol = flags.rel_tol;
  if (flags.has_abs) opt.abs_tol = flags.abs_tol;
  if (flags.has_v0) opt.v0 = flags.v0;
  opt.seed = seed_from_env();
  opt.keep_trajectories = !flags.csv_dir.empty();

  std::vector<ScenarioReport> reports;
  if (flags.name == "all") {
    for (const auto& sc : registry()) reports.push_back(sc.run(opt));
  } else {
    reports.push_back(run_scenario(flags.name, opt));
  }

  if (!flags.csv_dir.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(flags.csv_dir, ec);
    if (ec) throw io_error("cannot create csv directory: " + flags.csv_dir);
    for (const auto& rep : reports)
      for (std::size_t i = 0; i < rep.runs.size(); ++i) {
        const auto path = std::filesystem::path(flags.csv_dir) /
                          (rep.name + "-run" + std::to_string(i) + ".csv");
        std::ofstream f(path);
        if (!f) throw io_error("cannot open csv file: " + path.string());
        rep.runs[i].trajectory.write_csv(f);
        if (!f.good()) throw io_error("write failed: " + path.string());
      }
  }

  bool all_pass = true;
  for (const auto& rep : reports) {
    int n_checks = 0, n_fail = 0;
    for (const auto& c : rep.checks) { ++n_checks; n_fail += !c.pass; }
    for (const auto& r : rep.runs)
      for (const auto& c : r.checks) { ++n_checks; n_fail += !c.pass; }
    all_pass = all_pass && n_fail == 0;
    err << rep.name << ": " << (n_fail == 0 ? "PASS" : "FAIL") << " (" << n_checks
        << " checks";
    if (n_fail > 0) err << ", " << n_fail << " failing";
    err << ")\n";
    for (const auto& r : rep.runs)
      for (const auto& c : r.checks)
        if (!c.pass) err << "  failed: " << c.name << " -- " << c.detail << "\n";
    for (const auto& c : rep.checks)
      if (!c.pass) err << "  failed: " << c.name << " -- " << c.detail << "\n";
  }

  std::string text;
  if (flags.name == "all") {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& rep : reports) arr.push_back(nlohmann::json::parse(rep.to_json()));
    text = arr.dump(2);
  } else {
    text = reports.front().to_json();
  }
  emit(text, flags.out_path, out);
  return all_pass ? 0 : 1;
}

struct IntegrateFlags {
  std::string system;
  std::string metric = "flat3";
  std::string algebra = "aff-r";
  std::string algebra_file;
  std::string structure = "reeb";
  std::string y0_text;
  double t_max = 10.0;
  double rel_tol = 0.0, abs_tol = 0.0;
  bool has_rel = false, has_abs = false;
  double alpha = 1.0, beta = 0.0;
  int transverse_dim = 1;
  std::string h_expr = "0";
  std::vector<std::string> w_exprs;
  std::vector<std::string> hij_exprs;
  std::string out_path;
};

ChartMetric build_kundt(const IntegrateFlags& f) {
  const int n = f.transverse_dim;
  auto H = analytic_scalar_from_expression(parse_kundt_entry(f.h_expr, n));
  std::vector<AnalyticScalar> W;
  if (f.w_exprs.empty()) {
    for (int i = 0; i < n; ++i)
      W.push_back(analytic_scalar_from_expression(parse_kundt_entry("0", n)));
  } else if (int(f.w_exprs.size()) == n) {
    for (const auto& e : f.w_exprs)
      W.push_back(analytic_scalar_from_expression(parse_kundt_entry(e, n)));
  } else {
    throw input_error("--W expects exactly n expressions (one per transverse coordinate)");
  }
  const auto un = std::size_t(n);
  std::vector<std::vector<AnalyticScalar>> h(un, std::vector<AnalyticScalar>(un));
  if (f.hij_exprs.empty()) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        h[std::size_t(i)][std::size_t(j)] =
            analytic_scalar_from_expression(parse_kundt_entry(i == j ? "1" : "0", n));
  } else if (int(f.hij_exprs.size()) == n * n) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        h[std::size_t(i)][std::size_t(j)] = analytic_scalar_from_expression(
            parse_kundt_entry(f.hij_exprs[std::size_t(i * n + j)], n));
  } else {
    throw input_error("--hij expects exactly n*n expressions, row-major");
  }
  return kundt_metric(n, H, W, h);
}

int do_integrate(const IntegrateFlags& flags, std::ostream& out, std::ostream& err) {
  IntegratorConfig cfg;
  if (flags.has_rel) cfg.rel_tol = flags.rel_tol;
  if (flags.has_abs) cfg.abs_tol = flags.abs_tol;
  Vec y0 = parse_vector(flags.y0_text);

  Field field;
  DomainPredicate domain;
  std::vector<Monitor> monitors;

  if (flags.system == "euler-arnold") {
    MetricLieAlgebra mla = [&] {
      if (!flags.algebra_file.empty()) {
        std::ifstream f(flags.algebra_file);
        if (!f) throw io_error("cannot open algebra file: " + flags.algebra_file);
        std::stringstream ss;
        ss << f.rdbuf();
        return metric_lie_algebra_from_json(ss.str());
      }
      if (flags.algebra == "aff-r") return aff_r_metric_algebra();
      if (flags.algebra == "sol-r") return sol_r_metric_algebra();
      throw input_error("unknown algebra: " + flags.algebra);
    }();
    if (y0.size() != mla.dim())
      throw input_error("--y0 must have " + std::to_string(mla.dim()) + " components");
    field = euler_arnold_ode(mla);
    monitors.push_back({"energy", [mla](const Vec& y) { return mla.energy(y); }});
  } else if (flags.system == "chart") {
    ChartMetric metric =
        flags.metric == "kundt" ? build_kundt(flags) : chart_metric_by_name(flags.metric);
    const int d = metric.dim();
    if (y0.size() != 2 * d)
      throw input_error("--y0 must have " + std::to_string(2 * d) +
                        " components (position then velocity)");
    if (!metric.in_domain(y0.head(d)))
      throw input_error("initial position is outside the chart domain");
    field = geodesic_field(metric);
    if (metric.domain())
      domain = [metric, d](const Vec& y) { return metric.in_domain(y.head(d)); };
    monitors.push_back({"energy", [metric, d](const Vec& y) {
                          return y.tail(d).dot(metric.g(y.head(d)) * y.tail(d));
                        }});
  } else if (flags.system == "frame") {
    FrameStructure fr = frame_structure_by_name(flags.structure);
    if (flags.alpha == 0.0)
      throw input_error("frame system: alpha = 0 is leafwise; use the chart engine");
    Vec state(4);
    if (y0.size() == 4) {
      state = y0;
    } else if (y0.size() == 3) {
      // (x, y, b): fill a from the pairing constraint.
      state << y0[0], y0[1], reduced_a0(flags.alpha, flags.beta, y0[2]), y0[2];
    } else {
      throw input_error("--y0 must be x,y,b or x,y,a,b for the frame system");
    }
    y0 = state;
    field = reduced_field(fr, flags.alpha, flags.beta);
    monitors.push_back(frame_constraint_monitor(flags.alpha, flags.beta));
  } else {
    throw input_error("--system must be euler-arnold, chart or frame");
  }

  Trajectory tr = integrate(field, y0, flags.t_max, cfg, domain, monitors);

  std::ostringstream csv;
  tr.write_csv(csv);
  emit(csv.str(), flags.out_path, out);

  err << "verdict: " << to_string(tr.verdict.kind);
  if (tr.verdict.kind == VerdictKind::BlowUp)
    err << " bracket [" << tr.verdict.t_escape_low << ", " << tr.verdict.t_escape_high << "]";
  else
    err << " t=" << tr.verdict.t;
  err << " (" << tr.size() << " accepted steps)\n";
  return 0;
}

int do_validate(std::ostream& out, std::ostream& err) {
  int failures = 0;
  auto attempt = [&](const std::string& label, auto&& fn) {
    try {
      fn();
      out << "ok " << label << "\n";
    } catch (const std::exception& e) {
      ++failures;
      out << "FAIL " << label << "\n";
      err << label << ": " << e.what() << "\n";
    }
  };

  attempt("algebra aff-r", [] {
    auto mla = aff_r_metric_algebra();
    if (mla.form().signature() != std::pair<int, int>(2, 1))
      throw invariant_violation("expected Lorentzian signature (2,1)");
  });
  attempt("algebra sol-r", [] {
    auto mla = sol_r_metric_algebra();
    if (mla.form().signature() != std::pair<int, int>(3, 1))
      throw invariant_violation("expected Lorentzian signature (3,1)");
  });
  for (const char* name :
       {"flat3", "clifton-pohl", "pp-wave-cos", "warped-sol", "hopf-halfspace"})
    attempt(std::string("metric ") + name, [name] { chart_metric_by_name(name); });
  attempt("killing fields pp-wave-cos", [] {
    auto m = pp_wave_cos_metric();
    coordinate_field(m, 0);
    coordinate_field(m, 1);
  });
  attempt("killing fields warped-sol", [] {
    auto m = warped_sol_metric();
    coordinate_field(m, 0);
    coordinate_field(m, 1);
    warped_sol_boost();
  });
  attempt("frame structure reeb", [] { reeb_structure(); });
  return failures == 0 ? 0 : 1;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"geoflow: numerical laboratory for geodesic completeness experiments"};
  app.require_subcommand(1);

  auto* list_cmd = app.add_subcommand("list", "List scenarios with their provenance notes");

  RunFlags rf;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario (or 'all') and emit a JSON report");
  run_cmd->add_option("name", rf.name, "scenario name or 'all'")->required();
  run_cmd->add_option("--out", rf.out_path, "write the JSON report to a file");
  run_cmd->add_option("--csv", rf.csv_dir, "write per-run trajectory CSVs into a directory");
  auto* rel = run_cmd->add_option("--rel-tol", rf.rel_tol, "override relative tolerance");
  auto* abs = run_cmd->add_option("--abs-tol", rf.abs_tol, "override absolute tolerance");
  auto* v0 = run_cmd->add_option("--v0", rf.v0, "hopf-affine-length initial height");

  IntegrateFlags itf;
  auto* int_cmd = app.add_subcommand("integrate", "Integrate an ad-hoc system and emit CSV");
  int_cmd->add_option("--system", itf.system, "euler-arnold | chart | frame")->required();
  int_cmd->add_option("--metric", itf.metric, "chart metric name (or 'kundt')");
  int_cmd->add_option("--algebra", itf.algebra, "built-in algebra: aff-r | sol-r");
  int_cmd->add_option("--algebra-file", itf.algebra_file, "JSON algebra definition file");
  int_cmd->add_option("--structure", itf.structure, "frame structure name");
  int_cmd->add_option("--y0", itf.y0_text, "comma-separated initial state")->required();
  int_cmd->add_option("--t-max", itf.t_max, "integration horizon");
  auto* irel = int_cmd->add_option("--rel-tol", itf.rel_tol, "relative tolerance");
  auto* iabs = int_cmd->add_option("--abs-tol", itf.abs_tol, "absolute tolerance");
  int_cmd->add_option("--alpha", itf.alpha, "frame Clairaut constant (nonzero)");
  int_cmd->add_option("--beta", itf.beta, "frame causal character g(gamma',gamma')");
  int_cmd->add_option("--transverse-dim", itf.transverse_dim, "kundt: number of x coordinates");
  int_cmd->add_option("--H", itf.h_expr, "kundt: H(u,v,x) expression");
  int_cmd->add_option("--W", itf.w_exprs, "kundt: W_i expressions (n of them)");
  int_cmd->add_option("--hij", itf.hij_exprs, "kundt: h_ij expressions (n*n, row-major)");
  int_cmd->add_option("--out", itf.out_path, "write the CSV to a file");

  auto* val_cmd = app.add_subcommand("validate", "Run construction-time validation of built-ins");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n";
    return 2;
  }

  rf.has_rel = rel->count() > 0;
  rf.has_abs = abs->count() > 0;
  rf.has_v0 = v0->count() > 0;
  itf.has_rel = irel->count() > 0;
  itf.has_abs = iabs->count() > 0;

  try {
    if (list_cmd->parsed()) {
      for (const auto& sc : registry()) out << sc.name << ": " << sc.paper_ref << "\n";
      return 0;
    }
    if (run_cmd->parsed()) return do_run(rf, out, err);
    if (int_cmd->parsed()) return do_integrate(itf, out, err);
    if (val_cmd->parsed()) return do_validate(out, err);
  } catch (const io_error& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const input_error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace geoflow
