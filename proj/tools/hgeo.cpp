// hgeo: find and certify homogeneous geodesic vectors of invariant Randers
// metrics on Lie groups.
//
// Exit codes: 0 pass, 1 input error, 2 audit or verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "hgeo/app.hpp"
#include "hgeo/config.hpp"
#include "hgeo/kernels.hpp"
#include "hgeo/plot.hpp"
#include "hgeo/report.hpp"

namespace {

constexpr int kExitPass = 0;
constexpr int kExitInput = 1;
constexpr int kExitAudit = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw hgeo::Error(hgeo::ErrorKind::input, "cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw hgeo::Error(hgeo::ErrorKind::input, "cannot write '" + path + "'");
  out << text;
}

std::string count_text(const hgeo::AuditVerdict& a) {
  return a.infinite ? std::string("infinity") : std::to_string(a.ray_count);
}

struct SolveOptions {
  std::string config;
  std::string json_out;
  long long seed = -1;
  int seeds = 0;
  int threads = -1;
};

void apply(const SolveOptions& o, hgeo::ProblemConfig& cfg) {
  if (o.seed >= 0) cfg.solve.rng_seed = static_cast<std::uint64_t>(o.seed);
  if (o.seeds > 0) cfg.solve.seeds = o.seeds;
  if (o.threads >= 0) cfg.solve.threads = o.threads;
}

int cmd_analyze(const SolveOptions& o) {
  const hgeo::ProblemConfig cfg = hgeo::load_config(o.config);
  const hgeo::Problem problem = hgeo::build_problem(cfg);
  write_output(o.json_out, hgeo::analysis_to_json(problem, cfg));
  return kExitPass;
}

int cmd_solve(const SolveOptions& o) {
  hgeo::ProblemConfig cfg = hgeo::load_config(o.config);
  apply(o, cfg);
  const hgeo::SolveReport report = hgeo::run_solve(cfg);
  write_output(o.json_out, hgeo::report_to_json(report, cfg));
  const auto& a = report.audit;
  std::fprintf(stderr, "signature (%d,%d,%d): %s rays, required %d: %s\n", a.signature.positive,
               a.signature.negative, a.signature.zero, count_text(a).c_str(), a.required_minimum,
               a.pass ? "PASS" : "FAIL");
  return a.pass ? kExitPass : kExitAudit;
}

struct PlotOptions {
  SolveOptions solve;
  std::string plane;
  std::string out;
  std::string report;
  int resolution = 0;
  double extent = 0.0;
};

int cmd_plot(const PlotOptions& o) {
  hgeo::ProblemConfig cfg = hgeo::load_config(o.solve.config);
  apply(o.solve, cfg);
  if (!o.plane.empty()) {
    cfg.plot.plane = o.plane;
    cfg.plot.axes.reset();
  }
  if (o.resolution > 0) cfg.plot.resolution = o.resolution;
  if (o.extent > 0.0) cfg.plot.extent = o.extent;
  const hgeo::Problem problem = hgeo::build_problem(cfg);
  const hgeo::SliceSpec spec = hgeo::make_slice(cfg.plot, problem.decomposition.m_dim());
  const hgeo::SolveReport report = o.report.empty()
                                       ? hgeo::run_solve(problem, cfg)
                                       : hgeo::report_from_json(read_file(o.report));
  const hgeo::SliceGeometry geometry = hgeo::compute_slice(problem, report, spec);
  write_output(o.out, hgeo::render_svg(geometry));
  for (const auto& w : geometry.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
  std::fprintf(stderr, "plane %s: %zu red rays\n", spec.label.c_str(), geometry.rays.size());
  return kExitPass;
}

struct SweepOptions {
  std::string family = "so3";
  int trials = 100;
  long long seed = 42;
  int seeds = 400;
  int threads = 0;
  std::string json_out;
};

int cmd_sweep(const SweepOptions& o) {
  if (o.seed < 0) throw hgeo::Error(hgeo::ErrorKind::input, "--seed must be nonnegative");
  hgeo::SolveConfig base;
  base.seeds = o.seeds;
  base.threads = o.threads;
  base.rng_seed = static_cast<std::uint64_t>(o.seed);
  const hgeo::SweepSummary summary =
      hgeo::run_audit_sweep(o.family, o.trials, static_cast<std::uint64_t>(o.seed), base);
  write_output(o.json_out, hgeo::sweep_to_json(summary));
  std::fprintf(stderr, "%s sweep: %d trials, %d failures\n", summary.family.c_str(), summary.trials,
               summary.failures);
  return summary.failures == 0 ? kExitPass : kExitAudit;
}

int cmd_verify(const std::string& report_path, const std::string& config_path) {
  const hgeo::SolveReport report = hgeo::report_from_json(read_file(report_path));
  const hgeo::ProblemConfig cfg = hgeo::load_config(config_path);
  const hgeo::VerifyOutcome outcome = hgeo::verify_report(report, cfg);
  for (const auto& p : outcome.problems) std::fprintf(stderr, "%s\n", p.c_str());
  std::printf("%d rays checked, max residual %.3e, max |F-1| %.3e: %s\n", outcome.rays_checked,
              outcome.max_residual, outcome.max_indicatrix_error, outcome.pass ? "PASS" : "FAIL");
  return outcome.pass ? kExitPass : kExitAudit;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homogeneous geodesics of invariant Randers metrics on Lie groups"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("hgeo 1.0 (") + hgeo::kReportVersion + ")");

  SolveOptions analyze_opts;
  auto* analyze = app.add_subcommand("analyze", "Killing form and signature on m");
  analyze->add_option("config", analyze_opts.config, "Problem file")->required();
  analyze->add_option("--json", analyze_opts.json_out, "Write JSON here instead of stdout");

  SolveOptions solve_opts;
  auto* solve = app.add_subcommand("solve", "Enumerate geodesic rays and audit the lower bound");
  solve->add_option("config", solve_opts.config, "Problem file")->required();
  solve->add_option("--json", solve_opts.json_out, "Write the report here instead of stdout");
  solve->add_option("--seed", solve_opts.seed, "RNG seed (overrides the config)");
  solve->add_option("--seeds", solve_opts.seeds, "Number of multistart seeds");
  solve->add_option("--threads", solve_opts.threads, "Worker threads (0: all cores)");

  PlotOptions plot_opts;
  auto* plot = app.add_subcommand("plot", "SVG slice of the indicatrix, Killing sphere and rays");
  plot->add_option("config", plot_opts.solve.config, "Problem file")->required();
  plot->add_option("--plane", plot_opts.plane, "Coordinate plane such as x3=0");
  plot->add_option("--out", plot_opts.out, "SVG output path")->required();
  plot->add_option("--report", plot_opts.report, "Use a saved report instead of solving");
  plot->add_option("--resolution", plot_opts.resolution, "Samples per curve");
  plot->add_option("--extent", plot_opts.extent, "Plot half-width");
  plot->add_option("--seed", plot_opts.solve.seed, "RNG seed (overrides the config)");
  plot->add_option("--threads", plot_opts.solve.threads, "Worker threads (0: all cores)");

  SweepOptions sweep_opts;
  auto* sweep = app.add_subcommand("sweep", "Randomized audit of the lower bound");
  sweep->add_option("--family", sweep_opts.family, "so3, sl2, heisenberg or mixed");
  sweep->add_option("--trials", sweep_opts.trials, "Number of random configurations");
  sweep->add_option("--seed", sweep_opts.seed, "RNG seed");
  sweep->add_option("--seeds", sweep_opts.seeds, "Multistart seeds per trial");
  sweep->add_option("--threads", sweep_opts.threads, "Worker threads (0: all cores)");
  sweep->add_option("--json", sweep_opts.json_out, "Write the summary here instead of stdout");

  std::string verify_report_path;
  std::string verify_config_path;
  auto* verify = app.add_subcommand("verify", "Re-check a saved report against its problem");
  verify->add_option("report", verify_report_path, "Report JSON")->required();
  verify->add_option("config", verify_config_path, "Problem file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitInput;
  }

  try {
    if (*analyze) return cmd_analyze(analyze_opts);
    if (*solve) return cmd_solve(solve_opts);
    if (*plot) return cmd_plot(plot_opts);
    if (*sweep) return cmd_sweep(sweep_opts);
    if (*verify) return cmd_verify(verify_report_path, verify_config_path);
  } catch (const hgeo::Error& e) {
    std::fprintf(stderr, "error (%s): %s\n", hgeo::to_string(e.kind()), e.what());
    return e.kind() == hgeo::ErrorKind::solver_failure ? kExitAudit : kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  return kExitInput;
}
