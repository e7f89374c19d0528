#include "hgeo/app.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>

#include <json.hpp>

#include "parallel.hpp"
#include "solver_internal.hpp"

namespace hgeo {

namespace {

constexpr double kSweepLow = 0.2;
constexpr double kSweepHigh = 5.0;
constexpr double kSweepDriftSquared = 0.8;

// Adds rays from a second stage that are not already present.
void merge_rays(SolveReport& report, const std::vector<Vec>& candidates, const Problem& problem,
                const SolveConfig& config) {
  const int m = problem.decomposition.m_dim();
  const int h = problem.decomposition.h_dim();
  const GeodesicSystem system(problem.algebra, problem.decomposition, problem.randers);
  const Mat lt = problem.randers.alpha_cholesky().transpose();
  const double limit = 2.0 * std::sin(0.5 * config.dedup_angle);
  std::vector<Vec> known;
  for (const auto& r : report.rays) known.push_back((lt * r.y.y).normalized());
  for (const Vec& y : candidates) {
    // A continuum is already represented by the enumeration; only genuinely
    // isolated roots are worth adding.
    Vec z = Vec::Zero(m + h);
    z.head(m) = y / problem.randers.alpha_norm(y);
    if (report.continuum_detected && detail::continuum_candidate(system, z)) continue;
    const Vec unit = (lt * y).normalized();
    if (std::any_of(known.begin(), known.end(),
                    [&](const Vec& u) { return (u - unit).norm() < limit; }))
      continue;
    GeodesicRay ray =
        detail::make_ray(z, problem.algebra, problem.randers, problem.decomposition, problem.killing);
    if (!(ray.residual_norm < detail::kSoundnessTol)) {
      ++report.stats.rejected;
      continue;
    }
    known.push_back(unit);
    report.rays.push_back(std::move(ray));
  }
  detail::sort_rays(report.rays);
}

}  // namespace

SolveReport run_solve(const ProblemConfig& config) {
  return run_solve(build_problem(config), config);
}

SolveReport run_solve(const Problem& problem, const ProblemConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  const SolveConfig& cfg = config.solve;
  SolveReport report =
      enumerate_rays(problem.algebra, problem.randers, problem.decomposition, cfg);

  std::vector<Vec> extra;
  if (problem.killing.signature.flat()) {
    const Mat hyperplane = config.case1_hyperplane
                               ? *config.case1_hyperplane
                               : default_case1_hyperplane(problem.algebra, problem.decomposition);
    const SupportPoints points = case1_support_points(problem.algebra, problem.randers,
                                                      problem.decomposition, hyperplane, cfg);
    extra = {points.n1, points.n2};
    report.case1 = points;
  } else {
    const VariationalResult result = variational_critical_points(
        problem.algebra, problem.randers, problem.decomposition, problem.killing, cfg);
    report.variational = result.summary();
    if (!result.degenerate_plateau)
      for (const auto& p : result.points) extra.push_back(p.ray.y.y);
  }
  merge_rays(report, extra, problem, cfg);
  report.audit = theorem_audit(problem.algebra, problem.randers, problem.decomposition, report);
  report.stats.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

SweepSummary run_audit_sweep(const std::string& family, int trials, std::uint64_t rng_seed,
                             const SolveConfig& base) {
  static const std::vector<std::string> families = {"so3", "sl2", "heisenberg"};
  if (family != "mixed" && std::find(families.begin(), families.end(), family) == families.end())
    throw Error(ErrorKind::input,
                "unknown sweep family '" + family + "' (expected so3, sl2, heisenberg or mixed)");
  if (trials < 1) throw Error(ErrorKind::input, "sweep needs at least one trial");
  base.validate();

  // All parameters are drawn up front so the draw order never depends on
  // scheduling.
  std::mt19937_64 rng(rng_seed);
  std::uniform_real_distribution<double> param(kSweepLow, kSweepHigh);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<int> pick(0, static_cast<int>(families.size()) - 1);
  SweepSummary summary;
  summary.family = family;
  summary.trials = trials;
  summary.rng_seed = rng_seed;
  summary.results.resize(static_cast<std::size_t>(trials));
  for (auto& t : summary.results) {
    t.family = family == "mixed" ? families[static_cast<std::size_t>(pick(rng))] : family;
    t.a = param(rng);
    t.b = param(rng);
    t.c = param(rng);
    Vec dir(3);
    for (int i = 0; i < 3; ++i) dir(i) = normal(rng);
    const double radius = std::sqrt(kSweepDriftSquared) * std::cbrt(unit(rng));
    t.drift = radius * dir.normalized();
  }

  detail::parallel_for(summary.results.size(), base.threads, [&](std::size_t i) {
    SweepTrial& t = summary.results[i];
    ProblemConfig cfg;
    cfg.algebra.family = t.family;
    cfg.algebra.a = t.a;
    cfg.algebra.b = t.b;
    cfg.algebra.c = t.c;
    cfg.algebra.scale = t.a;
    cfg.drift = t.drift;
    cfg.solve = base;
    cfg.solve.threads = 1;
    try {
      const SolveReport report = run_solve(cfg);
      t.infinite = report.audit.infinite;
      t.count = report.audit.ray_count;
      t.required_minimum = report.audit.required_minimum;
      t.pass = report.audit.pass;
    } catch (const Error& e) {
      t.error = e.what();
      t.pass = false;
    }
  });

  bool first_finite = true;
  summary.all_infinite = true;
  for (const auto& t : summary.results) {
    if (!t.pass) ++summary.failures;
    if (!t.error.empty()) continue;
    if (t.infinite) {
      summary.any_infinite = true;
      ++summary.distribution["infinity"];
      continue;
    }
    summary.all_infinite = false;
    ++summary.distribution[std::to_string(t.count)];
    summary.min_count = first_finite ? t.count : std::min(summary.min_count, t.count);
    summary.max_count = first_finite ? t.count : std::max(summary.max_count, t.count);
    first_finite = false;
  }
  if (first_finite) summary.all_infinite = summary.any_infinite;
  return summary;
}

std::string sweep_to_json(const SweepSummary& s) {
  using json = nlohmann::ordered_json;
  json doc;
  doc["version"] = "hgeo-sweep/1";
  doc["family"] = s.family;
  doc["trials"] = s.trials;
  doc["rng_seed"] = s.rng_seed;
  // With only continua there is no finite count; report "infinity".
  doc["min_count"] = s.all_infinite ? json("infinity") : json(s.min_count);
  doc["max_count"] = s.any_infinite ? json("infinity") : json(s.max_count);
  doc["failures"] = s.failures;
  json dist = json::object();
  for (const auto& [k, v] : s.distribution) dist[k] = v;
  doc["distribution"] = dist;
  json failed = json::array();
  for (std::size_t i = 0; i < s.results.size(); ++i) {
    const auto& t = s.results[i];
    if (t.pass) continue;
    json f;
    f["trial"] = i;
    f["family"] = t.family;
    f["a"] = t.a;
    f["b"] = t.b;
    f["c"] = t.c;
    f["V"] = std::vector<double>(t.drift.data(), t.drift.data() + t.drift.size());
    f["count"] = t.infinite ? json("infinity") : json(t.count);
    f["required_minimum"] = t.required_minimum;
    if (!t.error.empty()) f["error"] = t.error;
    failed.push_back(f);
  }
  doc["failed_trials"] = failed;
  return doc.dump(2) + "\n";
}

VerifyOutcome verify_report(const SolveReport& report, const ProblemConfig& config) {
  const Problem problem = build_problem(config);
  VerifyOutcome out;
  auto fail = [&](const std::string& msg) {
    out.pass = false;
    out.problems.push_back(msg);
  };
  const int m = problem.decomposition.m_dim();
  if (!(report.killing.signature == problem.killing.signature))
    fail("Killing signature in report does not match the configuration");

  for (std::size_t i = 0; i < report.rays.size(); ++i) {
    const GeodesicRay& ray = report.rays[i];
    const std::string tag = "ray " + std::to_string(i) + ": ";
    if (ray.y.y.size() != m || ray.isotropy.size() != problem.decomposition.h_dim()) {
      fail(tag + "dimension mismatch");
      continue;
    }
    const RayCheck check = check_ray(ray, problem.algebra, problem.randers,
                                     problem.decomposition, problem.killing);
    ++out.rays_checked;
    out.max_residual = std::max(out.max_residual, check.residual_norm);
    out.max_indicatrix_error = std::max(out.max_indicatrix_error, check.indicatrix_error);
    if (!(check.indicatrix_error <= 1e-10)) fail(tag + "not on the indicatrix");
    if (!(check.residual_norm < detail::kSoundnessTol)) fail(tag + "geodesic residual too large");
    if (!(check.lambda_error <= 1e-9 * std::max(1.0, std::abs(ray.lambda))))
      fail(tag + "lambda does not equal K(y,y)");
  }
  for (std::size_t i = 0; i < report.rays.size(); ++i)
    for (std::size_t j = i + 1; j < report.rays.size(); ++j)
      if (report.rays[i].y.y.size() == m && report.rays[j].y.y.size() == m &&
          ray_angle(report.rays[i].y.y, report.rays[j].y.y, problem.randers) <
              config.solve.dedup_angle)
        fail("rays " + std::to_string(i) + " and " + std::to_string(j) + " are duplicates");

  const Signature& sig = problem.killing.signature;
  const int required = sig.indefinite() ? 4 : 2;
  const auto& a = report.audit;
  if (a.required_minimum != required) fail("audit.required_minimum is inconsistent");
  if (a.infinite != report.continuum_detected) fail("audit.count disagrees with continuum flag");
  if (a.ray_count != static_cast<int>(report.rays.size()))
    fail("audit.ray_count disagrees with the ray list");
  const bool pass = report.continuum_detected || static_cast<int>(report.rays.size()) >= required;
  if (a.pass != pass) fail("audit.pass is inconsistent with the ray list");
  if (!pass) fail("audit failed: fewer rays than the required minimum");
  return out;
}

}  // namespace hgeo
