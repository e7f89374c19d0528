#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "hgeo/kernels.hpp"
#include "parallel.hpp"
#include "solver_internal.hpp"

namespace hgeo {

namespace {

constexpr int kScanFactor = 20;
constexpr int kMaxScanSeeds = 64;
constexpr double kScanExclusion = 0.02;  // radians

struct Cluster {
  Vec z;     // first member in seed order
  Vec unit;  // L^T z_m normalized: alpha-angles become Euclidean angles
  int members = 1;
  bool candidate = false;
};

Vec whiten(const Vec& x, const RandersStructure& randers) {
  return (randers.alpha_cholesky().transpose() * x).normalized();
}

// Chord length on the unit sphere for a given angle.
double chord(double angle) { return 2.0 * std::sin(0.5 * angle); }

void add_to_clusters(std::vector<Cluster>& clusters, const Vec& z, int m,
                     const RandersStructure& randers, double dedup_angle) {
  const Vec unit = whiten(z.head(m), randers);
  const double limit = chord(dedup_angle);
  for (auto& c : clusters) {
    if ((c.unit - unit).norm() < limit) {
      ++c.members;
      return;
    }
  }
  clusters.push_back(Cluster{z, unit, 1, false});
}

}  // namespace

SolveReport enumerate_rays(const LieAlgebra& algebra, const RandersStructure& randers,
                           const ReductiveDecomposition& decomposition,
                           const SolveConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  config.validate();
  const int m = decomposition.m_dim();
  if (m < 2) throw Error(ErrorKind::input, "enumerate_rays: dim m must be at least 2");

  const GeodesicSystem system(algebra, decomposition, randers);
  SolveReport report;
  report.killing = killing_data(algebra, decomposition);

  const auto units = sphere_seeds(m, config.seeds, config.rng_seed);
  std::vector<detail::NewtonOutcome> outcomes(units.size());
  const int h = decomposition.h_dim();
  auto run_seed = [&](const Vec& unit) {
    Vec z = Vec::Zero(m + h);
    z.head(m) = detail::to_alpha_sphere(unit, randers);
    return detail::solve_geodesic_system(system, std::move(z), config);
  };
  detail::parallel_for(units.size(), config.threads,
                       [&](std::size_t i) { outcomes[i] = run_seed(units[i]); });

  std::vector<Cluster> clusters;
  long total_iterations = 0;
  for (const auto& o : outcomes) {
    total_iterations += o.iterations;
    report.stats.max_iterations = std::max(report.stats.max_iterations, o.iterations);
    if (!o.converged) continue;
    ++report.stats.converged;
    add_to_clusters(clusters, o.z, m, randers, config.dedup_angle);
  }
  report.stats.seeds = static_cast<int>(units.size());

  auto classify = [&](std::size_t from) {
    for (std::size_t i = from; i < clusters.size(); ++i)
      clusters[i].candidate = detail::continuum_candidate(system, clusters[i].z);
  };
  auto continuum_confirmed = [&] {
    const auto candidates = std::count_if(clusters.begin(), clusters.end(),
                                          [](const Cluster& c) { return c.candidate; });
    const double needed =
        std::max(2.0, std::ceil(config.continuum_fraction * report.stats.converged));
    return static_cast<double>(candidates) >= needed;
  };
  classify(0);
  report.continuum_detected = continuum_confirmed();

  // Dense batched scan for basins the multistart may have missed.
  report.stats.isa = kernels::to_string(kernels::detect_isa());
  if (!report.continuum_detected && system.trivial_isotropy() && m <= kernels::kMaxDim) {
    const auto data = kernels::ResidualKernelData::from(system);
    const auto scan_units = sphere_seeds(m, kScanFactor * config.seeds,
                                         config.rng_seed ^ 0x9e3779b97f4a7c15ULL);
    const std::size_t count = scan_units.size();
    std::vector<Vec> scan_points(count);
    std::vector<double> soa(count * m);
    for (std::size_t p = 0; p < count; ++p) {
      scan_points[p] = detail::to_alpha_sphere(scan_units[p], randers);
      for (int a = 0; a < m; ++a) soa[a * count + p] = scan_points[p](a);
    }
    std::vector<double> norms(count);
    kernels::residual_norms(data, soa, norms);
    std::vector<std::size_t> order(count);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return norms[a] < norms[b]; });

    std::vector<Vec> picks;
    for (std::size_t idx : order) {
      if (static_cast<int>(picks.size()) >= kMaxScanSeeds) break;
      const Vec unit = whiten(scan_points[idx], randers);
      const double limit = chord(kScanExclusion);
      auto far = [&](const Vec& other) { return (other - unit).norm() > limit; };
      if (!std::all_of(clusters.begin(), clusters.end(),
                       [&](const Cluster& c) { return far(c.unit); }))
        continue;
      if (!std::all_of(picks.begin(), picks.end(),
                       [&](const Vec& p) { return far(whiten(p, randers)); }))
        continue;
      picks.push_back(scan_points[idx]);
    }
    std::vector<detail::NewtonOutcome> extra(picks.size());
    detail::parallel_for(picks.size(), config.threads, [&](std::size_t i) {
      extra[i] = detail::solve_geodesic_system(system, picks[i], config);
    });
    report.stats.extra_seeds = static_cast<int>(picks.size());
    const std::size_t before = clusters.size();
    for (const auto& o : extra) {
      total_iterations += o.iterations;
      report.stats.max_iterations = std::max(report.stats.max_iterations, o.iterations);
      if (!o.converged) continue;
      ++report.stats.converged;
      add_to_clusters(clusters, o.z, m, randers, config.dedup_angle);
    }
    classify(before);
    report.continuum_detected = continuum_confirmed();
  }

  const int launched = report.stats.seeds + report.stats.extra_seeds;
  report.stats.mean_iterations =
      launched > 0 ? static_cast<double>(total_iterations) / launched : 0.0;
  if (report.stats.converged == 0)
    throw Error(ErrorKind::solver_failure, "enumerate_rays: no seed converged");

  for (const auto& c : clusters) {
    GeodesicRay ray = detail::make_ray(c.z, algebra, randers, decomposition, report.killing);
    if (!(ray.residual_norm < detail::kSoundnessTol)) {
      ++report.stats.rejected;
      continue;
    }
    ray.kind = (report.continuum_detected && c.candidate) ? RayKind::continuum_member
                                                          : RayKind::isolated;
    report.rays.push_back(std::move(ray));
  }
  if (report.rays.empty())
    throw Error(ErrorKind::solver_failure, "enumerate_rays: no root passed verification");
  detail::sort_rays(report.rays);
  report.audit = theorem_audit(algebra, randers, decomposition, report);
  report.stats.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  return report;
}

AuditVerdict theorem_audit([[maybe_unused]] const LieAlgebra& algebra,
                           [[maybe_unused]] const RandersStructure& randers,
                           [[maybe_unused]] const ReductiveDecomposition& decomposition,
                           const SolveReport& report) {
  AuditVerdict v;
  v.signature = report.killing.signature;
  v.infinite = report.continuum_detected;
  v.ray_count = static_cast<int>(report.rays.size());
  v.required_minimum = v.signature.indefinite() ? 4 : 2;
  v.pass = v.infinite || v.ray_count >= v.required_minimum;
  return v;
}

}  // namespace hgeo
