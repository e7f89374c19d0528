#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "solver_internal.hpp"

namespace hgeo {

const char* to_string(RayKind kind) {
  return kind == RayKind::isolated ? "isolated" : "continuum_member";
}

const char* to_string(KillingSign sign) {
  switch (sign) {
    case KillingSign::positive: return "positive";
    case KillingSign::negative: return "negative";
    case KillingSign::null: return "null";
  }
  return "null";
}

const char* to_string(CriticalType type) {
  switch (type) {
    case CriticalType::maximum: return "maximum";
    case CriticalType::minimum: return "minimum";
    case CriticalType::saddle: return "saddle";
    case CriticalType::degenerate: return "degenerate";
  }
  return "degenerate";
}

void SolveConfig::validate() const {
  if (seeds <= 0) throw Error(ErrorKind::input, "solver.seeds must be positive");
  if (!(newton_tol > 0.0)) throw Error(ErrorKind::input, "solver.newton_tol must be positive");
  if (max_iter <= 0) throw Error(ErrorKind::input, "solver.max_iter must be positive");
  if (!(dedup_angle > 0.0)) throw Error(ErrorKind::input, "solver.dedup_angle must be positive");
  if (!(continuum_fraction > 0.0 && continuum_fraction < 1.0))
    throw Error(ErrorKind::input, "solver.continuum_fraction must lie in (0,1)");
  if (threads < 0) throw Error(ErrorKind::input, "solver.threads must be nonnegative");
}

double ray_angle(const Vec& u, const Vec& v, const RandersStructure& randers) {
  const Vec a = u / randers.alpha_norm(u);
  const Vec b = v / randers.alpha_norm(v);
  const Vec diff = a - b;
  const Vec sum = a + b;
  return 2.0 * std::atan2(randers.alpha_norm(diff), randers.alpha_norm(sum));
}

std::vector<Vec> sphere_seeds(int dim, int count, std::uint64_t rng_seed) {
  if (dim < 1 || count < 0) throw Error(ErrorKind::input, "sphere_seeds: bad arguments");
  std::vector<Vec> out;
  out.reserve(count);
  const int lattice = (count + 1) / 2;
  if (dim == 1) {
    for (int k = 0; k < count; ++k) out.push_back(Vec::Constant(1, k % 2 == 0 ? 1.0 : -1.0));
    return out;
  }
  for (int k = 0; k < lattice; ++k) {
    Vec v(dim);
    if (dim == 2) {
      const double t = 2.0 * std::numbers::pi * (k + 0.5) / lattice;
      v << std::cos(t), std::sin(t);
    } else if (dim == 3) {
      const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
      const double z = 1.0 - (2.0 * k + 1.0) / lattice;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      v << r * std::cos(golden * k), r * std::sin(golden * k), z;
    } else {
      // Kronecker sequence with the generalized golden ratio of order dim.
      double phi = 2.0;
      for (int it = 0; it < 64; ++it) phi = std::pow(1.0 + phi, 1.0 / (dim + 1));
      for (int j = 0; j < dim; ++j) {
        const double step = std::pow(1.0 / phi, j + 1);
        const double u = std::fmod(0.5 + step * (k + 1), 1.0);
        v(j) = 2.0 * u - 1.0;
      }
      if (v.norm() == 0.0) v(0) = 1.0;
    }
    out.push_back(v.normalized());
  }
  std::mt19937_64 rng(rng_seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  while (static_cast<int>(out.size()) < count) {
    Vec v(dim);
    for (int j = 0; j < dim; ++j) v(j) = normal(rng);
    const double n = v.norm();
    if (n < 1e-12) continue;
    out.push_back(v / n);
  }
  return out;
}

RayCheck check_ray(const GeodesicRay& ray, const LieAlgebra& algebra,
                   const RandersStructure& randers,
                   const ReductiveDecomposition& decomposition,
                   const KillingData& killing) {
  RayCheck check;
  check.indicatrix_error = std::abs(randers_norm(ray.y.y, randers) - 1.0);
  Vec full = decomposition.embed(ray.y.y);
  if (ray.isotropy.size() > 0) full += decomposition.h_basis() * ray.isotropy;
  check.residual_norm = general_residual(full, decomposition, randers, algebra).norm;
  check.lambda_error = std::abs(killing.form(ray.y.y, ray.y.y) - ray.lambda);
  return check;
}

namespace detail {

Vec to_alpha_sphere(const Vec& unit, const RandersStructure& randers) {
  // x = L^{-T} s gives x^T alpha x = s^T s = 1.
  return randers.alpha_cholesky().transpose().triangularView<Eigen::Upper>().solve(unit);
}

KillingSign sign_of(double k_value, double tol) {
  if (k_value > tol) return KillingSign::positive;
  if (k_value < -tol) return KillingSign::negative;
  return KillingSign::null;
}

void sort_rays(std::vector<GeodesicRay>& rays) {
  std::sort(rays.begin(), rays.end(), [](const GeodesicRay& a, const GeodesicRay& b) {
    return std::lexicographical_compare(a.y.y.begin(), a.y.y.end(), b.y.y.begin(), b.y.y.end());
  });
}

NewtonOutcome solve_geodesic_system(const GeodesicSystem& system, Vec z,
                                    const SolveConfig& config) {
  const int m = system.m_dim();
  const int n = system.unknowns();
  const RandersStructure& randers = system.randers();
  const double tol = config.newton_tol * system.scale();

  NewtonOutcome out;
  auto normalize = [&](Vec& v) -> bool {
    const double s = randers.alpha_norm(v.head(m));
    if (!(s > 1e-14) || !std::isfinite(s)) return false;
    v /= s;
    return true;
  };
  if (!normalize(z)) return out;
  Vec r = system.residual(z);
  double rn = r.norm();

  Mat aug(m + 1, n);
  Vec rhs(m + 1);
  int it = 0;
  int polish = 0;
  for (; it < config.max_iter; ++it) {
    if (rn <= tol) {
      // A couple of extra steps push converged roots to rounding level.
      if (polish++ >= 2) break;
    }
    aug.topRows(m) = system.jacobian(z);
    aug.row(m).setZero();
    aug.row(m).head(m) = 2.0 * (randers.alpha() * z.head(m)).transpose();
    rhs.head(m) = -r;
    rhs(m) = 0.0;
    const Vec step = aug.completeOrthogonalDecomposition().solve(rhs);
    if (!step.allFinite()) break;

    double t = 1.0;
    bool accepted = false;
    Vec trial;
    Vec trial_r;
    for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
      trial = z + t * step;
      if (!normalize(trial)) continue;
      trial_r = system.residual(trial);
      if (trial_r.norm() < rn * (1.0 - 1e-4 * t)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
    z = std::move(trial);
    r = std::move(trial_r);
    rn = r.norm();
  }
  out.converged = rn <= tol;
  out.z = std::move(z);
  out.iterations = it;
  out.residual = rn;
  return out;
}

bool continuum_candidate(const GeodesicSystem& system, const Vec& z) {
  const int m = system.m_dim();
  const int n = system.unknowns();
  Mat aug(m + 1, n);
  aug.topRows(m) = system.jacobian(z);
  aug.row(m).setZero();
  aug.row(m).head(m) = 2.0 * (system.randers().alpha() * z.head(m)).transpose();
  Eigen::JacobiSVD<Mat> svd(aug, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double thresh = 1e-8 * std::max(1e-300, s(0));
  int rank = 0;
  while (rank < s.size() && s(rank) > thresh) ++rank;
  const Mat& v = svd.matrixV();
  for (int c = rank; c < n; ++c)
    if (v.col(c).head(m).norm() > 1e-6) return true;
  return false;
}

GeodesicRay make_ray(const Vec& z, const LieAlgebra& algebra, const RandersStructure& randers,
                     const ReductiveDecomposition& decomposition, const KillingData& killing) {
  const int m = decomposition.m_dim();
  const double f = randers_norm(z.head(m), randers);
  const Vec scaled = z / f;
  GeodesicRay ray;
  ray.y.y = scaled.head(m);
  ray.y.killing_value = killing.form(ray.y.y, ray.y.y);
  ray.isotropy = scaled.tail(decomposition.h_dim());
  Vec full = decomposition.embed(ray.y.y);
  if (ray.isotropy.size() > 0) full += decomposition.h_basis() * ray.isotropy;
  ray.residual_norm = general_residual(full, decomposition, randers, algebra).norm;
  ray.lambda = ray.y.killing_value;
  ray.k_sign = sign_of(ray.lambda, killing.tol);
  return ray;
}

}  // namespace detail

}  // namespace hgeo
