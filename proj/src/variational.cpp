#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "parallel.hpp"
#include "solver_internal.hpp"

namespace hgeo {

namespace {

constexpr int kAscentIterations = 200;

struct Candidate {
  bool ok = false;
  Vec z;
};

class RatioProblem {
 public:
  RatioProblem(const Mat& killing, const RandersStructure& randers)
      : k_(killing), randers_(randers) {
    k_scale_ = std::max(1.0, k_.cwiseAbs().maxCoeff());
  }

  double ratio(const Vec& z) const {
    const double f = randers_norm(z, randers_);
    return z.dot(k_ * z) / (f * f);
  }

  bool retract(Vec& z) const {
    const double f = randers_norm(z, randers_);
    if (!(f > 1e-14) || !std::isfinite(f)) return false;
    z /= f;
    return true;
  }

  // Tangential gradient of f on I_F at z with F(z) = 1.
  Vec tangent_gradient(const Vec& z) const {
    const Vec g = randers_gradient(z, randers_);
    const Vec grad = 2.0 * (k_ * z) - 2.0 * ratio(z) * g;
    return grad - (grad.dot(g) / g.dot(g)) * g;
  }

  // Ascent of sign * f, staying inside the S+ or S- component it starts in.
  Vec climb(Vec z, double sign) const {
    double value = sign * ratio(z);
    double step = 1.0 / k_scale_;
    for (int it = 0; it < kAscentIterations; ++it) {
      const Vec t = tangent_gradient(z);
      const double tn2 = t.squaredNorm();
      if (tn2 < 1e-16 * k_scale_ * k_scale_) break;
      bool accepted = false;
      for (int ls = 0; ls < 40; ++ls) {
        Vec trial = z + step * sign * t;
        if (retract(trial)) {
          const double tv = sign * ratio(trial);
          if (tv >= value + 1e-4 * step * tn2) {
            z = std::move(trial);
            value = tv;
            accepted = true;
            break;
          }
        }
        step *= 0.5;
      }
      if (!accepted) break;
      step *= 2.0;
    }
    return z;
  }

  // Newton on K z - lambda F grad F = 0, F(z) = 1 in the unknowns (z, lambda).
  Candidate polish(Vec z, double tol, int max_iter) const {
    const int m = static_cast<int>(z.size());
    Candidate out;
    if (!retract(z)) return out;
    double lambda = ratio(z);
    auto system = [&](const Vec& zz, double lam) {
      const double f = randers_norm(zz, randers_);
      Vec r(m + 1);
      r.head(m) = k_ * zz - lam * f * randers_gradient(zz, randers_);
      r(m) = f - 1.0;
      return r;
    };
    Vec r = system(z, lambda);
    double rn = r.norm();
    const double abs_tol = tol * k_scale_;
    int polish = 0;
    for (int it = 0; it < max_iter; ++it) {
      if (rn <= abs_tol && polish++ >= 2) break;
      const double f = randers_norm(z, randers_);
      const Vec g = randers_gradient(z, randers_);
      Mat jac(m + 1, m + 1);
      jac.topLeftCorner(m, m) =
          k_ - lambda * (g * g.transpose() + f * randers_hessian(z, randers_));
      jac.topRightCorner(m, 1) = -f * g;
      jac.bottomLeftCorner(1, m) = g.transpose();
      jac(m, m) = 0.0;
      const Vec step = jac.colPivHouseholderQr().solve(-r);
      if (!step.allFinite()) break;
      double t = 1.0;
      bool accepted = false;
      for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
        const Vec zt = z + t * step.head(m);
        if (zt.cwiseAbs().maxCoeff() == 0.0) continue;
        const double lt = lambda + t * step(m);
        const Vec rt = system(zt, lt);
        if (rt.norm() < rn * (1.0 - 1e-4 * t)) {
          z = zt;
          lambda = lt;
          r = rt;
          rn = rt.norm();
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
    }
    if (!(rn <= abs_tol)) return out;
    retract(z);
    out.ok = true;
    out.z = std::move(z);
    return out;
  }

  CriticalType classify(const Vec& y, double lambda) const {
    const int m = static_cast<int>(y.size());
    const double f = randers_norm(y, randers_);
    const Vec g = randers_gradient(y, randers_);
    const Mat hess_f2 = 2.0 * (g * g.transpose() + f * randers_hessian(y, randers_));
    const Mat lagrangian = 2.0 * k_ - lambda * hess_f2;
    // Orthonormal basis of the tangent space ker(g^T).
    Eigen::JacobiSVD<Mat> svd(g.transpose(), Eigen::ComputeFullV);
    const Mat tangent = svd.matrixV().rightCols(m - 1);
    Eigen::SelfAdjointEigenSolver<Mat> es(tangent.transpose() * lagrangian * tangent,
                                          Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double tol = 1e-8 * k_scale_ * std::max(1.0, std::abs(lambda));
    int pos = 0, neg = 0;
    for (int i = 0; i < ev.size(); ++i) {
      if (ev(i) > tol) ++pos;
      else if (ev(i) < -tol) ++neg;
    }
    if (pos + neg < ev.size()) return CriticalType::degenerate;
    if (pos == 0) return CriticalType::maximum;
    if (neg == 0) return CriticalType::minimum;
    return CriticalType::saddle;
  }

  double multiplier_residual(const Vec& y, double lambda) const {
    const Vec lhs = k_ * y;
    const Vec rhs = lambda * randers_norm(y, randers_) * randers_gradient(y, randers_);
    return (lhs - rhs).cwiseAbs().maxCoeff();
  }

 private:
  const Mat& k_;
  const RandersStructure& randers_;
  double k_scale_;
};

}  // namespace

std::vector<GeodesicRay> VariationalResult::rays() const {
  std::vector<GeodesicRay> out;
  out.reserve(points.size());
  for (const auto& p : points) out.push_back(p.ray);
  return out;
}

VariationalSummary VariationalResult::summary() const {
  VariationalSummary s;
  s.degenerate_plateau = degenerate_plateau;
  s.critical_points = static_cast<int>(points.size());
  for (const auto& p : points) {
    if (p.type == CriticalType::maximum) ++s.maxima;
    if (p.type == CriticalType::minimum) ++s.minima;
    if (p.type == CriticalType::saddle) ++s.saddles;
  }
  return s;
}

VariationalResult variational_critical_points(const LieAlgebra& algebra,
                                              const RandersStructure& randers,
                                              const ReductiveDecomposition& decomposition,
                                              const KillingData& killing,
                                              const SolveConfig& config) {
  config.validate();
  if (killing.signature.flat())
    throw Error(ErrorKind::wrong_case,
                "variational_critical_points: Killing form vanishes on m; use case1_support_points");
  const int m = decomposition.m_dim();
  if (randers.dim() != m || killing.matrix.rows() != m)
    throw Error(ErrorKind::input, "variational_critical_points: dimension mismatch");

  const RatioProblem problem(killing.matrix, randers);
  VariationalResult result;

  const auto units = sphere_seeds(m, config.seeds, config.rng_seed);
  std::vector<Vec> seeds(units.size());
  double fmin = std::numeric_limits<double>::infinity();
  double fmax = -fmin;
  for (std::size_t i = 0; i < units.size(); ++i) {
    seeds[i] = indicatrix_project(detail::to_alpha_sphere(units[i], randers), randers).y;
    const double f = problem.ratio(seeds[i]);
    fmin = std::min(fmin, f);
    fmax = std::max(fmax, f);
  }
  if (fmax - fmin <= 1e-9 * std::max({1.0, std::abs(fmin), std::abs(fmax)})) {
    result.degenerate_plateau = true;
    return result;
  }

  // Two candidates per seed: climb-then-polish (extrema of each component)
  // and a direct polish (any critical point, saddles included).
  std::vector<Candidate> climbed(seeds.size());
  std::vector<Candidate> direct(seeds.size());
  detail::parallel_for(seeds.size(), config.threads, [&](std::size_t i) {
    const double f = problem.ratio(seeds[i]);
    if (std::abs(f) > killing.tol) {
      const Vec top = problem.climb(seeds[i], f > 0.0 ? 1.0 : -1.0);
      climbed[i] = problem.polish(top, config.newton_tol, config.max_iter);
    }
    direct[i] = problem.polish(seeds[i], config.newton_tol, config.max_iter);
  });

  // Dedup on whitened unit vectors, where alpha-angles are Euclidean angles.
  const Mat lt = randers.alpha_cholesky().transpose();
  const double limit = 2.0 * std::sin(0.5 * config.dedup_angle);
  std::vector<Vec> distinct;
  std::vector<Vec> units_seen;
  auto consider = [&](const Candidate& c) {
    if (!c.ok) return;
    const Vec unit = (lt * c.z).normalized();
    for (const auto& u : units_seen)
      if ((u - unit).norm() < limit) return;
    distinct.push_back(c.z);
    units_seen.push_back(unit);
  };
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    consider(climbed[i]);
    consider(direct[i]);
  }
  for (const auto& z : distinct) {
    const double lambda = killing.form(z, z);
    if (std::abs(lambda) <= killing.tol) continue;
    CriticalPoint cp;
    Vec padded = Vec::Zero(m + decomposition.h_dim());
    padded.head(m) = z;
    cp.ray = detail::make_ray(padded, algebra, randers, decomposition, killing);
    cp.multiplier_residual = problem.multiplier_residual(cp.ray.y.y, cp.ray.lambda);
    if (!(cp.ray.residual_norm < detail::kSoundnessTol) ||
        !(cp.multiplier_residual < 1e-8 * (1.0 + std::abs(cp.ray.lambda)))) {
      ++result.rejected;
      continue;
    }
    cp.type = problem.classify(cp.ray.y.y, cp.ray.lambda);
    result.points.push_back(std::move(cp));
  }
  std::sort(result.points.begin(), result.points.end(),
            [](const CriticalPoint& a, const CriticalPoint& b) {
              return std::lexicographical_compare(a.ray.y.y.begin(), a.ray.y.y.end(),
                                                  b.ray.y.y.begin(), b.ray.y.y.end());
            });
  return result;
}

}  // namespace hgeo
