#include <cmath>

#include <Eigen/Dense>

#include "solver_internal.hpp"

namespace hgeo {

namespace {

// Newton on g_n(n, w_j) = 0 for the columns w_j of W together with F(n) = 1.
bool support_newton(Vec& n, const Mat& hyperplane, const RandersStructure& randers,
                    const SolveConfig& config) {
  const int m = static_cast<int>(n.size());
  auto system = [&](const Vec& x) {
    const double f = randers_norm(x, randers);
    const Vec g = randers_gradient(x, randers);
    Vec r(m);
    r.head(m - 1) = f * (hyperplane.transpose() * g);
    r(m - 1) = f - 1.0;
    return r;
  };
  n /= randers_norm(n, randers);
  Vec r = system(n);
  const double tol = config.newton_tol;
  for (int it = 0; it < config.max_iter && r.norm() > tol * 1e-2; ++it) {
    const double f = randers_norm(n, randers);
    const Vec g = randers_gradient(n, randers);
    const Mat h = randers_hessian(n, randers);
    Mat jac(m, m);
    // d/dn [F g.w] = (g.w) g^T + F (H w)^T
    jac.topRows(m - 1) = (hyperplane.transpose() * g) * g.transpose() +
                         f * (h * hyperplane).transpose();
    jac.row(m - 1) = g.transpose();
    const Vec step = jac.colPivHouseholderQr().solve(-r);
    if (!step.allFinite()) return false;
    double t = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
      const Vec trial = n + t * step;
      if (trial.cwiseAbs().maxCoeff() == 0.0) continue;
      const Vec rt = system(trial);
      if (rt.norm() < r.norm() * (1.0 - 1e-4 * t)) {
        n = trial;
        r = rt;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;
  }
  return r.norm() <= tol;
}

}  // namespace

Mat default_case1_hyperplane(const LieAlgebra& algebra,
                             const ReductiveDecomposition& decomposition) {
  const int m = decomposition.m_dim();
  const Mat derived = derived_in_m(algebra, decomposition);
  if (derived.cols() >= m)
    throw Error(ErrorKind::invalid_hyperplane, "[m,m] spans m; no hyperplane contains it");
  // First Euclidean direction orthogonal to [m,m]_m, then its complement.
  Mat full = Mat::Zero(m, derived.cols() + m);
  full << derived, Mat::Identity(m, m);
  Eigen::HouseholderQR<Mat> qr(full);
  const Mat q = qr.householderQ() * Mat::Identity(m, m);
  const Vec normal = q.col(derived.cols());
  Eigen::JacobiSVD<Mat> svd(normal.transpose(), Eigen::ComputeFullV);
  return svd.matrixV().rightCols(m - 1);
}

SupportPoints case1_support_points(const LieAlgebra& algebra, const RandersStructure& randers,
                                   const Mat& hyperplane, const SolveConfig& config) {
  return case1_support_points(algebra, randers, ReductiveDecomposition::trivial(algebra),
                              hyperplane, config);
}

SupportPoints case1_support_points(const LieAlgebra& algebra, const RandersStructure& randers,
                                   const ReductiveDecomposition& decomposition,
                                   const Mat& hyperplane, const SolveConfig& config) {
  config.validate();
  const int m = decomposition.m_dim();
  if (randers.dim() != m) throw Error(ErrorKind::input, "case1_support_points: dimension mismatch");
  const KillingData killing = killing_data(algebra, decomposition);
  if (!killing.signature.flat())
    throw Error(ErrorKind::wrong_case,
                "case1_support_points: Killing form does not vanish on m; use "
                "variational_critical_points");
  if (hyperplane.rows() != m || hyperplane.cols() != m - 1)
    throw Error(ErrorKind::invalid_hyperplane, "hyperplane must have m-1 columns of length m");
  Eigen::JacobiSVD<Mat> svd(hyperplane, Eigen::ComputeFullU);
  const auto& s = svd.singularValues();
  if (m > 1 && s(m - 2) <= 1e-10 * std::max(1.0, s(0)))
    throw Error(ErrorKind::invalid_hyperplane, "hyperplane basis is rank deficient");
  const Mat w_basis = svd.matrixU().leftCols(m - 1);
  const Mat derived = derived_in_m(algebra, decomposition);
  if (derived.cols() > 0 &&
      (derived - w_basis * (w_basis.transpose() * derived)).norm() > 1e-9)
    throw Error(ErrorKind::invalid_hyperplane, "[m,m] is not contained in the hyperplane");

  // alpha-normal of W: alpha nu is the Euclidean normal.
  const Vec euclid_normal = svd.matrixU().col(m - 1);
  Vec nu = randers.alpha().ldlt().solve(euclid_normal);
  nu /= randers.alpha_norm(nu);

  SupportPoints out;
  out.n1 = nu;
  out.n2 = -nu;
  if (!support_newton(out.n1, w_basis, randers, config) ||
      !support_newton(out.n2, w_basis, randers, config))
    throw Error(ErrorKind::solver_failure, "case1_support_points: Newton did not converge");
  if (!(randers.alpha_form(out.n1, nu) > 0.0 && randers.alpha_form(out.n2, nu) < 0.0))
    throw Error(ErrorKind::solver_failure,
                "case1_support_points: support points are not on opposite sides of W");
  out.residual1 =
      general_residual(decomposition.embed(out.n1), decomposition, randers, algebra).norm;
  out.residual2 =
      general_residual(decomposition.embed(out.n2), decomposition, randers, algebra).norm;
  return out;
}

}  // namespace hgeo
