#include "hgeo/criterion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace hgeo {

namespace {

void require_identity_alpha(const RandersStructure& randers, const char* what) {
  if (randers.dim() != 3 || !randers.alpha().isIdentity(0.0))
    throw Error(ErrorKind::unsupported,
                std::string(what) + ": closed-form system requires alpha = identity in dimension 3");
}

void require_dim(const Vec& x, int dim, const char* what) {
  if (x.size() != dim) {
    std::ostringstream os;
    os << what << ": expected length " << dim << ", got " << x.size();
    throw Error(ErrorKind::input, os.str());
  }
}

}  // namespace

ResidualVector ResidualVector::from(Vec components) {
  ResidualVector r;
  r.norm = components.norm();
  r.components = std::move(components);
  return r;
}

ResidualVector general_residual(const Vec& y, const ReductiveDecomposition& decomposition,
                                const RandersStructure& randers, const LieAlgebra& algebra) {
  require_dim(y, algebra.dim(), "general_residual");
  if (decomposition.g_dim() != algebra.dim())
    throw Error(ErrorKind::input, "general_residual: decomposition does not match algebra");
  if (randers.dim() != decomposition.m_dim())
    throw Error(ErrorKind::input, "general_residual: Randers data must live on m");
  const Vec ym = decomposition.m_coordinates() * y;
  if (ym.cwiseAbs().maxCoeff() == 0.0)
    throw Error(ErrorKind::domain, "general_residual: y_m must be nonzero");
  const int m = decomposition.m_dim();
  Vec out(m);
  for (int i = 0; i < m; ++i) {
    const Vec w = decomposition.m_coordinates() *
                  bracket(y, decomposition.m_basis().col(i), algebra);
    out(i) = fundamental_directional(ym, w, randers);
  }
  return ResidualVector::from(std::move(out));
}

ResidualVector randers_residual(const Vec& x, const RandersStructure& randers,
                                const LieAlgebra& algebra) {
  const int n = algebra.dim();
  require_dim(x, n, "randers_residual");
  if (randers.dim() != n)
    throw Error(ErrorKind::input, "randers_residual: Randers data must live on g");
  if (x.cwiseAbs().maxCoeff() == 0.0)
    throw Error(ErrorKind::domain, "randers_residual: x must be nonzero");
  const Vec p = x + randers.alpha_norm(x) * randers.drift();
  const Vec ap = randers.alpha() * p;
  Vec out(n);
  for (int i = 0; i < n; ++i) out(i) = ap.dot(bracket(x, Vec::Unit(n, i), algebra));
  return ResidualVector::from(std::move(out));
}

ResidualVector randers_residual(const Vec& x, const RandersStructure& randers,
                                const LieAlgebra& algebra,
                                const ReductiveDecomposition& decomposition) {
  if (!decomposition.is_trivial())
    throw Error(ErrorKind::unsupported,
                "randers_residual requires trivial isotropy; use general_residual");
  return randers_residual(x, randers, algebra);
}

Eigen::Vector3d example_system_so3(const Vec& x, double a, double b, double c,
                                   const RandersStructure& randers) {
  require_identity_alpha(randers, "example_system_so3");
  require_dim(x, 3, "example_system_so3");
  const Vec& v = randers.drift();
  const double s = x.norm();
  return {(b - a) * x(1) * x(2) + (b * x(2) * v(1) - a * x(1) * v(2)) * s,
          (a - c) * x(0) * x(2) + (a * x(0) * v(2) - c * x(2) * v(0)) * s,
          (c - b) * x(0) * x(1) + (c * x(1) * v(0) - b * x(0) * v(1)) * s};
}

Eigen::Vector3d example_system_sl2(const Vec& x, double a, double b, double c,
                                   const RandersStructure& randers) {
  require_identity_alpha(randers, "example_system_sl2");
  require_dim(x, 3, "example_system_sl2");
  const Vec& v = randers.drift();
  const double s = x.norm();
  return {(a + b) * x(1) * x(2) + (b * x(2) * v(1) + a * x(1) * v(2)) * s,
          (a - c) * x(0) * x(2) + (a * x(0) * v(2) - c * x(2) * v(0)) * s,
          (b + c) * x(0) * x(1) + (c * x(1) * v(0) + b * x(0) * v(1)) * s};
}

double tangency_residual(const Vec& x, const RandersStructure& randers,
                         const KillingData& killing) {
  require_dim(x, randers.dim(), "tangency_residual");
  const double k = killing.form(x, x);
  if (std::abs(k) <= killing.tol)
    throw Error(ErrorKind::null_cone, "tangency_residual: x lies on the Killing null cone");
  const Vec grad_f2 = 2.0 * randers_norm(x, randers) * randers_gradient(x, randers);
  const Vec grad_k = 2.0 * (killing.matrix * x);
  const Vec a = grad_f2.normalized();
  const Vec b = grad_k.normalized();
  return (a - a.dot(b) * b).norm();
}

bool brackets_in_killing_tangent(const Vec& x, const LieAlgebra& algebra,
                                 const ReductiveDecomposition& decomposition,
                                 const KillingData& killing, double tol) {
  const Vec kx = killing.matrix * x;
  const Vec y = decomposition.embed(x);
  for (int i = 0; i < decomposition.m_dim(); ++i) {
    const Vec w = decomposition.m_coordinates() *
                  bracket(y, decomposition.m_basis().col(i), algebra);
    const double scale = std::max(1.0, kx.norm() * w.norm());
    if (std::abs(kx.dot(w)) > tol * scale) return false;
  }
  return true;
}

GeodesicSystem::GeodesicSystem(const LieAlgebra& algebra,
                               const ReductiveDecomposition& decomposition,
                               const RandersStructure& randers)
    : m_(decomposition.m_dim()), h_(decomposition.h_dim()), randers_(randers) {
  if (decomposition.g_dim() != algebra.dim())
    throw Error(ErrorKind::input, "decomposition does not match algebra");
  if (randers.dim() != m_)
    throw Error(ErrorKind::input, "Randers data must live on m");
  const int n = algebra.dim();
  Mat basis(n, n);
  basis << decomposition.m_basis(), decomposition.h_basis();
  q_.reserve(m_);
  double scale = 0.0;
  for (int i = 0; i < m_; ++i) {
    // y -> [y, u_i] = -ad(u_i) y
    const Mat g = -decomposition.m_coordinates() *
                  ad_matrix(decomposition.m_basis().col(i), algebra) * basis;
    q_.push_back(randers.alpha() * g);
    scale = std::max(scale, q_.back().cwiseAbs().maxCoeff());
  }
  scale_ = std::max(1.0, scale) * (1.0 + randers.drift_norm());
}

Vec GeodesicSystem::residual(const Vec& z) const {
  const Vec x = z.head(m_);
  const Vec p = x + randers_.alpha_norm(x) * randers_.drift();
  Vec r(m_);
  for (int i = 0; i < m_; ++i) r(i) = p.dot(q_[i] * z);
  return r;
}

Mat GeodesicSystem::jacobian(const Vec& z) const {
  const Vec x = z.head(m_);
  const Vec ax = randers_.alpha() * x;
  const double s = std::sqrt(x.dot(ax));
  const Vec p = x + s * randers_.drift();
  Mat jac(m_, m_ + h_);
  for (int i = 0; i < m_; ++i) {
    const Vec qz = q_[i] * z;
    Vec row = q_[i].transpose() * p;
    row.head(m_) += qz + ax * (randers_.drift().dot(qz) / s);
    jac.row(i) = row.transpose();
  }
  return jac;
}

}  // namespace hgeo
