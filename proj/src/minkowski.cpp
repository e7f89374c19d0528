#include "hgeo/minkowski.hpp"

#include <limits>
#include <sstream>

#include <Eigen/Dense>

namespace hgeo {

namespace {

constexpr double kDriftMargin = 1e-12;

void require_nonzero(const Vec& y, const char* what) {
  if (y.size() == 0 || y.cwiseAbs().maxCoeff() == 0.0)
    throw Error(ErrorKind::domain, std::string(what) + ": vector must be nonzero");
}

void require_dim(const Vec& x, int dim, const char* what) {
  if (x.size() != dim) {
    std::ostringstream os;
    os << what << ": expected length " << dim << ", got " << x.size();
    throw Error(ErrorKind::input, os.str());
  }
}

}  // namespace

RandersStructure::RandersStructure(Mat alpha, Vec drift)
    : alpha_(std::move(alpha)), drift_(std::move(drift)) {
  const auto n = alpha_.rows();
  if (n == 0 || alpha_.cols() != n)
    throw Error(ErrorKind::input, "alpha must be a nonempty square matrix");
  if (drift_.size() != n) {
    std::ostringstream os;
    os << "dimension mismatch: alpha is " << n << "x" << n << " but V has "
       << drift_.size() << " entries";
    throw Error(ErrorKind::input, os.str());
  }
  const double scale = std::max(1.0, alpha_.cwiseAbs().maxCoeff());
  if ((alpha_ - alpha_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw Error(ErrorKind::input, "alpha must be symmetric");
  alpha_ = 0.5 * (alpha_ + alpha_.transpose());
  Eigen::LLT<Mat> llt(alpha_);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorKind::input, "alpha must be positive definite");
  Eigen::SelfAdjointEigenSolver<Mat> es(alpha_, Eigen::EigenvaluesOnly);
  if (es.eigenvalues()(0) <= 0.0)
    throw Error(ErrorKind::input, "alpha must be positive definite");
  chol_ = llt.matrixL();
  beta_ = alpha_ * drift_;
  const double vv = drift_.dot(beta_);
  if (!(vv < 1.0 - kDriftMargin)) {
    std::ostringstream os;
    os.precision(17);
    os << "Randers condition violated: alpha(V,V) = " << vv << " is not < 1";
    throw Error(ErrorKind::input, os.str());
  }
  drift_norm_ = std::sqrt(std::max(0.0, vv));
}

RandersStructure RandersStructure::euclidean(int dim, Vec drift) {
  return RandersStructure(Mat::Identity(dim, dim), std::move(drift));
}

double randers_norm(const Vec& u, const RandersStructure& randers) {
  require_dim(u, randers.dim(), "randers_norm");
  return std::sqrt(std::max(0.0, randers.alpha_form(u, u))) + randers.beta().dot(u);
}

double fundamental_directional(const Vec& y, const Vec& w,
                               const RandersStructure& randers) {
  require_dim(y, randers.dim(), "fundamental_directional");
  require_dim(w, randers.dim(), "fundamental_directional");
  require_nonzero(y, "fundamental_directional");
  const Vec ay = randers.alpha() * y;
  const double s = std::sqrt(y.dot(ay));
  const double f = s + randers.beta().dot(y);
  return f * (ay.dot(w) / s + randers.beta().dot(w));
}

Vec randers_gradient(const Vec& y, const RandersStructure& randers) {
  require_dim(y, randers.dim(), "randers_gradient");
  require_nonzero(y, "randers_gradient");
  const Vec ay = randers.alpha() * y;
  return ay / std::sqrt(y.dot(ay)) + randers.beta();
}

Mat randers_hessian(const Vec& y, const RandersStructure& randers) {
  require_dim(y, randers.dim(), "randers_hessian");
  require_nonzero(y, "randers_hessian");
  const Vec ay = randers.alpha() * y;
  const double s = std::sqrt(y.dot(ay));
  return randers.alpha() / s - ay * ay.transpose() / (s * s * s);
}

IndicatrixPoint indicatrix_project(const Vec& x, const RandersStructure& randers) {
  require_dim(x, randers.dim(), "indicatrix_project");
  require_nonzero(x, "indicatrix_project");
  IndicatrixPoint p;
  p.y = x / randers_norm(x, randers);
  p.killing_value = std::numeric_limits<double>::quiet_NaN();
  return p;
}

IndicatrixPoint indicatrix_project(const Vec& x, const RandersStructure& randers,
                                   const KillingData& killing) {
  IndicatrixPoint p = indicatrix_project(x, randers);
  p.killing_value = killing.form(p.y, p.y);
  return p;
}

Vec killing_sphere_project(const Vec& x, const KillingData& killing) {
  require_dim(x, static_cast<int>(killing.matrix.rows()), "killing_sphere_project");
  const double k = killing.form(x, x);
  if (std::abs(k) <= killing.tol) {
    std::ostringstream os;
    os << "killing_sphere_project: |K(x,x)| = " << std::abs(k)
       << " is within the null-cone tolerance " << killing.tol;
    throw Error(ErrorKind::null_cone, os.str());
  }
  return x / std::sqrt(std::abs(k));
}

}  // namespace hgeo
