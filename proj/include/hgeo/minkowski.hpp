#pragma once

#include <cmath>

#include "hgeo/lie_core.hpp"

namespace hgeo {

/// Randers data on m: F(u) = sqrt(alpha(u,u)) + alpha(V,u).
///
/// alpha must be symmetric positive definite and alpha(V,V) < 1 with a
/// margin of 1e-12; otherwise the constructor throws Error(input).
class RandersStructure {
 public:
  RandersStructure(Mat alpha, Vec drift);

  /// alpha = I, V = drift.
  static RandersStructure euclidean(int dim, Vec drift);
  static RandersStructure euclidean(int dim) { return euclidean(dim, Vec::Zero(dim)); }

  int dim() const noexcept { return static_cast<int>(alpha_.rows()); }
  const Mat& alpha() const noexcept { return alpha_; }
  const Vec& drift() const noexcept { return drift_; }
  /// Coefficients of the 1-form beta: beta(u) = beta_coeffs . u.
  const Vec& beta() const noexcept { return beta_; }
  /// Lower Cholesky factor L, alpha = L L^T.
  const Mat& alpha_cholesky() const noexcept { return chol_; }

  double alpha_form(const Vec& x, const Vec& y) const { return x.dot(alpha_ * y); }
  double alpha_norm(const Vec& x) const { return std::sqrt(alpha_form(x, x)); }
  /// sqrt(alpha(V,V)) < 1.
  double drift_norm() const noexcept { return drift_norm_; }
  bool reversible() const noexcept { return drift_norm_ == 0.0; }

 private:
  Mat alpha_;
  Vec drift_;
  Vec beta_;
  Mat chol_;
  double drift_norm_;
};

struct IndicatrixPoint {
  Vec y;                       // F(y) = 1
  double killing_value = 0.0;  // K(y,y); NaN when no Killing data was supplied
};

double randers_norm(const Vec& u, const RandersStructure& randers);

/// g_y(y, w) = 1/2 d/dt F^2(y + t w) at t = 0. Throws Error(domain) for y = 0.
double fundamental_directional(const Vec& y, const Vec& w,
                               const RandersStructure& randers);

/// Gradient of F at y != 0: alpha y / sqrt(alpha(y,y)) + alpha V.
Vec randers_gradient(const Vec& y, const RandersStructure& randers);

/// Hessian of F at y != 0.
Mat randers_hessian(const Vec& y, const RandersStructure& randers);

/// x / F(x). Throws Error(domain) for x = 0.
IndicatrixPoint indicatrix_project(const Vec& x, const RandersStructure& randers);
IndicatrixPoint indicatrix_project(const Vec& x, const RandersStructure& randers,
                                   const KillingData& killing);

/// x / sqrt|K(x,x)|, landing on K = +1 or K = -1. Throws Error(null_cone)
/// when |K(x,x)| <= killing.tol.
Vec killing_sphere_project(const Vec& x, const KillingData& killing);

}  // namespace hgeo
