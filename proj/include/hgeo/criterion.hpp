#pragma once

#include <vector>

#include "hgeo/lie_core.hpp"
#include "hgeo/minkowski.hpp"

namespace hgeo {

/// One component per basis vector of m.
struct ResidualVector {
  Vec components;
  double norm = 0.0;

  static ResidualVector from(Vec components);
};

/// g_{y_m}(y_m, [y, u_i]_m) for each basis vector u_i of m. y is given in
/// g-coordinates and may carry an h-component. Throws Error(domain) when
/// y_m = 0.
ResidualVector general_residual(const Vec& y, const ReductiveDecomposition& decomposition,
                                const RandersStructure& randers, const LieAlgebra& algebra);

/// alpha(x + sqrt(alpha(x,x)) V, [x, E_i]) for trivial isotropy.
ResidualVector randers_residual(const Vec& x, const RandersStructure& randers,
                                const LieAlgebra& algebra);
/// Same, but throws Error(unsupported) if the decomposition has nonzero h.
ResidualVector randers_residual(const Vec& x, const RandersStructure& randers,
                                const LieAlgebra& algebra,
                                const ReductiveDecomposition& decomposition);

/// Closed-form three-equation systems of the so(3) and sl(2) families with
/// alpha = identity. Throw Error(unsupported) for any other alpha.
Eigen::Vector3d example_system_so3(const Vec& x, double a, double b, double c,
                                   const RandersStructure& randers);
Eigen::Vector3d example_system_sl2(const Vec& x, double a, double b, double c,
                                   const RandersStructure& randers);

/// Scale-free angle measure between the tangent hyperplanes of I_F and S_K
/// through the ray of x: norm of the part of unit grad F^2 orthogonal to
/// unit grad K. Zero iff the hyperplanes are parallel. Throws
/// Error(null_cone) if |K(x,x)| <= killing.tol.
double tangency_residual(const Vec& x, const RandersStructure& randers,
                         const KillingData& killing);

/// True when span{[x, u]_m : u in m} lies in the common tangent hyperplane
/// ker K(x, .), which is the inclusion needed to turn tangency into the
/// geodesic condition. Evaluated relative to tol.
bool brackets_in_killing_tangent(const Vec& x, const LieAlgebra& algebra,
                                 const ReductiveDecomposition& decomposition,
                                 const KillingData& killing, double tol = 1e-10);

/// Polynomial form of the geodesic condition used by the solvers.
///
/// Unknowns z = (z_m, z_h) are coordinates relative to the basis [m | h]
/// of g. Component i is
///   r_i(z) = alpha(z_m + |z_m|_alpha V, [y, u_i]_m),   y = [m | h] z,
/// which equals |z_m|_alpha / F(z_m) times the general residual, so both
/// vanish together. r is positively homogeneous of degree 2.
class GeodesicSystem {
 public:
  GeodesicSystem(const LieAlgebra& algebra, const ReductiveDecomposition& decomposition,
                 const RandersStructure& randers);

  int m_dim() const noexcept { return m_; }
  int unknowns() const noexcept { return m_ + h_; }
  bool trivial_isotropy() const noexcept { return h_ == 0; }

  /// Matrices Q_i = alpha * G_i, with G_i z = [y, u_i]_m.
  const std::vector<Mat>& forms() const noexcept { return q_; }
  const RandersStructure& randers() const noexcept { return randers_; }

  Vec residual(const Vec& z) const;
  /// d r / d z, m x (m + h). Requires z_m != 0.
  Mat jacobian(const Vec& z) const;

  /// Typical magnitude of the residual at alpha-unit z; used to scale
  /// absolute thresholds.
  double scale() const noexcept { return scale_; }

 private:
  int m_;
  int h_;
  RandersStructure randers_;
  std::vector<Mat> q_;
  double scale_;
};

}  // namespace hgeo
