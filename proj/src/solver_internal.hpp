#pragma once

#include <vector>

#include "hgeo/solvers.hpp"

namespace hgeo::detail {

struct NewtonOutcome {
  bool converged = false;
  Vec z;
  int iterations = 0;
  double residual = 0.0;
};

/// Gauss-Newton with backtracking on {r(z) = 0, alpha(z_m, z_m) = 1}. The
/// iterate is renormalized onto the alpha-unit sphere after every step,
/// which is harmless because r is homogeneous.
NewtonOutcome solve_geodesic_system(const GeodesicSystem& system, Vec z,
                                    const SolveConfig& config);

/// Rank test at a root: true when the augmented Jacobian has a null
/// direction that moves the m-part, i.e. the root sits on a positive-
/// dimensional family of rays.
bool continuum_candidate(const GeodesicSystem& system, const Vec& z);

/// Normalizes the root to F(y_m) = 1 and evaluates the independent checks.
GeodesicRay make_ray(const Vec& z, const LieAlgebra& algebra, const RandersStructure& randers,
                     const ReductiveDecomposition& decomposition, const KillingData& killing);

KillingSign sign_of(double k_value, double tol);

/// Maps Euclidean unit vectors onto the alpha-unit sphere.
Vec to_alpha_sphere(const Vec& unit, const RandersStructure& randers);

void sort_rays(std::vector<GeodesicRay>& rays);

/// Residual threshold every reported ray must satisfy.
constexpr double kSoundnessTol = 1e-9;

}  // namespace hgeo::detail
