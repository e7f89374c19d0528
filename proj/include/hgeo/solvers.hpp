#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hgeo/criterion.hpp"
#include "hgeo/lie_core.hpp"
#include "hgeo/minkowski.hpp"

namespace hgeo {

enum class RayKind { isolated, continuum_member };
enum class KillingSign { positive, negative, null };

const char* to_string(RayKind kind);
const char* to_string(KillingSign sign);

/// A geodesic vector, normalized so that its m-part lies on the indicatrix.
struct GeodesicRay {
  IndicatrixPoint y;  // m-coordinates, F(y) = 1
  Vec isotropy;       // h-coordinates of the geodesic vector (empty if h = 0)
  double residual_norm = 0.0;
  double lambda = 0.0;  // K(y,y)
  RayKind kind = RayKind::isolated;
  KillingSign k_sign = KillingSign::null;
};

struct SolveConfig {
  int seeds = 2000;
  double newton_tol = 1e-12;
  int max_iter = 60;
  double dedup_angle = 1e-6;
  double continuum_fraction = 0.05;
  std::uint64_t rng_seed = 42;
  int threads = 0;  // 0: hardware concurrency

  /// Throws Error(input) on a non-positive field or continuum_fraction
  /// outside (0,1).
  void validate() const;
};

struct AuditVerdict {
  bool infinite = false;  // a continuum of geodesic rays was found
  int ray_count = 0;
  Signature signature;
  int required_minimum = 2;
  bool pass = false;
};

struct SolveStats {
  int seeds = 0;
  int converged = 0;
  int extra_seeds = 0;  // launched from the dense residual scan
  int rejected = 0;     // converged but failed the independent residual check
  int max_iterations = 0;
  double mean_iterations = 0.0;
  double elapsed_ms = 0.0;
  std::string isa;
};

struct SupportPoints {
  Vec n1;  // on the side of the alpha-normal of W
  Vec n2;  // on the opposite side
  double residual1 = 0.0;
  double residual2 = 0.0;
};

struct VariationalSummary {
  bool degenerate_plateau = false;
  int critical_points = 0;
  int maxima = 0;
  int minima = 0;
  int saddles = 0;
};

struct SolveReport {
  std::vector<GeodesicRay> rays;  // sorted lexicographically by y
  bool continuum_detected = false;
  KillingData killing;
  AuditVerdict audit;
  SolveStats stats;
  std::optional<SupportPoints> case1;
  std::optional<VariationalSummary> variational;
};

/// Multistart Gauss-Newton on {r(z) = 0, alpha(x,x) = 1} over seeds on the
/// alpha-unit sphere, followed by a dense batched residual scan that reseeds
/// any unexplored low-residual region. Throws Error(solver_failure) if no
/// seed converges and Error(input) if dim m < 2.
SolveReport enumerate_rays(const LieAlgebra& algebra, const RandersStructure& randers,
                           const ReductiveDecomposition& decomposition,
                           const SolveConfig& config);

enum class CriticalType { maximum, minimum, saddle, degenerate };
const char* to_string(CriticalType type);

struct CriticalPoint {
  GeodesicRay ray;
  CriticalType type = CriticalType::degenerate;
  double multiplier_residual = 0.0;  // max_i |K(y,e_i) - lambda g_y(y,e_i)|
};

struct VariationalResult {
  std::vector<CriticalPoint> points;
  bool degenerate_plateau = false;  // f = K/F^2 constant on I_F
  int rejected = 0;                 // critical points failing the geodesic check

  std::vector<GeodesicRay> rays() const;
  VariationalSummary summary() const;
};

/// Critical points of f(z) = K(z,z)/F(z)^2 on the indicatrix, found by
/// projected gradient ascent on S+ / descent on S- and direct Newton on the
/// multiplier system Kz = lambda F(z) grad F(z), F(z) = 1. Throws
/// Error(wrong_case) when K vanishes on m.
VariationalResult variational_critical_points(const LieAlgebra& algebra,
                                              const RandersStructure& randers,
                                              const ReductiveDecomposition& decomposition,
                                              const KillingData& killing,
                                              const SolveConfig& config);

/// Indicatrix points whose tangent hyperplane is parallel to the hyperplane
/// W (columns, m-coordinates), for flat Killing form. Throws
/// Error(wrong_case) if K does not vanish on m and Error(invalid_hyperplane)
/// if W is not a hyperplane containing [m, m]_m.
SupportPoints case1_support_points(const LieAlgebra& algebra, const RandersStructure& randers,
                                   const Mat& hyperplane, const SolveConfig& config);
SupportPoints case1_support_points(const LieAlgebra& algebra, const RandersStructure& randers,
                                   const ReductiveDecomposition& decomposition,
                                   const Mat& hyperplane, const SolveConfig& config);

/// A hyperplane of m containing [m, m]_m: the Euclidean complement of the
/// first direction orthogonal to the derived algebra.
Mat default_case1_hyperplane(const LieAlgebra& algebra,
                             const ReductiveDecomposition& decomposition);

AuditVerdict theorem_audit(const LieAlgebra& algebra, const RandersStructure& randers,
                           const ReductiveDecomposition& decomposition,
                           const SolveReport& report);

/// Angle between the rays of u and v measured on the alpha-unit sphere.
double ray_angle(const Vec& u, const Vec& v, const RandersStructure& randers);

/// Deterministic unit vectors in R^dim: a low-discrepancy half (Fibonacci
/// lattice for dim 3, circle for dim 2, Kronecker sequence otherwise) and a
/// pseudo-random half drawn from rng_seed.
std::vector<Vec> sphere_seeds(int dim, int count, std::uint64_t rng_seed);

/// Full verification of one ray against the problem data: F(y) = 1,
/// general residual of the geodesic vector, lambda = K(y,y).
struct RayCheck {
  double indicatrix_error = 0.0;
  double residual_norm = 0.0;
  double lambda_error = 0.0;
};
RayCheck check_ray(const GeodesicRay& ray, const LieAlgebra& algebra,
                   const RandersStructure& randers,
                   const ReductiveDecomposition& decomposition,
                   const KillingData& killing);

}  // namespace hgeo
