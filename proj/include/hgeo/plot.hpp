#pragma once

#include <string>
#include <vector>

#include "hgeo/config.hpp"
#include "hgeo/solvers.hpp"

namespace hgeo {

/// A 2-plane through the origin of m, spanned by two orthonormal columns.
struct SliceSpec {
  Mat axes;           // m x 2, orthonormal
  std::string label;  // e.g. "x3=0"
  int resolution = 720;
  double extent = 2.0;
};

/// "xk=0" selects the plane of the remaining two coordinates when m = 3; for
/// m = 2 the whole space is the plane. Explicit axes are orthonormalized and
/// must be linearly independent. Throws Error(input) otherwise.
SliceSpec make_slice(const PlotSettings& settings, int m_dim);

struct SlicePoint {
  Vec z;         // m-coordinates
  double u = 0;  // plane coordinates
  double v = 0;
};

struct KillingBranch {
  int sign = 1;  // K(z,z) = sign on every point
  std::vector<SlicePoint> points;
};

struct SliceRay {
  SlicePoint y;             // on the indicatrix
  int report_index = -1;    // index into SolveReport::rays, -1 for a plane-scan root
  double residual_norm = 0.0;
};

struct SliceGeometry {
  SliceSpec spec;
  std::vector<SlicePoint> indicatrix;      // closed curve, one point per angle
  std::vector<KillingBranch> killing;      // polylines, clipped at 1.5 extent
  std::vector<SliceRay> rays;
  std::vector<std::string> warnings;
};

/// Samples I_F and S_K on the plane and collects the in-plane geodesic rays.
/// Report rays qualify when their out-of-plane component is at most 1e-8
/// and their in-plane norm exceeds 1e-8. When the report found a continuum,
/// the plane circle is also scanned for roots of the geodesic residual so
/// that the intersection of the continuum with the plane is drawn.
SliceGeometry compute_slice(const Problem& problem, const SolveReport& report,
                            const SliceSpec& spec);

/// SVG 1.1, 800 x 800, layers killing-sphere (blue), indicatrix (green),
/// geodesic-rays (red). Output depends only on the geometry.
std::string render_svg(const SliceGeometry& geometry);

std::string render_slice(const Problem& problem, const SolveReport& report,
                         const SliceSpec& spec);

}  // namespace hgeo
