#pragma once

// Expected values produced by tests/oracles/derive_fixtures.py (exact sympy
// solutions of the geodesic equations with alpha = I). Frozen here so the
// C++ tests do not depend on Python at build time.

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace frozen {

inline const double kSqrt3 = std::sqrt(3.0);
inline const double kSqrt15 = std::sqrt(15.0);

struct Fixture {
  const char* family;
  double a, b, c;
  Eigen::Vector3d drift;
  std::vector<Eigen::Vector3d> rays;  // unnormalized representatives
  Eigen::Vector3d killing_diagonal;
};

// so(3), a = c = 1, b = 2, V = e1/2: four rays.
inline Fixture so3_four() {
  return {"so3", 1, 2, 1, {0.5, 0, 0},
          {{-1, 0, 0}, {0.5, -kSqrt3 / 2, 0}, {0.5, kSqrt3 / 2, 0}, {1, 0, 0}},
          {-4, -2, -4}};
}

// so(3), a = b = 2, c = 3, V = e1/2: two rays.
inline Fixture so3_two() {
  return {"so3", 2, 2, 3, {0.5, 0, 0}, {{-1, 0, 0}, {1, 0, 0}}, {-8, -12, -12}};
}

// sl(2), a = b = c = 1, V = e1/2: four rays, signature (2,1,0).
inline Fixture sl2_four() {
  return {"sl2", 1, 1, 1, {0.5, 0, 0},
          {{-1, 0, 0}, {-0.25, -kSqrt15 / 4, 0}, {-0.25, kSqrt15 / 4, 0}, {1, 0, 0}},
          {2, -2, 2}};
}

inline std::vector<Fixture> all() { return {so3_four(), so3_two(), sl2_four()}; }

// so(3), a = b = 1/2, c = 3, V = 0: Killing diagonal on the figure plane.
inline const Eigen::Vector3d kEllipseKilling{-0.5, -3, -3};

// Heisenberg, V = e1/2, W = span(E2, E3): support points on the E1 axis.
inline const Eigen::Vector3d kCase1N1{2.0 / 3.0, 0, 0};
inline const Eigen::Vector3d kCase1N2{-2.0, 0, 0};

}  // namespace frozen
