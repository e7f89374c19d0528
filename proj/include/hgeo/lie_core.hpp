#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "hgeo/error.hpp"

namespace hgeo {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Finite-dimensional real Lie algebra given by structure constants in a
/// fixed basis E_0..E_{n-1}: [E_i, E_j] = sum_k c(i,j,k) E_k.
///
/// Construction validates antisymmetry and the Jacobi identity; a violation
/// throws Error(ErrorKind::input).
class LieAlgebra {
 public:
  LieAlgebra(int dim, std::vector<double> structure, std::string label = {});

  int dim() const noexcept { return dim_; }
  const std::string& label() const noexcept { return label_; }
  const std::vector<double>& structure() const noexcept { return c_; }

  double c(int i, int j, int k) const noexcept {
    return c_[(static_cast<size_t>(i) * dim_ + j) * dim_ + k];
  }

  /// Largest |[[E_i,E_j],E_k] + [[E_j,E_k],E_i] + [[E_k,E_i],E_j]| component.
  double jacobi_residual() const;

  /// Largest |c(i,j,k)|; used to scale tolerances.
  double scale() const;

 private:
  int dim_;
  std::vector<double> c_;
  std::string label_;
};

/// Builder for structure constants. set(i, j, k, v) records [E_i,E_j] has
/// coefficient v on E_k and fills the antisymmetric partner.
class StructureBuilder {
 public:
  explicit StructureBuilder(int dim);
  StructureBuilder& set(int i, int j, int k, double value);
  LieAlgebra build(std::string label = {}) const;

 private:
  int dim_;
  std::vector<double> c_;
};

namespace families {

/// [E1,E2] = a E3, [E1,E3] = -b E2, [E2,E3] = c E1.
LieAlgebra so3(double a, double b, double c);
/// [E1,E2] = a E3, [E1,E3] = b E2, [E2,E3] = c E1.
LieAlgebra sl2(double a, double b, double c);
/// [E1,E2] = scale E3, all other brackets zero.
LieAlgebra heisenberg(double scale = 1.0);
/// Direct sum: brackets of `first` on the leading block, `second` after.
LieAlgebra direct_sum(const LieAlgebra& first, const LieAlgebra& second);
LieAlgebra abelian(int dim);

}  // namespace families

/// Splitting g = m + h. Coordinates on m are taken relative to m_basis, so
/// every m-level object (Randers data, Killing matrix on m, residuals) is
/// expressed in that basis.
class ReductiveDecomposition {
 public:
  /// Trivial isotropy: m = g with the standard basis.
  static ReductiveDecomposition trivial(const LieAlgebra& algebra);

  /// Columns of m_basis and h_basis are vectors in g-coordinates. Throws
  /// Error(input) unless they form a basis of g, h is a subalgebra and
  /// [h, m] lies in m.
  ReductiveDecomposition(const LieAlgebra& algebra, Mat m_basis, Mat h_basis);

  int m_dim() const noexcept { return static_cast<int>(m_basis_.cols()); }
  int h_dim() const noexcept { return static_cast<int>(h_basis_.cols()); }
  int g_dim() const noexcept { return static_cast<int>(m_basis_.rows()); }
  bool is_trivial() const noexcept { return h_dim() == 0; }

  const Mat& m_basis() const noexcept { return m_basis_; }
  const Mat& h_basis() const noexcept { return h_basis_; }

  /// g-coordinates -> m-coordinates (kernel h).
  const Mat& m_coordinates() const noexcept { return to_m_; }
  /// Idempotent projection on g-coordinates with image span(m), kernel h.
  Mat projection_to_m() const { return m_basis_ * to_m_; }

  /// Embeds m-coordinates into g.
  Vec embed(const Vec& m_coords) const { return m_basis_ * m_coords; }

 private:
  ReductiveDecomposition(Mat m_basis, Mat h_basis, Mat to_m);

  Mat m_basis_;
  Mat h_basis_;
  Mat to_m_;
};

struct Signature {
  int positive = 0;
  int negative = 0;
  int zero = 0;

  bool indefinite() const noexcept { return positive > 0 && negative > 0; }
  bool flat() const noexcept { return positive == 0 && negative == 0; }
  friend bool operator==(const Signature&, const Signature&) = default;
};

/// Killing form restricted to m together with its inertia data.
struct KillingData {
  Mat matrix;
  Signature signature;
  Mat radical_basis;  // columns span the near-null eigenspace
  double tol = 0.0;

  double form(const Vec& x, const Vec& y) const { return x.dot(matrix * y); }
  double norm() const;  // spectral norm of matrix
};

Vec bracket(const Vec& x, const Vec& y, const LieAlgebra& algebra);

/// Matrix of u -> [x, u].
Mat ad_matrix(const Vec& x, const LieAlgebra& algebra);

/// K_ij = trace(ad(E_i) ad(E_j)) on all of g.
Mat killing_matrix(const LieAlgebra& algebra);

/// Default eigenvalue cutoff: 1e-9 * max(1, ||K||).
double default_killing_tol(const Mat& killing);

/// Inertia of a symmetric matrix. tol < 0 selects default_killing_tol.
KillingData killing_signature(const Mat& killing, double tol = -1.0);

/// Killing form of g restricted to m (in m-coordinates) with its signature.
KillingData killing_data(const LieAlgebra& algebra,
                         const ReductiveDecomposition& decomposition,
                         double tol = -1.0);

/// Orthonormal basis (columns) of span{[E_i, E_j]}; cutoff 1e-10.
Mat derived_subalgebra(const LieAlgebra& algebra);

/// Orthonormal basis (columns, m-coordinates) of span{[m_i, m_j]_m}.
Mat derived_in_m(const LieAlgebra& algebra,
                 const ReductiveDecomposition& decomposition);

}  // namespace hgeo
