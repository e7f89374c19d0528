#include "hgeo/lie_core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>

namespace hgeo {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::input: return "input";
    case ErrorKind::domain: return "domain";
    case ErrorKind::null_cone: return "null-cone";
    case ErrorKind::unsupported: return "unsupported";
    case ErrorKind::wrong_case: return "wrong-case";
    case ErrorKind::invalid_hyperplane: return "invalid-hyperplane";
    case ErrorKind::solver_failure: return "solver-failure";
  }
  return "unknown";
}

namespace {

constexpr double kJacobiTol = 1e-12;
constexpr double kRankCutoff = 1e-10;

void require_dim(const Vec& x, int dim, const char* what) {
  if (x.size() != dim) {
    std::ostringstream os;
    os << what << ": expected length " << dim << ", got " << x.size();
    throw Error(ErrorKind::input, os.str());
  }
}

// Orthonormal basis of the column space of m, singular values below
// cutoff * max(1, sigma_max) discarded.
Mat orthonormal_range(const Mat& m, double cutoff) {
  if (m.cols() == 0 || m.rows() == 0) return Mat(m.rows(), 0);
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeThinU);
  const auto& s = svd.singularValues();
  const double thresh = cutoff * std::max(1.0, s.size() ? s(0) : 0.0);
  int rank = 0;
  while (rank < s.size() && s(rank) > thresh) ++rank;
  return svd.matrixU().leftCols(rank);
}

}  // namespace

LieAlgebra::LieAlgebra(int dim, std::vector<double> structure,
                       std::string label)
    : dim_(dim), c_(std::move(structure)), label_(std::move(label)) {
  if (dim_ <= 0) throw Error(ErrorKind::input, "algebra dimension must be positive");
  const size_t expected = static_cast<size_t>(dim_) * dim_ * dim_;
  if (c_.size() != expected) {
    std::ostringstream os;
    os << "structure constants: expected " << expected << " entries, got "
       << c_.size();
    throw Error(ErrorKind::input, os.str());
  }
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        if (c(i, j, k) != -c(j, i, k)) {
          std::ostringstream os;
          os << "structure constants not antisymmetric at (" << i << "," << j
             << "," << k << ")";
          throw Error(ErrorKind::input, os.str());
        }
  const double jac = jacobi_residual();
  if (jac > kJacobiTol * std::max(1.0, scale() * scale())) {
    std::ostringstream os;
    os << "Jacobi identity violated (residual " << jac << ")";
    throw Error(ErrorKind::input, os.str());
  }
}

double LieAlgebra::scale() const {
  double s = 0.0;
  for (double v : c_) s = std::max(s, std::abs(v));
  return s;
}

double LieAlgebra::jacobi_residual() const {
  // [[E_i,E_j],E_k] = sum_l c(i,j,l) c(l,k,m) E_m
  double worst = 0.0;
  for (int i = 0; i < dim_; ++i)
    for (int j = 0; j < dim_; ++j)
      for (int k = 0; k < dim_; ++k)
        for (int m = 0; m < dim_; ++m) {
          double sum = 0.0;
          for (int l = 0; l < dim_; ++l)
            sum += c(i, j, l) * c(l, k, m) + c(j, k, l) * c(l, i, m) +
                   c(k, i, l) * c(l, j, m);
          worst = std::max(worst, std::abs(sum));
        }
  return worst;
}

StructureBuilder::StructureBuilder(int dim)
    : dim_(dim), c_(static_cast<size_t>(dim) * dim * dim, 0.0) {
  if (dim <= 0) throw Error(ErrorKind::input, "algebra dimension must be positive");
}

StructureBuilder& StructureBuilder::set(int i, int j, int k, double value) {
  if (i < 0 || j < 0 || k < 0 || i >= dim_ || j >= dim_ || k >= dim_)
    throw Error(ErrorKind::input, "structure constant index out of range");
  if (i == j) {
    if (value != 0.0)
      throw Error(ErrorKind::input, "[E_i,E_i] must vanish");
    return *this;
  }
  auto at = [&](int a, int b, int c) -> double& {
    return c_[(static_cast<size_t>(a) * dim_ + b) * dim_ + c];
  };
  at(i, j, k) = value;
  at(j, i, k) = -value;
  return *this;
}

LieAlgebra StructureBuilder::build(std::string label) const {
  return LieAlgebra(dim_, c_, std::move(label));
}

namespace families {

LieAlgebra so3(double a, double b, double c) {
  std::ostringstream label;
  label << "so3(" << a << "," << b << "," << c << ")";
  return StructureBuilder(3)
      .set(0, 1, 2, a)
      .set(0, 2, 1, -b)
      .set(1, 2, 0, c)
      .build(label.str());
}

LieAlgebra sl2(double a, double b, double c) {
  std::ostringstream label;
  label << "sl2(" << a << "," << b << "," << c << ")";
  return StructureBuilder(3)
      .set(0, 1, 2, a)
      .set(0, 2, 1, b)
      .set(1, 2, 0, c)
      .build(label.str());
}

LieAlgebra heisenberg(double scale) {
  std::ostringstream label;
  label << "heisenberg(" << scale << ")";
  return StructureBuilder(3).set(0, 1, 2, scale).build(label.str());
}

LieAlgebra direct_sum(const LieAlgebra& first, const LieAlgebra& second) {
  const int n1 = first.dim();
  StructureBuilder builder(n1 + second.dim());
  for (int i = 0; i < n1; ++i)
    for (int j = i + 1; j < n1; ++j)
      for (int k = 0; k < n1; ++k)
        if (first.c(i, j, k) != 0.0) builder.set(i, j, k, first.c(i, j, k));
  for (int i = 0; i < second.dim(); ++i)
    for (int j = i + 1; j < second.dim(); ++j)
      for (int k = 0; k < second.dim(); ++k)
        if (second.c(i, j, k) != 0.0)
          builder.set(n1 + i, n1 + j, n1 + k, second.c(i, j, k));
  return builder.build(first.label() + "+" + second.label());
}

LieAlgebra abelian(int dim) {
  return StructureBuilder(dim).build("abelian(" + std::to_string(dim) + ")");
}

}  // namespace families

ReductiveDecomposition::ReductiveDecomposition(Mat m_basis, Mat h_basis, Mat to_m)
    : m_basis_(std::move(m_basis)), h_basis_(std::move(h_basis)), to_m_(std::move(to_m)) {}

ReductiveDecomposition ReductiveDecomposition::trivial(const LieAlgebra& algebra) {
  const int n = algebra.dim();
  return ReductiveDecomposition(Mat::Identity(n, n), Mat(n, 0), Mat::Identity(n, n));
}

ReductiveDecomposition::ReductiveDecomposition(const LieAlgebra& algebra,
                                               Mat m_basis, Mat h_basis)
    : m_basis_(std::move(m_basis)), h_basis_(std::move(h_basis)) {
  const int n = algebra.dim();
  if (h_basis_.cols() == 0) h_basis_.resize(n, 0);
  if (m_basis_.rows() != n || h_basis_.rows() != n)
    throw Error(ErrorKind::input, "decomposition vectors must have the algebra dimension");
  if (m_basis_.cols() + h_basis_.cols() != n)
    throw Error(ErrorKind::input, "dim m + dim h must equal dim g");
  if (m_basis_.cols() == 0) throw Error(ErrorKind::input, "m must be nonzero");

  Mat full(n, n);
  full << m_basis_, h_basis_;
  Eigen::FullPivLU<Mat> lu(full);
  lu.setThreshold(1e-10);
  if (lu.rank() != n)
    throw Error(ErrorKind::input, "m and h bases do not span the algebra");
  const Mat inv = lu.inverse();
  to_m_ = inv.topRows(m_basis_.cols());
  const Mat to_h = inv.bottomRows(h_basis_.cols());

  const double tol = 1e-10 * std::max(1.0, algebra.scale()) *
                     std::max(1.0, full.cwiseAbs().maxCoeff());
  for (int i = 0; i < h_basis_.cols(); ++i) {
    for (int j = 0; j < h_basis_.cols(); ++j) {
      const Vec b = bracket(h_basis_.col(i), h_basis_.col(j), algebra);
      if ((b - h_basis_ * (to_h * b)).norm() > tol)
        throw Error(ErrorKind::input, "h is not a subalgebra");
    }
    for (int j = 0; j < m_basis_.cols(); ++j) {
      const Vec b = bracket(h_basis_.col(i), m_basis_.col(j), algebra);
      if ((b - m_basis_ * (to_m_ * b)).norm() > tol)
        throw Error(ErrorKind::input, "decomposition is not reductive: [h,m] not in m");
    }
  }
}

double KillingData::norm() const {
  if (matrix.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Mat> es(matrix, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

Vec bracket(const Vec& x, const Vec& y, const LieAlgebra& algebra) {
  const int n = algebra.dim();
  require_dim(x, n, "bracket lhs");
  require_dim(y, n, "bracket rhs");
  Vec out = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    if (x(i) == 0.0) continue;
    for (int j = 0; j < n; ++j) {
      const double w = x(i) * y(j);
      if (w == 0.0) continue;
      for (int k = 0; k < n; ++k) out(k) += w * algebra.c(i, j, k);
    }
  }
  return out;
}

Mat ad_matrix(const Vec& x, const LieAlgebra& algebra) {
  const int n = algebra.dim();
  require_dim(x, n, "ad_matrix");
  Mat ad = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) ad(k, j) += x(i) * algebra.c(i, j, k);
  return ad;
}

Mat killing_matrix(const LieAlgebra& algebra) {
  const int n = algebra.dim();
  std::vector<Mat> ads;
  ads.reserve(n);
  for (int i = 0; i < n; ++i) ads.push_back(ad_matrix(Vec::Unit(n, i), algebra));
  Mat k(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      // trace(A B) = sum_ab A_ab B_ba
      k(i, j) = (ads[i].array() * ads[j].transpose().array()).sum();
      k(j, i) = k(i, j);
    }
  return k;
}

double default_killing_tol(const Mat& killing) {
  double norm = 0.0;
  if (killing.size() > 0) {
    Eigen::SelfAdjointEigenSolver<Mat> es(killing, Eigen::EigenvaluesOnly);
    norm = es.eigenvalues().cwiseAbs().maxCoeff();
  }
  return 1e-9 * std::max(1.0, norm);
}

KillingData killing_signature(const Mat& killing, double tol) {
  if (killing.rows() != killing.cols())
    throw Error(ErrorKind::input, "Killing matrix must be square");
  const double scale = std::max(1.0, killing.cwiseAbs().maxCoeff());
  if ((killing - killing.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw Error(ErrorKind::input, "Killing matrix must be symmetric");

  KillingData data;
  data.matrix = killing;
  data.tol = tol < 0.0 ? default_killing_tol(killing) : tol;
  const int n = static_cast<int>(killing.rows());
  if (n == 0) {
    data.radical_basis.resize(0, 0);
    return data;
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(killing);
  std::vector<int> null_ids;
  for (int i = 0; i < n; ++i) {
    const double ev = es.eigenvalues()(i);
    if (ev > data.tol) {
      ++data.signature.positive;
    } else if (ev < -data.tol) {
      ++data.signature.negative;
    } else {
      ++data.signature.zero;
      null_ids.push_back(i);
    }
  }
  data.radical_basis.resize(n, static_cast<Eigen::Index>(null_ids.size()));
  for (size_t c = 0; c < null_ids.size(); ++c)
    data.radical_basis.col(static_cast<Eigen::Index>(c)) = es.eigenvectors().col(null_ids[c]);
  return data;
}

KillingData killing_data(const LieAlgebra& algebra,
                         const ReductiveDecomposition& decomposition,
                         double tol) {
  const Mat& m = decomposition.m_basis();
  Mat km = m.transpose() * killing_matrix(algebra) * m;
  km = 0.5 * (km + km.transpose());
  return killing_signature(km, tol);
}

Mat derived_subalgebra(const LieAlgebra& algebra) {
  const int n = algebra.dim();
  Mat brackets(n, n * (n - 1) / 2);
  int col = 0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      brackets.col(col++) = bracket(Vec::Unit(n, i), Vec::Unit(n, j), algebra);
  return orthonormal_range(brackets, kRankCutoff);
}

Mat derived_in_m(const LieAlgebra& algebra,
                 const ReductiveDecomposition& decomposition) {
  const int m = decomposition.m_dim();
  Mat brackets(m, m * (m - 1) / 2);
  int col = 0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      brackets.col(col++) =
          decomposition.m_coordinates() *
          bracket(decomposition.m_basis().col(i), decomposition.m_basis().col(j), algebra);
  return orthonormal_range(brackets, kRankCutoff);
}

}  // namespace hgeo
