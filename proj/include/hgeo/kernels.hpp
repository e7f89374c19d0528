#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "hgeo/criterion.hpp"

namespace hgeo::kernels {

enum class Isa { scalar, avx2 };

const char* to_string(Isa isa);

/// Best instruction set available on the running CPU.
Isa detect_isa();

/// True if this build carries a kernel for `isa` and the CPU can run it.
bool isa_available(Isa isa);

constexpr int kMaxDim = 8;

/// Flattened coefficients of the trivial-isotropy geodesic system
///   r_i(x) = (x + |x|_alpha V)^T Q_i x,
/// laid out row-major for the batched kernels.
struct ResidualKernelData {
  int dim = 0;
  std::vector<double> alpha;  // dim * dim
  std::vector<double> drift;  // dim
  std::vector<double> forms;  // dim * dim * dim, forms[(i*dim + a)*dim + b] = Q_i(a,b)

  /// Requires trivial isotropy and dim <= kMaxDim; throws Error(unsupported).
  static ResidualKernelData from(const GeodesicSystem& system);
};

/// Euclidean norm of r(x) for each column of a structure-of-arrays batch:
/// coordinate a of point p is xs[a * count + p]. out.size() == count.
void residual_norms(const ResidualKernelData& data, std::span<const double> xs,
                    std::span<double> out, Isa isa);
inline void residual_norms(const ResidualKernelData& data, std::span<const double> xs,
                           std::span<double> out) {
  residual_norms(data, xs, out, detect_isa());
}

namespace detail {
void residual_norms_scalar(const ResidualKernelData& data, const double* xs,
                           std::size_t count, std::size_t begin, std::size_t end,
                           double* out);
#if defined(__x86_64__) || defined(_M_X64)
void residual_norms_avx2(const ResidualKernelData& data, const double* xs,
                         std::size_t count, double* out);
#endif
}  // namespace detail

}  // namespace hgeo::kernels
