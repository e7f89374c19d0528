#include <cmath>

#include "hgeo/kernels.hpp"

namespace hgeo::kernels {

const char* to_string(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

ResidualKernelData ResidualKernelData::from(const GeodesicSystem& system) {
  if (!system.trivial_isotropy())
    throw Error(ErrorKind::unsupported, "batched residual kernel requires trivial isotropy");
  const int n = system.m_dim();
  if (n > kMaxDim)
    throw Error(ErrorKind::unsupported, "batched residual kernel supports dim <= 8");
  ResidualKernelData d;
  d.dim = n;
  d.alpha.resize(static_cast<size_t>(n) * n);
  d.drift.resize(n);
  d.forms.resize(static_cast<size_t>(n) * n * n);
  const auto& randers = system.randers();
  for (int a = 0; a < n; ++a) {
    d.drift[a] = randers.drift()(a);
    for (int b = 0; b < n; ++b) d.alpha[a * n + b] = randers.alpha()(a, b);
  }
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        d.forms[(static_cast<size_t>(i) * n + a) * n + b] = system.forms()[i](a, b);
  return d;
}

namespace detail {

void residual_norms_scalar(const ResidualKernelData& data, const double* xs,
                           std::size_t count, std::size_t begin, std::size_t end,
                           double* out) {
  const int n = data.dim;
  double x[kMaxDim];
  double p[kMaxDim];
  for (std::size_t pt = begin; pt < end; ++pt) {
    for (int a = 0; a < n; ++a) x[a] = xs[a * count + pt];
    double s2 = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) s2 += data.alpha[a * n + b] * x[a] * x[b];
    const double s = std::sqrt(s2);
    for (int a = 0; a < n; ++a) p[a] = x[a] + s * data.drift[a];
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double* q = data.forms.data() + static_cast<size_t>(i) * n * n;
      double r = 0.0;
      for (int a = 0; a < n; ++a) {
        double qx = 0.0;
        for (int b = 0; b < n; ++b) qx += q[a * n + b] * x[b];
        r += p[a] * qx;
      }
      acc += r * r;
    }
    out[pt] = std::sqrt(acc);
  }
}

}  // namespace detail

}  // namespace hgeo::kernels
