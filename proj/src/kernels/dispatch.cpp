#include <cstdlib>
#include <cstring>

#include "hgeo/kernels.hpp"

namespace hgeo::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  static const bool has = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return has;
#else
  return false;
#endif
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2: return cpu_has_avx2();
  }
  return false;
}

Isa detect_isa() {
  // HGEO_FORCE_SCALAR=1 pins the reference kernel. Read on every call so a
  // process can switch kernels between runs; the CPU probe itself is cached.
  const char* force = std::getenv("HGEO_FORCE_SCALAR");
  if (force != nullptr && std::strcmp(force, "0") != 0) return Isa::scalar;
  return cpu_has_avx2() ? Isa::avx2 : Isa::scalar;
}

void residual_norms(const ResidualKernelData& data, std::span<const double> xs,
                    std::span<double> out, Isa isa) {
  const std::size_t count = out.size();
  if (data.dim <= 0 || xs.size() != count * static_cast<std::size_t>(data.dim))
    throw Error(ErrorKind::input, "residual_norms: batch size mismatch");
  if (!isa_available(isa))
    throw Error(ErrorKind::unsupported,
                std::string("residual_norms: ISA not available: ") + to_string(isa));
  switch (isa) {
#if defined(__x86_64__) || defined(_M_X64)
    case Isa::avx2:
      detail::residual_norms_avx2(data, xs.data(), count, out.data());
      return;
#endif
    default:
      detail::residual_norms_scalar(data, xs.data(), count, 0, count, out.data());
      return;
  }
}

}  // namespace hgeo::kernels
