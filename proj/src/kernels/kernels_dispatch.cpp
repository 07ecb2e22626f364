#include "qdlab/kernels.hpp"

namespace qdlab::kernels {

#if defined(QDLAB_HAVE_AVX2_TU)
cplx dot_conj_avx2(const cplx* u, const cplx* v, std::size_t n);
void axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n);
#endif

bool avx2_active() {
#if defined(QDLAB_HAVE_AVX2_TU) && (defined(__x86_64__) || defined(_M_X64))
  static const bool ok = __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
  return ok;
#else
  return false;
#endif
}

const char* active_variant() { return avx2_active() ? "avx2" : "scalar"; }

cplx dot_conj(const cplx* u, const cplx* v, std::size_t n) {
#if defined(QDLAB_HAVE_AVX2_TU)
  if (avx2_active()) return dot_conj_avx2(u, v, n);
#endif
  return dot_conj_scalar(u, v, n);
}

void axpy(cplx a, const cplx* x, cplx* y, std::size_t n) {
#if defined(QDLAB_HAVE_AVX2_TU)
  if (avx2_active()) {
    axpy_avx2(a, x, y, n);
    return;
  }
#endif
  axpy_scalar(a, x, y, n);
}

}  // namespace qdlab::kernels
