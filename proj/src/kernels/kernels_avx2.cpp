#include <immintrin.h>

#include "qdlab/kernels.hpp"

// Two interleaved complex doubles per __m256d lane group. The horizontal
// reductions happen once per call, outside the loops.

namespace qdlab::kernels {

cplx dot_conj_avx2(const cplx* u, const cplx* v, std::size_t n);
void axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n);

cplx dot_conj_avx2(const cplx* u, const cplx* v, std::size_t n) {
  const double* up = reinterpret_cast<const double*>(u);
  const double* vp = reinterpret_cast<const double*>(v);
  __m256d acc_re = _mm256_setzero_pd();  // lanes [ac, bd, ac, bd]
  __m256d acc_im = _mm256_setzero_pd();  // lanes [bc, ad, bc, ad]
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d uu = _mm256_loadu_pd(up + 2 * i);
    __m256d vv = _mm256_loadu_pd(vp + 2 * i);
    __m256d us = _mm256_permute_pd(uu, 0x5);  // swap re/im within each pair
    acc_re = _mm256_fmadd_pd(uu, vv, acc_re);
    acc_im = _mm256_fmadd_pd(us, vv, acc_im);
  }
  alignas(32) double r[4], m[4];
  _mm256_store_pd(r, acc_re);
  _mm256_store_pd(m, acc_im);
  double re = (r[0] + r[1]) + (r[2] + r[3]);
  double im = (m[0] - m[1]) + (m[2] - m[3]);
  for (; i < n; ++i) {
    const double a = u[i].real(), b = u[i].imag();
    const double c = v[i].real(), d = v[i].imag();
    re += a * c + b * d;
    im += b * c - a * d;
  }
  return {re, im};
}

void axpy_avx2(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double* xp = reinterpret_cast<const double*>(x);
  double* yp = reinterpret_cast<double*>(y);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    __m256d xx = _mm256_loadu_pd(xp + 2 * i);
    __m256d xs = _mm256_permute_pd(xx, 0x5);
    __m256d prod = _mm256_fmaddsub_pd(ar, xx, _mm256_mul_pd(ai, xs));
    __m256d yy = _mm256_loadu_pd(yp + 2 * i);
    _mm256_storeu_pd(yp + 2 * i, _mm256_add_pd(yy, prod));
  }
  const double car = a.real(), cai = a.imag();
  for (; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cplx(car * xr - cai * xi, car * xi + cai * xr);
  }
}

}  // namespace qdlab::kernels
