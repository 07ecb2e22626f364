#include "qdlab/kernels.hpp"

namespace qdlab::kernels {

cplx dot_conj_scalar(const cplx* u, const cplx* v, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = u[i].real(), b = u[i].imag();
    const double c = v[i].real(), d = v[i].imag();
    re += a * c + b * d;
    im += b * c - a * d;
  }
  return {re, im};
}

void axpy_scalar(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cplx(ar * xr - ai * xi, ar * xi + ai * xr);
  }
}

}  // namespace qdlab::kernels
