#pragma once

#include <complex>
#include <cstddef>

// Low-level complex vector kernels backing the iterative norm path. A
// scalar reference implementation always exists; an AVX2+FMA variant is
// selected at runtime when the CPU supports it. Both variants are exposed
// so equivalence can be tested directly.

namespace qdlab::kernels {

using cplx = std::complex<double>;

// sum_i u[i] * conj(v[i])
cplx dot_conj_scalar(const cplx* u, const cplx* v, std::size_t n);
// y[i] += a * x[i]
void axpy_scalar(cplx a, const cplx* x, cplx* y, std::size_t n);

// Dispatched entry points.
cplx dot_conj(const cplx* u, const cplx* v, std::size_t n);
void axpy(cplx a, const cplx* x, cplx* y, std::size_t n);

bool avx2_active();
const char* active_variant();

}  // namespace qdlab::kernels
