#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <stdexcept>
#include <vector>

#include "qdlab/words.hpp"

namespace qdlab {

using cplx = std::complex<double>;

// Entries with modulus below this are dropped everywhere, keeping supports
// finite and far below every test tolerance.
inline constexpr double kPruneThreshold = 1e-15;

// Finitely supported element of l^2 of the group, keyed by reduced word.
using FinVector = std::map<Word, cplx, WordLess>;

void fv_add(FinVector& v, const Word& w, cplx c);
FinVector fv_scale(const FinVector& v, cplx c);
FinVector fv_sum(const FinVector& u, const FinVector& v);
double fv_norm(const FinVector& v);

// sum_x u(x) * conj(v(x)); linear in the first argument.
cplx inner(const FinVector& u, const FinVector& v);

// Left regular representation: (lambda_g v)(x) = v(g^-1 x).
FinVector lambda_apply(const Word& g, const FinVector& v);

struct MatrixOnBasis {
  std::vector<Word> basis;
  Eigen::MatrixXcd data;
};

// Finite rank operator sum_i |u_i><v_i| (signs and weights folded into u_i).
struct Dyad {
  FinVector u, v;
};
using FiniteRankOperator = std::vector<Dyad>;

struct WindowViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonConvergence : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Largest singular value. Full decomposition below dimension 1500, power
// iteration on M*M at or above it; both paths agree to 1e-8 where both run.
double operator_norm(const Eigen::MatrixXcd& M);
double operator_norm_full(const Eigen::MatrixXcd& M);
double operator_norm_power(const Eigen::MatrixXcd& M, double tol = 1e-12,
                           long max_iter = 100000);
inline double operator_norm(const MatrixOnBasis& M) { return operator_norm(M.data); }

// Smallest eigenvalue of a Hermitian PSD matrix; rejects asymmetry
// above 1e-10.
double min_eig_psd(const Eigen::MatrixXcd& M);
inline double min_eig_psd(const MatrixOnBasis& M) { return min_eig_psd(M.data); }

// Matrix of the finite rank operator on the given basis; exact when the
// basis contains every dyad support word, otherwise throws WindowViolation.
MatrixOnBasis compress(const FiniteRankOperator& op, const std::vector<Word>& basis);

// Matrix of lambda_g with rows indexed by row_basis and columns by
// col_basis; throws WindowViolation if some column image leaves row_basis.
MatrixOnBasis compress_generator(const Word& g, const std::vector<Word>& row_basis,
                                 const std::vector<Word>& col_basis);
inline MatrixOnBasis compress_generator(const Word& g, const std::vector<Word>& basis) {
  return compress_generator(g, basis, basis);
}

// Largest singular value of sum_i |u_i><v_i| through the Gram matrices of
// the dyad legs: ||C||^2 = lambda_max(Gv^{1/2} Gu Gv^{1/2}). Exact for any
// finite rank operator, no ambient window needed.
double finite_rank_norm(const FiniteRankOperator& op);

// Sorted union of all dyad support words (the exact compression window).
std::vector<Word> support_window(const FiniteRankOperator& op);

}  // namespace qdlab
