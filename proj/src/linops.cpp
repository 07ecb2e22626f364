#include "qdlab/linops.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "qdlab/kernels.hpp"

namespace qdlab {

void fv_add(FinVector& v, const Word& w, cplx c) {
  auto it = v.find(w);
  if (it == v.end()) {
    if (std::abs(c) >= kPruneThreshold) v.emplace(w, c);
    return;
  }
  it->second += c;
  if (std::abs(it->second) < kPruneThreshold) v.erase(it);
}

FinVector fv_scale(const FinVector& v, cplx c) {
  FinVector out;
  for (const auto& [w, a] : v) {
    cplx b = a * c;
    if (std::abs(b) >= kPruneThreshold) out.emplace(w, b);
  }
  return out;
}

FinVector fv_sum(const FinVector& u, const FinVector& v) {
  FinVector out = u;
  for (const auto& [w, c] : v) fv_add(out, w, c);
  return out;
}

double fv_norm(const FinVector& v) {
  double s = 0.0;
  for (const auto& [w, c] : v) s += std::norm(c);
  return std::sqrt(s);
}

cplx inner(const FinVector& u, const FinVector& v) {
  // Walk the smaller map, probe the larger.
  const FinVector& small = u.size() <= v.size() ? u : v;
  const FinVector& large = u.size() <= v.size() ? v : u;
  const bool small_is_u = u.size() <= v.size();
  cplx s = 0.0;
  for (const auto& [w, c] : small) {
    auto it = large.find(w);
    if (it == large.end()) continue;
    s += small_is_u ? c * std::conj(it->second) : it->second * std::conj(c);
  }
  return s;
}

FinVector lambda_apply(const Word& g, const FinVector& v) {
  FinVector out;
  for (const auto& [w, c] : v) out.emplace(multiply(g, w), c);
  return out;
}

double operator_norm_full(const Eigen::MatrixXcd& M) {
  if (M.rows() == 0 || M.cols() == 0) return 0.0;
  // Largest eigenvalue of the smaller-side Gram matrix.
  Eigen::MatrixXcd G;
  if (M.cols() <= M.rows())
    G = M.adjoint() * M;
  else
    G = M * M.adjoint();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(G, Eigen::EigenvaluesOnly);
  double lmax = es.eigenvalues().maxCoeff();
  return std::sqrt(std::max(0.0, lmax));
}

double operator_norm_power(const Eigen::MatrixXcd& M, double tol, long max_iter) {
  const Eigen::Index rows = M.rows(), cols = M.cols();
  if (rows == 0 || cols == 0) return 0.0;
  // Power iteration on M*M through two kernel passes per step. The start
  // vector is a fixed full-support profile so runs are deterministic.
  Eigen::VectorXcd v(cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    v(j) = cplx(1.0 + 0.5 * std::cos(0.7 * static_cast<double>(j)),
                0.25 * std::sin(1.3 * static_cast<double>(j) + 0.4));
  v /= v.norm();
  Eigen::VectorXcd y(rows), u(cols);
  double prev = -1.0;
  int stable = 0;
  const int need_stable = 25;
  for (long it = 0; it < max_iter; ++it) {
    y.setZero();
    for (Eigen::Index j = 0; j < cols; ++j)
      kernels::axpy(v(j), M.col(j).data(), y.data(), static_cast<std::size_t>(rows));
    const double sigma = y.norm();  // ||M v|| with ||v|| = 1
    if (sigma == 0.0) return 0.0;
    for (Eigen::Index j = 0; j < cols; ++j)
      u(j) = std::conj(kernels::dot_conj(M.col(j).data(), y.data(),
                                         static_cast<std::size_t>(rows)));
    const double un = u.norm();
    if (un == 0.0) return sigma;
    v = u / un;
    if (prev >= 0.0 && std::abs(sigma - prev) <= tol * std::max(1.0, sigma)) {
      if (++stable >= need_stable) return sigma;
    } else {
      stable = 0;
    }
    prev = sigma;
  }
  throw NonConvergence("operator_norm_power: no convergence within iteration limit");
}

double operator_norm(const Eigen::MatrixXcd& M) {
  const Eigen::Index dim = std::max(M.rows(), M.cols());
  if (dim < 1500) return operator_norm_full(M);
  return operator_norm_power(M);
}

double min_eig_psd(const Eigen::MatrixXcd& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("min_eig_psd: matrix not square");
  const double asym = (M - M.adjoint()).cwiseAbs().maxCoeff();
  if (asym > 1e-10)
    throw std::invalid_argument("min_eig_psd: input not Hermitian within 1e-10");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
      ((M + M.adjoint()) * 0.5).eval(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

std::vector<Word> support_window(const FiniteRankOperator& op) {
  std::set<Word, WordLess> words;
  for (const Dyad& d : op) {
    for (const auto& [w, c] : d.u) words.insert(w);
    for (const auto& [w, c] : d.v) words.insert(w);
  }
  return {words.begin(), words.end()};
}

MatrixOnBasis compress(const FiniteRankOperator& op, const std::vector<Word>& basis) {
  const Eigen::Index n = static_cast<Eigen::Index>(basis.size());
  std::map<Word, Eigen::Index, WordLess> pos;
  for (Eigen::Index i = 0; i < n; ++i) pos.emplace(basis[i], i);
  if (static_cast<Eigen::Index>(pos.size()) != n)
    throw std::invalid_argument("compress: basis words not pairwise distinct");

  MatrixOnBasis out;
  out.basis = basis;
  out.data = Eigen::MatrixXcd::Zero(n, n);
  for (const Dyad& d : op) {
    Eigen::VectorXcd xu = Eigen::VectorXcd::Zero(n);
    Eigen::VectorXcd xv = Eigen::VectorXcd::Zero(n);
    for (const auto& [w, c] : d.u) {
      auto it = pos.find(w);
      if (it == pos.end())
        throw WindowViolation("compress: dyad support word " + word_text(w) +
                              " missing from basis");
      xu(it->second) = c;
    }
    for (const auto& [w, c] : d.v) {
      auto it = pos.find(w);
      if (it == pos.end())
        throw WindowViolation("compress: dyad support word " + word_text(w) +
                              " missing from basis");
      xv(it->second) = c;
    }
    out.data.noalias() += xu * xv.adjoint();
  }
  return out;
}

MatrixOnBasis compress_generator(const Word& g, const std::vector<Word>& row_basis,
                                 const std::vector<Word>& col_basis) {
  std::map<Word, Eigen::Index, WordLess> pos;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(row_basis.size()); ++i)
    pos.emplace(row_basis[i], i);
  MatrixOnBasis out;
  out.basis = row_basis;
  out.data = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(row_basis.size()),
                                    static_cast<Eigen::Index>(col_basis.size()));
  for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(col_basis.size()); ++c) {
    Word img = multiply(g, col_basis[c]);
    auto it = pos.find(img);
    if (it == pos.end())
      throw WindowViolation("compress_generator: image " + word_text(img) +
                            " of basis word " + word_text(col_basis[c]) +
                            " leaves the window");
    out.data(it->second, c) = 1.0;
  }
  return out;
}

double finite_rank_norm(const FiniteRankOperator& op) {
  const Eigen::Index m = static_cast<Eigen::Index>(op.size());
  if (m == 0) return 0.0;
  // Gram matrices of the two dyad legs: Gu[i][j] = <u_j, u_i> = u_i^H u_j.
  Eigen::MatrixXcd Gu(m, m), Gv(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = i; j < m; ++j) {
      Gu(i, j) = inner(op[j].u, op[i].u);
      Gu(j, i) = std::conj(Gu(i, j));
      Gv(i, j) = inner(op[j].v, op[i].v);
      Gv(j, i) = std::conj(Gv(i, j));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esv(Gv);
  Eigen::VectorXd lv = esv.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  Eigen::MatrixXcd S =
      esv.eigenvectors() * lv.asDiagonal() * esv.eigenvectors().adjoint();
  Eigen::MatrixXcd H = S * Gu * S;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> esh(
      ((H + H.adjoint()) * 0.5).eval(), Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, esh.eigenvalues().maxCoeff()));
}

}  // namespace qdlab
