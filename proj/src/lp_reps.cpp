#include "qdlab/lp_reps.hpp"

#include <cmath>
#include <stdexcept>

namespace qdlab {

PSParams make_ps_params(double z, int d, int window) {
  if (!(z >= 0.0 && z <= 1.0)) throw std::invalid_argument("z must lie in [0,1]");
  if (d < 2) throw std::invalid_argument("d must be at least 2");
  if (window < 0) throw std::invalid_argument("window must be nonnegative");
  return {z, d, window};
}

FinVector pi_z_apply(const PSParams& params, int i, const FinVector& v) {
  if (i == 0 || std::abs(i) > params.d)
    throw std::invalid_argument("generator index out of range");
  const int gen = std::abs(i);
  const double z = params.z;
  const double c = std::sqrt(std::max(0.0, 1.0 - z * z));
  const Word g{make_letter(gen, +1)};
  const Word gi{make_letter(gen, -1)};
  FinVector out;
  if (i > 0) {
    for (const auto& [w, coef] : v) {
      if (w.empty()) {
        fv_add(out, g, coef * c);
        fv_add(out, {}, coef * z);
      } else if (w == gi) {
        fv_add(out, g, -coef * z);
        fv_add(out, {}, coef * c);
      } else {
        fv_add(out, multiply(g, w), coef);
      }
    }
  } else {
    // Adjoint action of pi_z(a_i).
    for (const auto& [w, coef] : v) {
      if (w.empty()) {
        fv_add(out, {}, coef * z);
        fv_add(out, gi, coef * c);
      } else if (w == g) {
        fv_add(out, {}, coef * c);
        fv_add(out, gi, -coef * z);
      } else {
        fv_add(out, multiply(gi, w), coef);
      }
    }
  }
  return out;
}

cplx matrix_coefficient(const PSParams& params, const Word& t) {
  if (static_cast<int>(t.size()) > params.window)
    throw WindowViolation("word length exceeds the certified window");
  FinVector v{{Word{}, cplx{1.0, 0.0}}};
  for (auto it = t.rbegin(); it != t.rend(); ++it) {
    const int i = letter_sign(*it) * letter_gen(*it);
    v = pi_z_apply(params, i, v);
  }
  const auto at = v.find(Word{});
  return at == v.end() ? cplx{0.0, 0.0} : at->second;
}

double generator_gap(double z) {
  if (!(z >= 0.0 && z <= 1.0)) throw std::invalid_argument("z must lie in [0,1]");
  const double c = std::sqrt(std::max(0.0, 1.0 - z * z));
  Eigen::MatrixXcd M(2, 2);
  M << cplx{z - 1.0, 0.0}, cplx{c, 0.0}, cplx{c, 0.0}, cplx{1.0 - z, 0.0};
  return operator_norm(M);
}

MatrixOnBasis haagerup_gram(double r, int R, int d) {
  if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("r must lie in (0,1)");
  MatrixOnBasis out;
  out.basis = ball(R, d);
  const long n = static_cast<long>(out.basis.size());
  out.data.resize(n, n);
  std::vector<Word> inv(n);
  for (long i = 0; i < n; ++i) inv[i] = invert(out.basis[i]);
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      const Word w = multiply(inv[i], out.basis[j]);
      out.data(i, j) = std::pow(r, static_cast<double>(w.size()));
    }
  }
  return out;
}

LpNorm lp_radial_norm(double z, double p, int d) {
  if (!(z >= 0.0 && z < 1.0)) throw std::invalid_argument("z must lie in [0,1)");
  if (!(p >= 1.0)) throw std::invalid_argument("p must be at least 1");
  if (d < 2) throw std::invalid_argument("d must be at least 2");
  const double t = std::pow(z, p);
  const double s = (2.0 * d - 1.0) * t;
  if (s >= 1.0) return {0.0, true};
  const double sum = 1.0 + 2.0 * d * t / (1.0 - s);
  return {std::pow(sum, 1.0 / p), false};
}

double lp_radial_partial(double z, double p, int d, int n) {
  if (!(z >= 0.0 && z < 1.0)) throw std::invalid_argument("z must lie in [0,1)");
  if (!(p >= 1.0)) throw std::invalid_argument("p must be at least 1");
  if (d < 2 || n < 0) throw std::invalid_argument("invalid d or n");
  // Sphere of radius m holds 2d(2d-1)^(m-1) words, so each shell adds
  // (2d/(2d-1)) s^m with s = (2d-1) z^p.
  const double s = (2.0 * d - 1.0) * std::pow(z, p);
  double sum = 1.0;
  double shell = 2.0 * d / (2.0 * d - 1.0);
  for (int m = 1; m <= n; ++m) {
    shell *= s;
    sum += shell;
  }
  return std::pow(sum, 1.0 / p);
}

double qd_upper_bound(double p, int d) {
  if (!(p >= 2.0)) throw std::invalid_argument("p must be at least 2");
  if (d < 2) throw std::invalid_argument("d must be at least 2");
  if (std::isinf(p)) return 0.0;
  const double z = std::pow(2.0 * d - 1.0, -1.0 / p);
  return std::sqrt(std::max(0.0, 2.0 - 2.0 * z));
}

double cb_upper_bound(double p, double q, int d) {
  if (!(p >= 2.0)) throw std::invalid_argument("p must be at least 2");
  if (!(p < q)) throw std::invalid_argument("requires p < q");
  if (d < 2) throw std::invalid_argument("d must be at least 2");
  // (p-q)/(pq) -> -1/p as q -> infinity.
  const double expo = std::isinf(q) ? -1.0 / p : (p - q) / (p * q);
  const double z = std::pow(2.0 * d - 1.0, expo);
  return 1.0 + d * std::sqrt(std::max(0.0, 2.0 - 2.0 * z));
}

}  // namespace qdlab
