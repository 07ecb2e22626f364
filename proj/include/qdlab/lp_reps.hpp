#pragma once

#include <limits>
#include <string>
#include <vector>

#include "qdlab/linops.hpp"
#include "qdlab/words.hpp"

namespace qdlab {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct PSParams {
  double z = 0.0;
  int d = 2;
  int window = 0;  // ball radius within which compositions are certified exact
};

// Validates 0 <= z <= 1, d >= 2, window >= 0.
PSParams make_ps_params(double z, int d, int window);

// pi_z(a_i) applied to v for i in 1..d, or pi_z(a_i^-1) = pi_z(a_i)^* for
// i in -d..-1. Linear extension of the rule
//   delta_e        -> sqrt(1-z^2) delta_{a_i} + z delta_e,
//   delta_{a_i^-1} -> -z delta_{a_i} + sqrt(1-z^2) delta_e,
//   delta_x        -> delta_{a_i x} otherwise;
// isometric for every z in [0,1], and pi_0 = lambda.
FinVector pi_z_apply(const PSParams& params, int i, const FinVector& v);

// <pi_z(t) delta_e, delta_e> by composing the letter actions; equals z^|t|.
// Throws WindowViolation when |t| exceeds the window.
cplx matrix_coefficient(const PSParams& params, const Word& t);

// ||pi_z(a_i) - pi_1(a_i)|| = sqrt(2-2z), computed as the norm of the 2x2
// block [[z-1, sqrt(1-z^2)], [sqrt(1-z^2), 1-z]] on span{delta_e, delta_{a_i}}
// (the difference vanishes on the complement).
double generator_gap(double z);

// Gram matrix [r^{|s^-1 t|}] of the radial function r^{|.|} over ball(R, d);
// positive semidefinite for 0 < r < 1.
MatrixOnBasis haagerup_gram(double r, int R, int d);

struct LpNorm {
  double value = 0.0;
  bool divergent = false;
};

// l^p norm of the radial function z^{|.|} on the free group of rank d:
// (1 + 2d z^p / (1 - (2d-1) z^p))^{1/p} when (2d-1) z^p < 1, divergent flag
// otherwise.
LpNorm lp_radial_norm(double z, double p, int d);

// Partial sum route over ball(n), using the sphere counts 2d(2d-1)^{m-1}.
double lp_radial_partial(double z, double p, int d, int n);

// Witness bound sqrt(2 - 2(2d-1)^{-1/p}) for the generator family under
// pi at z = (2d-1)^{-1/p}; 0 at p = infinity; strictly decreasing in p.
double qd_upper_bound(double p, int d);

// Completely bounded distortion bound 1 + d sqrt(2(1 - (2d-1)^{(p-q)/(pq)}))
// for 2 <= p < q <= infinity; rejects p >= q.
double cb_upper_bound(double p, double q, int d);

}  // namespace qdlab
