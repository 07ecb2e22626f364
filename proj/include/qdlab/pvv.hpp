#pragma once

#include <vector>

#include "qdlab/linops.hpp"
#include "qdlab/words.hpp"

namespace qdlab {

// Twist constants of the eta basis.
inline constexpr cplx kTwistA{0.5, 0.5};
inline constexpr cplx kTwistB{0.5, -0.5};

struct PVVParams {
  long N = 0;
  int R = 0;
  bool regime_ok = false;
};

// regime_ok records whether R * 4^R <= N^(1/4); N and R are otherwise free.
PVVParams make_params(long N, int R);

struct IndexPair {
  long k = 0;
  Word x;
  bool operator==(const IndexPair&) const = default;
};

struct IndexPairLess {
  bool operator()(const IndexPair& p, const IndexPair& q) const {
    if (p.k != q.k) return p.k < q.k;
    return WordLess{}(p.x, q.x);
  }
};

// F = {(k,x): 0 <= k <= N-1, x in B_R starting with b or b^-1, or x = e},
// ordered k ascending then word order.
std::vector<IndexPair> build_F(const PVVParams& params);

// Berg window vector sqrt(k/N) delta_{a^{k-N} x} + sqrt((N-k)/N) delta_{a^k x}.
FinVector eta_prime(long k, const Word& x, long N);

// Linear extension of V delta_x = A delta_x + B delta_{alpha(x)}; unitary,
// V^2 delta_x = delta_{alpha(x)}.
FinVector apply_V(const FinVector& v);

struct EtaBasis {
  PVVParams params;
  std::vector<IndexPair> pairs;
  std::vector<FinVector> vectors;
};

// eta(k,x) = V eta'(k,x); the family is orthonormal.
EtaBasis build_eta_basis(const PVVParams& params);

// T(i,j) = <eta_i, lambda_g eta_j>, brute force over supports.
// g must be a generator or inverse generator.
Eigen::MatrixXcd t_matrix(const EtaBasis& basis, const Word& g);

// Exact ||[P, lambda_a]|| for the projection P onto span{eta'}, compressed
// on the joint support window.
double commutator_norm_P(const PVVParams& params);

struct QCommNorm {
  double path1 = 0.0;  // largest singular value of the commutator, via dyad Grams
  double path2 = 0.0;  // max_h sqrt(1 - lambda_min(T_h^H T_h)), h in {g, g^-1}
};

// ||[lambda_g, Q]|| by two independent routes; g in {a, b}.
QCommNorm commutator_norm_Q(const EtaBasis& basis, const Word& g);

// Dyad form of [lambda_g, Q]; exposed for cross checks against dense
// compressions.
FiniteRankOperator q_commutator_dyads(const EtaBasis& basis, const Word& g);

// Pairs with k+|x| <= R-1 or N-k+|x| <= R-1.
std::vector<IndexPair> s_set(const PVVParams& params);
bool in_s_set(const IndexPair& p, const PVVParams& params);

struct ColoredCheck {
  double min_pair_value = 0.0;  // min over S of <Q lambda_a eta, lambda_a eta>
  double lambda_min_S = 0.0;    // lambda_min of T_a^H T_a on columns in S
  std::size_t s_size = 0;
};
ColoredCheck coloredtable_check(const EtaBasis& basis);

// lambda_min of T_a^H T_a restricted to columns outside S.
double claim_check(const EtaBasis& basis);

struct WitnessReport {
  long N = 0;
  int R = 0;
  bool regime_ok = false;
  double norm_comm_a = 0.0;
  double norm_comm_b = 0.0;
  double lambda_min_full = 0.0;
  double lambda_min_S = 0.0;
  double lambda_min_F_minus_S = 0.0;
  double bound_sqrt3_2 = 0.0;
  double claim_bound = 0.0;
};

WitnessReport witness_report(const PVVParams& params);
std::string witness_report_json(const WitnessReport& r);

}  // namespace qdlab
