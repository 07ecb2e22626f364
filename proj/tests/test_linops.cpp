#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <Eigen/Dense>
#include <random>

#include "qdlab/linops.hpp"
#include "qdlab/words.hpp"

using namespace qdlab;

namespace {

Eigen::MatrixXcd random_matrix(std::mt19937_64& rng, long rows, long cols) {
  std::normal_distribution<double> nd(0.0, 1.0);
  Eigen::MatrixXcd M(rows, cols);
  for (long j = 0; j < cols; ++j)
    for (long i = 0; i < rows; ++i) M(i, j) = cplx(nd(rng), nd(rng));
  return M;
}

FinVector delta(const char* s) {
  FinVector v;
  v[parse_word(s)] = 1.0;
  return v;
}

}  // namespace

TEST_CASE("inner is linear in the first argument") {
  FinVector u, v;
  u[parse_word("a")] = cplx(1.0, 1.0);
  v[parse_word("a")] = cplx(0.0, 1.0);
  // (1+i) * conj(i) = (1+i)(-i) = 1 - i
  CHECK(std::abs(inner(u, v) - cplx(1.0, -1.0)) <= 1e-15);
  CHECK(std::abs(inner(v, u) - cplx(1.0, 1.0)) <= 1e-15);
}

TEST_CASE("fv arithmetic and pruning") {
  FinVector v = delta("a");
  fv_add(v, parse_word("a"), cplx(-1.0, 0.0));
  CHECK(v.empty());  // cancelled entries are pruned
  FinVector w = fv_sum(delta("a"), fv_scale(delta("b"), cplx(0.0, 2.0)));
  CHECK(w.size() == 2);
  CHECK(std::abs(fv_norm(w) - std::sqrt(5.0)) <= 1e-14);
}

TEST_CASE("lambda translates and is unitary on deltas") {
  FinVector v = lambda_apply(parse_word("ab"), delta("B"));
  REQUIRE(v.size() == 1);
  CHECK(v.begin()->first == parse_word("a"));
  // lambda_g lambda_{g^-1} = id
  FinVector u = lambda_apply(parse_word("Ba"), lambda_apply(parse_word("Ab"), delta("ab")));
  REQUIRE(u.size() == 1);
  CHECK(u.begin()->first == parse_word("ab"));
}

TEST_CASE("operator norm: full and power paths agree") {
  std::mt19937_64 rng(7);
  Eigen::MatrixXcd M = random_matrix(rng, 40, 60);
  const double full = operator_norm_full(M);
  const double power = operator_norm_power(M);
  CHECK(full == doctest::Approx(power).epsilon(1e-8));
  // norm of a diagonal matrix is the largest |entry|
  Eigen::MatrixXcd D = Eigen::MatrixXcd::Zero(3, 3);
  D(0, 0) = cplx(0.0, -2.5);
  D(1, 1) = 1.0;
  CHECK(operator_norm(D) == doctest::Approx(2.5).epsilon(1e-12));
}

TEST_CASE("min_eig_psd rejects asymmetry and matches eigenvalues") {
  Eigen::MatrixXcd H(2, 2);
  H << 2.0, cplx(0.0, 1.0), cplx(0.0, -1.0), 2.0;
  CHECK(min_eig_psd(H) == doctest::Approx(1.0).epsilon(1e-12));
  Eigen::MatrixXcd bad(2, 2);
  bad << 1.0, 0.5, 0.0, 1.0;
  CHECK_THROWS_AS(min_eig_psd(bad), std::invalid_argument);
}

TEST_CASE("compress_generator is exact and isometric on ball columns") {
  std::vector<Word> rows = ball(3, 2);
  std::vector<Word> cols = ball(2, 2);
  MatrixOnBasis M = compress_generator(parse_word("a"), rows, cols);
  for (long j = 0; j < M.data.cols(); ++j)
    CHECK(M.data.col(j).norm() == doctest::Approx(1.0).epsilon(1e-14));
  // the image of ball(3) columns leaves ball(3): must refuse
  CHECK_THROWS_AS(compress_generator(parse_word("a"), rows, rows), WindowViolation);
}

TEST_CASE("finite_rank_norm equals the dense compression norm") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::vector<Word> B = ball(2, 2);
  FiniteRankOperator op;
  for (int k = 0; k < 5; ++k) {
    Dyad d;
    for (const Word& w : B) {
      if (nd(rng) > 0.5) d.u[w] = cplx(nd(rng), nd(rng));
      if (nd(rng) > 0.5) d.v[w] = cplx(nd(rng), nd(rng));
    }
    op.push_back(std::move(d));
  }
  std::vector<Word> win = support_window(op);
  MatrixOnBasis dense = compress(op, win);
  CHECK(finite_rank_norm(op) ==
        doctest::Approx(operator_norm(dense)).epsilon(1e-10));
}

TEST_CASE("support_window is sorted and minimal") {
  FiniteRankOperator op;
  Dyad d;
  d.u[parse_word("ba")] = 1.0;
  d.v[parse_word("a")] = 1.0;
  op.push_back(d);
  std::vector<Word> win = support_window(op);
  REQUIRE(win.size() == 2);
  CHECK(win[0] == parse_word("a"));
  CHECK(win[1] == parse_word("ba"));
}

TEST_CASE("power iteration reports non-convergence") {
  Eigen::MatrixXcd M = Eigen::MatrixXcd::Identity(4, 4);
  // max_iter 0 can never satisfy the stability window
  CHECK_THROWS_AS(operator_norm_power(M, 1e-12, 0), NonConvergence);
}
