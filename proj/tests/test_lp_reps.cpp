#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "qdlab/linops.hpp"
#include "qdlab/lp_reps.hpp"
#include "qdlab/words.hpp"

using namespace qdlab;

namespace {

FinVector delta(const Word& w) {
  FinVector v;
  v[w] = 1.0;
  return v;
}

// pi_z(w) v, letters applied right to left.
FinVector apply_word(const PSParams& params, const Word& w, FinVector v) {
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    v = pi_z_apply(params, letter_sign(*it) * letter_gen(*it), v);
  return v;
}

double dist(const FinVector& u, const FinVector& v) {
  return fv_norm(fv_sum(u, fv_scale(v, -1.0)));
}

FinVector random_fv(std::mt19937_64& rng, int R) {
  std::normal_distribution<double> nd(0.0, 1.0);
  FinVector v;
  for (const Word& w : ball(R, 2))
    if (nd(rng) > 0.0) v[w] = cplx(nd(rng), nd(rng));
  return v;
}

}  // namespace

TEST_CASE("params validation") {
  CHECK_THROWS_AS(make_ps_params(-0.1, 2, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_ps_params(1.1, 2, 4), std::invalid_argument);
  CHECK_THROWS_AS(make_ps_params(0.5, 1, 4), std::invalid_argument);
}

TEST_CASE("defining action rule") {
  const double z = 0.37;
  PSParams params = make_ps_params(z, 2, 6);
  const double c = std::sqrt(1.0 - z * z);

  FinVector ve = pi_z_apply(params, 1, delta(Word{}));
  CHECK(std::abs(ve.at(parse_word("a")) - c) <= 1e-15);
  CHECK(std::abs(ve.at(Word{}) - z) <= 1e-15);

  FinVector vinv = pi_z_apply(params, 1, delta(parse_word("A")));
  CHECK(std::abs(vinv.at(parse_word("a")) + z) <= 1e-15);
  CHECK(std::abs(vinv.at(Word{}) - c) <= 1e-15);

  FinVector vb = pi_z_apply(params, 1, delta(parse_word("b")));
  REQUIRE(vb.size() == 1);
  CHECK(std::abs(vb.at(parse_word("ab")) - 1.0) <= 1e-15);
}

TEST_CASE("homomorphism over all short words") {
  PSParams params = make_ps_params(0.6, 2, 12);
  std::vector<Word> B3 = ball(3, 2);
  std::vector<Word> B2 = ball(2, 2);
  double worst = 0.0;
  for (const Word& s : B3)
    for (const Word& t : B3) {
      Word st = multiply(s, t);
      for (const Word& x : B2) {
        FinVector lhs = apply_word(params, s, apply_word(params, t, delta(x)));
        FinVector rhs = apply_word(params, st, delta(x));
        worst = std::max(worst, dist(lhs, rhs));
      }
    }
  CHECK(worst <= 1e-12);
}

TEST_CASE("isometry on random vectors across the z grid") {
  std::mt19937_64 rng(99);
  for (double z : {0.0, 0.3, 1.0 / std::sqrt(3.0), 0.9, 1.0}) {
    PSParams params = make_ps_params(z, 2, 8);
    for (int rep = 0; rep < 5; ++rep) {
      FinVector v = random_fv(rng, 3);
      for (int i : {1, 2, -1, -2})
        CHECK(std::abs(fv_norm(pi_z_apply(params, i, v)) - fv_norm(v)) <= 1e-12);
    }
  }
}

TEST_CASE("adjoint pairing <pi(a_i)u, v> = <u, pi(a_i^-1)v>") {
  std::mt19937_64 rng(7);
  PSParams params = make_ps_params(0.42, 2, 8);
  for (int rep = 0; rep < 10; ++rep) {
    FinVector u = random_fv(rng, 2);
    FinVector v = random_fv(rng, 2);
    for (int i : {1, 2}) {
      cplx lhs = inner(pi_z_apply(params, i, u), v);
      cplx rhs = inner(u, pi_z_apply(params, -i, v));
      CHECK(std::abs(lhs - rhs) <= 1e-12);
    }
  }
}

TEST_CASE("pi_0 equals the left regular representation") {
  PSParams params = make_ps_params(0.0, 2, 8);
  for (const Word& x : ball(2, 2)) {
    FinVector got = pi_z_apply(params, 1, delta(x));
    FinVector expect = lambda_apply(parse_word("a"), delta(x));
    CHECK(dist(got, expect) == 0.0);
    got = pi_z_apply(params, -2, delta(x));
    expect = lambda_apply(parse_word("B"), delta(x));
    CHECK(dist(got, expect) == 0.0);
  }
}

TEST_CASE("matrix coefficient is z^{|t|}") {
  for (double z : {0.3, 0.7}) {
    PSParams params = make_ps_params(z, 2, 6);
    for (const Word& t : ball(5, 2)) {
      cplx got = matrix_coefficient(params, t);
      CHECK(std::abs(got - std::pow(z, double(t.size()))) <= 1e-12);
    }
  }
  PSParams half = make_ps_params(0.5, 2, 6);
  CHECK(std::abs(matrix_coefficient(half, parse_word("Ab")) - 0.25) <= 1e-13);
  PSParams narrow = make_ps_params(0.5, 2, 1);
  CHECK_THROWS_AS(matrix_coefficient(narrow, parse_word("ab")), WindowViolation);
}

TEST_CASE("generator gap formula") {
  CHECK(generator_gap(1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(generator_gap(0.5) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(generator_gap(0.0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  for (int i = 0; i <= 10; ++i) {
    double z = i / 10.0;
    CHECK(generator_gap(z) ==
          doctest::Approx(std::sqrt(2.0 - 2.0 * z)).epsilon(1e-12));
  }
}

TEST_CASE("radial Gram positivity") {
  for (const auto& fx : fixtures::kHaagerupBall3) {
    double mn = min_eig_psd(haagerup_gram(fx.r, 3, 2));
    CHECK(mn >= -1e-10);
    CHECK(mn == doctest::Approx(fx.min_eig).epsilon(1e-8));
  }
  MatrixOnBasis g = haagerup_gram(0.5, 2, 2);
  REQUIRE(g.data.rows() == 17);
  for (long i = 0; i < 17; ++i)
    CHECK(std::abs(g.data(i, i) - 1.0) <= 1e-15);
}

TEST_CASE("lp radial norm closed form vs partial sums") {
  // With s = (2d-1) z^p, ball(40) resolves the series to 1e-8 relative only
  // for s <= 0.6 (the tail is (2d/(2d-1)) s^41/(1-s)); closer to the
  // radius the same comparison needs a longer partial sum, so larger s is
  // checked against ball(400) plus an explicit tail bound at n = 40.
  const int d = 2;
  for (double p : {1.0, 2.0, 4.0}) {
    for (double s : {0.1, 0.3, 0.6}) {
      const double z = std::pow(s / (2 * d - 1), 1.0 / p);
      LpNorm closed = lp_radial_norm(z, p, d);
      REQUIRE(!closed.divergent);
      double part = lp_radial_partial(z, p, d, 40);
      CHECK(std::abs(closed.value - part) <= 1e-8 * closed.value);
    }
    for (double s : {0.75, 0.9}) {
      const double z = std::pow(s / (2 * d - 1), 1.0 / p);
      LpNorm closed = lp_radial_norm(z, p, d);
      REQUIRE(!closed.divergent);
      double part400 = lp_radial_partial(z, p, d, 400);
      CHECK(std::abs(closed.value - part400) <= 1e-8 * closed.value);
      // the n = 40 partial undershoots by at most the geometric tail
      double part40 = lp_radial_partial(z, p, d, 40);
      double tail = (2.0 * d / (2.0 * d - 1.0)) * std::pow(s, 41.0) / (1.0 - s);
      CHECK(part40 <= closed.value + 1e-12);
      // equality up to rounding in the two power sums
      CHECK(std::pow(closed.value, p) - std::pow(part40, p) <=
            tail + 1e-12 * std::pow(closed.value, p));
    }
  }
}

TEST_CASE("lp radial norm divergence and endpoints") {
  CHECK(lp_radial_norm(1.0 / std::sqrt(3.0), 2.0, 2).divergent);
  CHECK(lp_radial_norm(0.9, 2.0, 2).divergent);
  LpNorm at0 = lp_radial_norm(0.0, 2.0, 2);
  CHECK(!at0.divergent);
  CHECK(at0.value == doctest::Approx(1.0).epsilon(1e-15));
  LpNorm fine = lp_radial_norm(0.5, 2.0, 2);
  CHECK(!fine.divergent);
  CHECK(fine.value ==
        doctest::Approx(std::pow(1.0 + 4.0 * 0.25 / (1.0 - 0.75), 0.5)).epsilon(1e-12));
}

TEST_CASE("qd upper bound") {
  CHECK(qd_upper_bound(2.0, 2) == doctest::Approx(fixtures::kQdUpperP2D2).epsilon(1e-12));
  CHECK(qd_upper_bound(4096.0, 2) ==
        doctest::Approx(fixtures::kQdUpperP4096D2).epsilon(1e-10));
  CHECK(qd_upper_bound(kInf, 2) == 0.0);
  double prev = kInf;
  for (int p = 2; p <= 64; ++p) {
    double v = qd_upper_bound(double(p), 2);
    CHECK(v < prev);
    prev = v;
  }
  for (double p : {2.0, 3.0, 10.0})
    for (int d : {2, 3})
      CHECK(qd_upper_bound(p, d) ==
            doctest::Approx(generator_gap(std::pow(2.0 * d - 1.0, -1.0 / p)))
                .epsilon(1e-12));
}

TEST_CASE("cb upper bound") {
  CHECK(cb_upper_bound(2.0, kInf, 2) ==
        doctest::Approx(1.0 + 2.0 * qd_upper_bound(2.0, 2)).epsilon(1e-12));
  // q -> p: the bound is continuous and tends to 1
  double prev = kInf;
  for (double dq : {1.0, 0.1, 0.01, 1e-4, 1e-8}) {
    double v = cb_upper_bound(2.0, 2.0 + dq, 2);
    CHECK(v < prev);
    CHECK(v >= 1.0);
    prev = v;
  }
  CHECK(prev <= 1.0 + 1e-3);
  // monotone increasing in q
  double last = 1.0;
  for (double q : {3.0, 4.0, 8.0, 100.0}) {
    double v = cb_upper_bound(2.0, q, 2);
    CHECK(v > last);
    last = v;
  }
  CHECK(cb_upper_bound(2.0, kInf, 2) > last);
  CHECK_THROWS_AS(cb_upper_bound(2.0, 2.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(cb_upper_bound(4.0, 3.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(cb_upper_bound(1.5, 3.0, 2), std::invalid_argument);
}

TEST_CASE("level-1 sample of the distortion inequality") {
  // || sum c_i pi_1(a_i) u || <= (1 + d sqrt(2-2z)) * (windowed norm of
  // sum c_i pi_z(a_i)). The right side uses a restricted compression, so
  // this is a sampled instance, not a certificate.
  std::mt19937_64 rng(17);
  std::normal_distribution<double> nd(0.0, 1.0);
  const int d = 2;
  for (double z : {0.4, 0.8}) {
    PSParams pz = make_ps_params(z, d, 10);
    PSParams p1 = make_ps_params(1.0, d, 10);
    const double cb = 1.0 + d * std::sqrt(2.0 - 2.0 * z);
    for (int rep = 0; rep < 5; ++rep) {
      cplx c1(nd(rng), nd(rng)), c2(nd(rng), nd(rng));
      auto apply_sum = [&](const PSParams& ps, const FinVector& v) {
        return fv_sum(fv_scale(pi_z_apply(ps, 1, v), c1),
                      fv_scale(pi_z_apply(ps, 2, v), c2));
      };
      // windowed lower bound on ||sum c_i pi_z(a_i)|| via ball(3) vectors
      double zn = 0.0;
      for (const Word& w : ball(3, 2))
        zn = std::max(zn, fv_norm(apply_sum(pz, delta(w))));
      for (int k = 0; k < 4; ++k) {
        FinVector u = random_fv(rng, 3);
        double un = fv_norm(u);
        if (un == 0.0) continue;
        CHECK(fv_norm(apply_sum(p1, u)) <= cb * zn * un * (1.0 + 1e-9));
      }
    }
  }
}
