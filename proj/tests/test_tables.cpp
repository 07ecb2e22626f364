#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "fixtures.hpp"
#include "qdlab/linops.hpp"
#include "qdlab/pvv.hpp"
#include "qdlab/tables.hpp"
#include "qdlab/words.hpp"

using namespace qdlab;

namespace {

std::vector<int> all_classes() {
  std::vector<int> cls = {kHeaderRow1, kHeaderRow2, kHeaderRow3};
  for (int b = 1; b <= 20; ++b) cls.push_back(b);
  return cls;
}

// Predicted entries of one row checked directly against the inner products,
// independent of the audit plumbing.
double row_deviation(TablePair t, const EtaBasis& basis, std::size_t row_idx) {
  const Word g = t == TablePair::T12 ? parse_word("a") : parse_word("A");
  std::map<IndexPair, std::size_t, IndexPairLess> pos;
  for (std::size_t i = 0; i < basis.pairs.size(); ++i) pos[basis.pairs[i]] = i;
  double dev = 0.0;
  for (const PredictedEntry& e :
       predicted_products(t, basis.pairs[row_idx], basis.params.N, basis.params.R)) {
    auto it = pos.find(e.partner);
    REQUIRE(it != pos.end());
    cplx brute = inner(basis.vectors[row_idx],
                       lambda_apply(g, basis.vectors[it->second]));
    dev = std::max(dev, std::abs(brute - e.value));
  }
  return dev;
}

}  // namespace

TEST_CASE("every row classifies into exactly one box") {
  PVVParams params = make_params(8, 2);
  for (TablePair t : {TablePair::T12, TablePair::T34}) {
    std::map<IndexPair, int, IndexPairLess> seen;
    for (int cls : all_classes())
      for (const IndexPair& p : enumerate_box(t, cls, params)) {
        CHECK(seen.count(p) == 0);
        seen[p] = cls;
        CHECK(classify_row(t, p, params.N, params.R).box == cls);
      }
    CHECK(seen.size() == build_F(params).size());
  }
}

TEST_CASE("header rows") {
  PVVParams params = make_params(8, 1);
  auto single = [&](TablePair t, int cls, long k, const char* x) {
    std::vector<IndexPair> rows = enumerate_box(t, cls, params);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].k == k);
    CHECK(rows[0].x == parse_word(x));
  };
  single(TablePair::T12, kHeaderRow1, 0, "e");
  single(TablePair::T12, kHeaderRow2, 0, "b");
  single(TablePair::T12, kHeaderRow3, 1, "e");
  single(TablePair::T34, kHeaderRow1, 0, "e");
  single(TablePair::T34, kHeaderRow2, 0, "B");
  single(TablePair::T34, kHeaderRow3, 7, "e");
}

TEST_CASE("predicted products match brute force on every row") {
  for (auto [N, R] : {std::pair<long, int>{8, 1}, {8, 2}}) {
    EtaBasis basis = build_eta_basis(make_params(N, R));
    for (std::size_t i = 0; i < basis.pairs.size(); ++i) {
      CHECK(row_deviation(TablePair::T12, basis, i) <= 1e-12);
      CHECK(row_deviation(TablePair::T34, basis, i) <= 1e-12);
    }
  }
}

TEST_CASE("box 20 carries the doubled s factor against the printed one") {
  PVVParams params = make_params(12, 1);
  std::vector<IndexPair> rows = enumerate_box(TablePair::T12, 20, params);
  REQUIRE(!rows.empty());
  for (const IndexPair& row : rows) {
    bool found = false;
    for (const PredictedEntry& e :
         predicted_products(TablePair::T12, row, params.N, params.R)) {
      if (e.partner.k != row.k - 1 || e.partner.x != row.x) continue;
      found = true;
      const double s = s_factor(row.k, params.N);
      CHECK(std::abs(e.value - cplx(2.0 * s, 0.0)) <= 1e-14);
      REQUIRE(e.has_printed);
      CHECK(std::abs(e.printed - cplx(s, 0.0)) <= 1e-14);
      CHECK(e.note != nullptr);
    }
    CHECK(found);
  }
}

TEST_CASE("polarization identity behind the twisted values") {
  // |iX+Y|^2 + |X+iY|^2 = 2|X|^2 + 2|Y|^2
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int t = 0; t < 1000; ++t) {
    cplx X(nd(rng), nd(rng)), Y(nd(rng), nd(rng));
    double lhs = std::norm(cplx(0, 1) * X + Y) + std::norm(X + cplx(0, 1) * Y);
    double rhs = 2.0 * std::norm(X) + 2.0 * std::norm(Y);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * (1.0 + rhs));
  }
}

TEST_CASE("W conjugation relabeling") {
  // involution, and the exact T_{a^-1}[i,j] = T_a[tau i, tau j] identity
  CHECK(conjugate_index({0, parse_word("b")}, 8) ==
        IndexPair{0, parse_word("B")});
  CHECK(conjugate_index({3, parse_word("bA")}, 8) ==
        IndexPair{5, parse_word("Ba")});
  for (long k : {0L, 1L, 5L})
    for (const char* x : {"e", "b", "Ba"}) {
      IndexPair p{k, parse_word(x)};
      CHECK(conjugate_index(conjugate_index(p, 8), 8) == p);
    }
  CHECK(conjugation_identity_dev(make_params(8, 1)) <= 1e-12);
  CHECK(conjugation_identity_dev(make_params(8, 2)) <= 1e-12);
}

TEST_CASE("audit at (32,1): clean corrected table, loud printed errata") {
  AuditReport r = audit(make_params(32, 1), TablePair::T12);
  CHECK(r.basis_size == 96);
  CHECK(r.max_abs_discrepancy <= 1e-10);
  CHECK(r.max_abs_discrepancy_printed >= 0.2);
  CHECK(r.missing_nonzero.empty());
  CHECK(r.coverage_gaps.empty());
  CHECK(r.color_violations.empty());
  CHECK(r.adjacency_ok);
  CHECK(!r.case_cover_ok);
  REQUIRE(r.case_cover_gaps.size() == 2);
  CHECK(r.case_cover_gaps[0] == IndexPair{0, parse_word("B")});
  CHECK(r.case_cover_gaps[1] == IndexPair{31, parse_word("e")});
  REQUIRE(!r.errata.empty());
  double worst = 0.0;
  for (const Erratum& e : r.errata) worst = std::max(worst, e.max_abs_deviation);
  CHECK(worst == doctest::Approx(r.max_abs_discrepancy_printed).epsilon(1e-12));

  std::set<int> nonempty;
  for (int b = 1; b <= 20; ++b)
    if (!enumerate_box(TablePair::T12, b, make_params(32, 1)).empty())
      nonempty.insert(b);
  CHECK(nonempty == fixtures::kNonempty32_1);
}

TEST_CASE("audit at (32,2): adjacency overshoot is reported, never hidden") {
  AuditReport r = audit(make_params(32, 2), TablePair::T12);
  CHECK(r.basis_size == 288);
  CHECK(r.max_abs_discrepancy <= 1e-10);
  CHECK(r.max_abs_discrepancy_printed >= 0.5);
  CHECK(r.missing_nonzero.empty());
  CHECK(r.coverage_gaps.empty());
  CHECK(r.color_violations.empty());
  CHECK(!r.adjacency_ok);
  std::set<std::pair<int, int>> extra(r.adjacency_extra.begin(),
                                      r.adjacency_extra.end());
  CHECK(extra == fixtures::kAdjacencyExtraR2);
  CHECK(r.adjacency_missing.empty());
  REQUIRE(r.case_cover_gaps.size() == 2);
  CHECK(r.case_cover_gaps[0] == IndexPair{0, parse_word("Ba")});
  CHECK(r.case_cover_gaps[1] == IndexPair{31, parse_word("b")});

  std::set<int> nonempty;
  for (int b = 1; b <= 20; ++b)
    if (!enumerate_box(TablePair::T12, b, make_params(32, 2)).empty())
      nonempty.insert(b);
  CHECK(nonempty == fixtures::kNonempty32_2);
}

TEST_CASE("tables 3-4 audit directly and via conjugation") {
  PVVParams params = make_params(8, 1);
  AuditReport direct = audit(params, TablePair::T34);
  AuditReport via = audit_t34_via_conjugation(params);
  CHECK(direct.max_abs_discrepancy <= 1e-12);
  CHECK(via.max_abs_discrepancy <= 1e-12);
  CHECK(direct.missing_nonzero.empty());
  CHECK(via.missing_nonzero.empty());
  CHECK(direct.coverage_gaps.empty());
  CHECK(via.coverage_gaps.empty());
  CHECK(direct.adjacency_ok == via.adjacency_ok);

  // entrywise: direct T34 predictions vs T12 predictions mapped through tau
  for (const IndexPair& row : build_F(params)) {
    std::map<IndexPair, cplx, IndexPairLess> d, v;
    for (const PredictedEntry& e :
         predicted_products(TablePair::T34, row, params.N, params.R))
      d[e.partner] = e.value;
    IndexPair crow = conjugate_index(row, params.N);
    for (const PredictedEntry& e :
         predicted_products(TablePair::T12, crow, params.N, params.R))
      v[conjugate_index(e.partner, params.N)] = e.value;
    REQUIRE(d.size() == v.size());
    for (const auto& [partner, value] : d) {
      REQUIRE(v.count(partner) == 1);
      CHECK(std::abs(value - v[partner]) <= 1e-12);
    }
  }
}

TEST_CASE("box 14 subcases") {
  CHECK(box14_subcase(parse_word("B")) == nullptr);
  CHECK(box14_subcase(parse_word("Ba")) == nullptr);
  CHECK(std::string(box14_subcase(parse_word("Bab"))) == "case1");
  CHECK(std::string(box14_subcase(parse_word("BaB"))) == "case2");
  CHECK(std::string(box14_subcase(parse_word("Baa"))) == "case3");
  CHECK(std::string(box14_subcase(parse_word("BA"))) == "case4a");
  CHECK(std::string(box14_subcase(parse_word("BB"))) == "case4b");
  CHECK(std::string(box14_subcase(parse_word("BBa"))) == "case4b");
  CHECK_THROWS_AS(box14_subcase(parse_word("a")), std::invalid_argument);
}

TEST_CASE("case cover: exact partition from R=3 on, known gaps below") {
  CaseCover big = case_cover(make_params(16, 3));
  CHECK(big.ok);
  CHECK(big.gaps.empty());
  CHECK(big.overlaps.empty());
  CHECK(big.stray.empty());

  CaseCover small = case_cover(make_params(8, 1));
  CHECK(!small.ok);
  REQUIRE(small.gaps.size() == 2);
  CHECK(small.gaps[0] == IndexPair{0, parse_word("B")});
  CHECK(small.gaps[1] == IndexPair{7, parse_word("e")});
  CHECK(small.overlaps.empty());
  CHECK(small.stray.empty());

  CaseCover mid = case_cover(make_params(8, 2));
  REQUIRE(mid.gaps.size() == 2);
  CHECK(mid.gaps[0] == IndexPair{0, parse_word("Ba")});
  CHECK(mid.gaps[1] == IndexPair{7, parse_word("b")});
}

TEST_CASE("printed adjacency sheet") {
  const auto& adj = printed_adjacency();
  CHECK(adj.size() == 8);
  CHECK(adj.count({1, 9}) == 1);
  CHECK(adj.count({11, 17}) == 1);
}

TEST_CASE("audit JSON carries the frozen field names in order") {
  AuditReport r = audit(make_params(12, 1), TablePair::T12);
  std::string js = audit_report_json(r);
  const char* keys[] = {"\"N\":",
                        "\"R\":",
                        "\"table\":",
                        "\"max_abs_discrepancy\":",
                        "\"missing_nonzero\":",
                        "\"coverage_gaps\":",
                        "\"case_cover_ok\":",
                        "\"adjacency_ok\":"};
  std::size_t at = 0;
  for (const char* k : keys) {
    std::size_t found = js.find(k);
    REQUIRE(found != std::string::npos);
    CHECK(found >= at);
    at = found;
  }
  CHECK(js.find("\"table\":12") != std::string::npos);
}

TEST_CASE("audit refuses colliding box conditions") {
  CHECK_THROWS_AS(audit(make_params(8, 3), TablePair::T12), std::invalid_argument);
}
