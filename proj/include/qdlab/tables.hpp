#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "qdlab/linops.hpp"
#include "qdlab/pvv.hpp"
#include "qdlab/words.hpp"

namespace qdlab {

// Tables 1-2 list the lambda_a inner products, tables 3-4 the lambda_{a^-1}
// ones. Each pair of sheets shares one classification of the basis rows.
enum class TablePair { T12, T34 };

// Row classes: the two printed header rows, the header-like row the sheets
// omit, and the twenty numbered boxes.
inline constexpr int kHeaderRow1 = 101;  // (0,e)
inline constexpr int kHeaderRow2 = 102;  // (0,b) resp. (0,b^-1)
inline constexpr int kHeaderRow3 = 103;  // (1,e) resp. (N-1,e), absent from the sheets

struct BoxClass {
  int box = 0;
  long l = 0;  // run-length parameter where the box has one, else 0
  Word y;      // residual suffix where the box has one, else e
};

// Color tags of tables 1-2 (S membership bookkeeping); tables 3-4 carry none.
enum class SlotColor { None, Red, Blue, Black };

struct PredictedEntry {
  IndexPair partner;
  cplx value;               // closed form as verified against brute force
  bool has_printed = false;
  cplx printed{};           // the typeset value, where it differs
  const char* note = nullptr;  // static description of the discrepancy
  SlotColor color = SlotColor::None;
};

// s(k,N) = (sqrt(k(k-1)) + sqrt((N-k)(N-k+1))) / (4N).
double s_factor(long k, long N);

// Signed length of the maximal leading run of gen_code / its inverse; 0 if
// the word starts with a different generator.
int lead_run(const Word& w, Letter gen_code);

// Total over F: every row lands in exactly one header or box.
BoxClass classify_row(TablePair t, const IndexPair& row, long N, int R);

// Partner list of a row with evaluated inner products <eta_row, lambda_g eta_partner>.
std::vector<PredictedEntry> predicted_products(TablePair t, const IndexPair& row,
                                               long N, int R);

// All rows of F falling in the given header/box.
std::vector<IndexPair> enumerate_box(TablePair t, int box, const PVVParams& params);

// W eta(k,x) = eta(N-k, beta(x)), with W eta(0,x) = eta(0, beta(x)).
IndexPair conjugate_index(const IndexPair& p, long N);

// <eta(k,x), lambda_{a^-1} eta(j,y)> = <eta at conjugate_index(k,x),
// lambda_a eta at conjugate_index(j,y)>; returns the mapped pair of indices.
std::pair<IndexPair, IndexPair> conjugation_identity(const IndexPair& row,
                                                     const IndexPair& col, long N);

// max |T_{a^-1}[i,j] - T_a[conj(i),conj(j)]| over all of F x F.
double conjugation_identity_dev(const PVVParams& params);

// Cross-reference numbers beneath the boxes of tables 1-2, symmetrized;
// box 14's list is the wildcard "*" and is excluded here.
const std::set<std::pair<int, int>>& printed_adjacency();

// Named sub-predicate of a box-14 word (the case split of the covering
// argument); nullptr on the two bare exceptional shapes b^-1 and b^-1 a.
const char* box14_subcase(const Word& x);

// Covering of F minus S by the eight case families; each covered pair
// records which cases claimed it.
struct CaseCover {
  std::map<IndexPair, std::vector<int>, IndexPairLess> covered;
  std::vector<IndexPair> gaps;      // in F minus S, claimed by no case
  std::vector<IndexPair> overlaps;  // claimed by more than one case
  std::vector<IndexPair> stray;     // claimed but not in F minus S
  bool ok = false;
};
CaseCover case_cover(const PVVParams& params);

struct MissingEntry {
  IndexPair row, col;
  cplx value;
};

struct Erratum {
  std::string note;
  long rows = 0;                  // number of affected entries
  double max_abs_deviation = 0;   // max |printed - brute force|
};

struct AuditReport {
  long N = 0;
  int R = 0;
  TablePair table = TablePair::T12;
  long basis_size = 0;
  double max_abs_discrepancy = 0.0;          // corrected values vs brute force
  double max_abs_discrepancy_printed = 0.0;  // typeset values vs brute force
  std::vector<MissingEntry> missing_nonzero;
  std::vector<IndexPair> coverage_gaps;
  std::vector<std::string> color_violations;
  std::set<std::pair<int, int>> adjacency;   // computed, boxes 1..20 minus 14
  bool adjacency_ok = false;
  std::vector<std::pair<int, int>> adjacency_extra;    // computed but not printed
  std::vector<std::pair<int, int>> adjacency_missing;  // printed (instantiated) but not computed
  bool case_cover_ok = false;
  std::vector<IndexPair> case_cover_gaps;
  std::vector<Erratum> errata;
};

// Brute-force audit of one table pair. Requires N >= 2R+4 so the box
// conditions do not collide.
AuditReport audit(const PVVParams& params, TablePair table);

// Same report for tables 3-4 with predictions routed through tables 1-2 and
// the conjugation relabeling instead of the direct encoding.
AuditReport audit_t34_via_conjugation(const PVVParams& params);

std::string audit_report_json(const AuditReport& r);

}  // namespace qdlab
