#include "qdlab/tables.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>
#include <utility>

#include "qdlab/json_writer.hpp"

namespace qdlab {
namespace {

const cplx kCoefA = kTwistA;                       // (1+i)/2
const cplx kCoefB = kTwistB;                       // (1-i)/2
const double kAbs2A = std::norm(kTwistA);          // 1/2
const double kAbs2B = std::norm(kTwistB);          // 1/2
const cplx kABbar = kTwistA * std::conj(kTwistB);  // i/2
const cplx kAbarB = std::conj(kTwistA) * kTwistB;  // -i/2

// Guard tiny negatives from float cancellation.
double sq(double t) { return std::sqrt(std::max(t, 0.0)); }

Word ap(long k) { return gen_pow(1, k); }
Word bp(long k) { return gen_pow(2, k); }
Word cat(const Word& x, const Word& y) { return multiply(x, y); }
Word tail(const Word& x, long m) { return Word(x.begin() + m, x.end()); }

// Sheet discrepancies surfaced by the audit. The notes are keyed per site so
// reports aggregate them with row counts and deviations.
const char* const kNoteT12Row3 =
    "row (1,e) is absent from the printed tables 1-2; its partners are "
    "reconstructed from brute force";
const char* const kNoteT34Row3 =
    "row (N-1,e) is absent from the printed tables 3-4; its partners are "
    "reconstructed from brute force";
const char* const kNoteT34Header2 =
    "header row (0,b^-1) of tables 3-4: printed B conj(A) for the third "
    "partner, brute force gives A conj(B)";
const char* const kNoteBox34 =
    "boxes 3-4, run-length partner: printed sqrt((N-l)/N) |B|^2, brute force "
    "gives sqrt(l/N) |B|^2";
const char* const kNoteBox56 =
    "boxes 5-6, shortened-run partner: printed sqrt((N-l-1)/N) conj(A) B, "
    "brute force gives sqrt((N-l+1)/N) conj(A) B";
const char* const kNoteBox910 =
    "boxes 9-10, third partner: printed sqrt((N-1)/N) conj(A) B resp. "
    "sqrt((N-1)/N) A conj(B), brute force gives ((N-1)/N) conj(A) B";
const char* const kNoteBox1213 =
    "boxes 12-13, third partner: printed sqrt((N-1)/N) conj(A) B, brute "
    "force gives ((N-1)/N) conj(A) B";
const char* const kNoteBox1520 =
    "boxes 15-20, lowered-index partner: printed s(k,N), brute force gives "
    "2 s(k,N)";

BoxClass classify_t12(long k, const Word& x, long N, int R) {
  const long n = static_cast<long>(x.size());
  if (k == 0 && x.empty()) return {kHeaderRow1, 0, {}};
  if (k == 0 && x == Word{2}) return {kHeaderRow2, 0, {}};
  if (k == 1 && x.empty()) return {kHeaderRow3, 0, {}};
  if (k == 0) {
    const int t = lead_run(x, 2);
    if (t == 1) {
      const Word rest = tail(x, 1);
      const int u = lead_run(rest, 0);
      if (u == 0) throw std::logic_error("table row not of the form b a^u ...");
      const Word y = tail(rest, std::abs(u));
      if (u >= 1) return {n <= R - 1 ? 1 : 2, u, y};
      return {n <= R - 1 ? 3 : 4, N + u, y};  // l = N - m for the run a^-m
    }
    if (t >= 2) return {n <= R - 1 ? 5 : 6, t, tail(x, t)};
    if (t >= 0) throw std::logic_error("table row outside W_b and W_{b^-1}");
    const long m = -t;
    return {n <= R - 1 ? 7 : 8, N - m, tail(x, m)};
  }
  if (k == 1) {
    const int t = lead_run(x, 2);
    if (t == 0) throw std::logic_error("table row outside W_b and W_{b^-1}");
    if (t >= 1) {
      const int box = n <= R - 2 ? 9 : (n == R - 1 ? 10 : 11);
      return {box, t, tail(x, t)};
    }
    const long m = -t;
    const int box = n <= R - 2 ? 12 : (n == R - 1 ? 13 : 14);
    return {box, N - m, tail(x, m)};
  }
  if (k + n <= R - 1) return {15, 0, {}};
  if (k + n == R) return {16, 0, {}};
  if (k + n == R + 1) return {17, 0, {}};
  if ((N - k) + n <= R - 1) return {18, 0, {}};
  if ((N - k) + n == R) return {19, 0, {}};
  return {20, 0, {}};
}

BoxClass classify_t34(long k, const Word& x, long N, int R) {
  const long n = static_cast<long>(x.size());
  if (k == 0 && x.empty()) return {kHeaderRow1, 0, {}};
  if (k == 0 && x == Word{3}) return {kHeaderRow2, 0, {}};
  if (k == N - 1 && x.empty()) return {kHeaderRow3, 0, {}};
  if (k == 0) {
    const int t = lead_run(x, 2);
    if (t == -1) {
      const Word rest = tail(x, 1);
      const int u = lead_run(rest, 0);
      if (u == 0) throw std::logic_error("table row not of the form b^-1 a^u ...");
      const Word y = tail(rest, std::abs(u));
      if (u <= -1) return {n <= R - 1 ? 1 : 2, -u, y};  // x = b^-1 a^-l y
      return {n <= R - 1 ? 3 : 4, N - u, y};            // x = b^-1 a^(N-l) y
    }
    if (t <= -2) return {n <= R - 1 ? 5 : 6, -t, tail(x, -t)};  // x = b^-l y
    if (t <= 0) throw std::logic_error("table row outside W_b and W_{b^-1}");
    return {n <= R - 1 ? 7 : 8, N - t, tail(x, t)};  // x = b^(N-l) y
  }
  if (k == N - 1) {
    const int t = lead_run(x, 2);
    if (t == 0) throw std::logic_error("table row outside W_b and W_{b^-1}");
    if (t <= -1) {
      const int box = n <= R - 2 ? 9 : (n == R - 1 ? 10 : 11);
      return {box, -t, tail(x, -t)};
    }
    const int box = n <= R - 2 ? 12 : (n == R - 1 ? 13 : 14);
    return {box, N - t, tail(x, t)};
  }
  // Rows eta(N-kk, x); band conditions run over kk = N - k.
  const long kk = N - k;
  if (kk + n <= R - 1) return {15, 0, {}};
  if (kk + n == R) return {16, 0, {}};
  if (kk + n == R + 1) return {17, 0, {}};
  if ((N - kk) + n <= R - 1) return {18, 0, {}};
  if ((N - kk) + n == R) return {19, 0, {}};
  return {20, 0, {}};
}

struct EntryBuilder {
  std::vector<PredictedEntry> out;
  void add(long j, Word yy, cplx v, SlotColor col = SlotColor::None) {
    out.push_back({{j, std::move(yy)}, v, false, {}, nullptr, col});
  }
  void add_printed(long j, Word yy, cplx v, cplx printed, const char* note,
                   SlotColor col = SlotColor::None) {
    out.push_back({{j, std::move(yy)}, v, true, printed, note, col});
  }
  void add_noted(long j, Word yy, cplx v, const char* note,
                 SlotColor col = SlotColor::None) {
    out.push_back({{j, std::move(yy)}, v, false, {}, note, col});
  }
};

std::vector<PredictedEntry> partners_t12(const BoxClass& c, long k, const Word& x,
                                         long N, int R) {
  const int box = c.box;
  const long l = c.l;
  const Word& y = c.y;
  const double cN1 = sq(double(N - 1) / N);
  EntryBuilder b;
  if (box == kHeaderRow1) {
    b.add(N - 1, {}, cN1 * std::conj(kCoefA), SlotColor::Blue);
    b.add(0, Word{3}, std::conj(kCoefB), SlotColor::Blue);
  } else if (box == kHeaderRow2) {
    b.add(N - 1, Word{2}, cN1 * kAbs2A, SlotColor::Blue);
    b.add(0, {}, kCoefB, SlotColor::Red);
    if (R >= 2) b.add(0, Word{3, 0}, kABbar, SlotColor::Blue);
  } else if (box == kHeaderRow3) {
    b.add_noted(0, {}, cN1 * kCoefA, kNoteT12Row3, SlotColor::Red);
    if (R >= 2) b.add_noted(0, Word{3, 0}, cN1 * kAbs2B, kNoteT12Row3, SlotColor::Blue);
    b.add_noted(N - 1, Word{2}, (double(N - 1) / N) * kAbarB, kNoteT12Row3,
                SlotColor::Blue);
  } else if (box == 1 || box == 2) {
    const Word ax = alpha(x);
    if (box == 1) b.add(0, cat(Word{3}, ax), kABbar, SlotColor::Blue);
    b.add(N - 1, x, kAbs2A * cN1, box == 1 ? SlotColor::Blue : SlotColor::Black);
    b.add(0, cat(Word{1}, ax), kAbarB, SlotColor::Red);
    b.add(l, y, sq(double(N - l) / N) * kAbs2B, SlotColor::Red);
  } else if (box == 3 || box == 4) {
    const Word ax = alpha(x);
    if (box == 3) b.add(0, cat(Word{3}, ax), kABbar, SlotColor::Blue);
    b.add(N - 1, x, kAbs2A * cN1, box == 3 ? SlotColor::Blue : SlotColor::Black);
    b.add(0, cat(Word{1}, ax), kAbarB, SlotColor::Red);
    b.add_printed(l, y, sq(double(l) / N) * kAbs2B, sq(double(N - l) / N) * kAbs2B,
                  kNoteBox34, SlotColor::Red);
  } else if (box == 5 || box == 6) {
    const Word ay = alpha(y);
    if (box == 5) b.add(0, cat(Word{3}, cat(ap(l), ay)), kABbar, SlotColor::Blue);
    b.add(N - 1, x, cN1 * kAbs2A, box == 5 ? SlotColor::Blue : SlotColor::Black);
    b.add(0, cat(bp(l - 1), y), kAbs2B, SlotColor::Red);
    b.add_printed(l - 1, ay, sq(double(N - l + 1) / N) * kAbarB,
                  sq(double(N - l - 1) / N) * kAbarB, kNoteBox56, SlotColor::Red);
  } else if (box == 7 || box == 8) {
    const Word ay = alpha(y);
    if (box == 7) b.add(0, cat(Word{3}, cat(ap(l - N), ay)), kABbar, SlotColor::Blue);
    b.add(N - 1, x, cN1 * kAbs2A, box == 7 ? SlotColor::Blue : SlotColor::Black);
    if (box == 7) b.add(0, cat(bp(l - N - 1), y), kAbs2B, SlotColor::Blue);
    b.add(l - 1, ay, sq(double(l - 1) / N) * kAbarB,
          box == 7 ? SlotColor::Blue : SlotColor::Black);
  } else if (box >= 9 && box <= 11) {
    const Word ay = alpha(y);
    const SlotColor colo = box == 11 ? SlotColor::Black : SlotColor::Red;
    b.add(0, x, cN1 * kAbs2A, colo);
    b.add(l, ay, sq(double((N - 1) * (N - l)) / double(N * N)) * kABbar, colo);
    if (box == 9 || box == 10) {
      const cplx printed = cN1 * (box == 9 ? kAbarB : kABbar);
      b.add_printed(N - 1, cat(Word{2}, alpha(x)), (double(N - 1) / N) * kAbarB,
                    printed, kNoteBox910,
                    box == 9 ? SlotColor::Blue : SlotColor::Black);
    }
    if (box == 9) b.add(0, cat(Word{3, 0}, x), cN1 * kAbs2B, SlotColor::Blue);
  } else if (box >= 12 && box <= 14) {
    const Word ay = alpha(y);
    const SlotColor colo = box == 14 ? SlotColor::Black : SlotColor::Red;
    b.add(0, x, cN1 * kAbs2A, colo);
    b.add(l, ay, sq(double((N - 1) * l) / double(N * N)) * kABbar, colo);
    if (box == 12 || box == 13) {
      b.add_printed(N - 1, cat(Word{2}, alpha(x)), (double(N - 1) / N) * kAbarB,
                    cN1 * kAbarB, kNoteBox1213,
                    box == 12 ? SlotColor::Blue : SlotColor::Black);
    }
    if (box == 12) b.add(0, cat(Word{3, 0}, x), cN1 * kAbs2B, SlotColor::Blue);
  } else if (box >= 15 && box <= 17) {
    const Word ax = alpha(x);
    const SlotColor colo = box == 17 ? SlotColor::Black : SlotColor::Red;
    b.add_printed(k - 1, x, 2 * s_factor(k, N), s_factor(k, N), kNoteBox1520, colo);
    b.add(0, cat(bp(k - 1), ax), sq(double(N - k) / N) * kABbar, colo);
    if (box == 15) {
      b.add(0, cat(Word{3}, cat(ap(k), x)), sq(double(N - k) / N) * kAbs2B,
            SlotColor::Blue);
    }
    if (box == 15 || box == 16) {
      b.add(N - 1, cat(bp(k), ax),
            sq(double((N - 1) * (N - k)) / double(N * N)) * kAbarB,
            box == 15 ? SlotColor::Blue : SlotColor::Black);
    }
  } else if (box == 18 || box == 19) {
    const Word ax = alpha(x);
    const SlotColor colo = box == 18 ? SlotColor::Blue : SlotColor::Black;
    b.add_printed(k - 1, x, 2 * s_factor(k, N), s_factor(k, N), kNoteBox1520, colo);
    if (box == 18) {
      b.add(0, cat(bp(k - N - 1), ax), sq(double(k) / N) * kABbar, SlotColor::Blue);
      b.add(0, cat(Word{3}, cat(ap(k - N), x)), sq(double(k) / N) * kAbs2B,
            SlotColor::Blue);
    }
    b.add(N - 1, cat(bp(k - N), ax),
          sq(double((N - 1) * k) / double(N * N)) * kAbarB, colo);
  } else if (box == 20) {
    b.add_printed(k - 1, x, 2 * s_factor(k, N), s_factor(k, N), kNoteBox1520,
                  SlotColor::Black);
  } else {
    throw std::logic_error("unknown box id");
  }
  return std::move(b.out);
}

std::vector<PredictedEntry> partners_t34(const BoxClass& c, long k, const Word& x,
                                         long N, int R) {
  const int box = c.box;
  const long l = c.l;
  const Word& y = c.y;
  const double cN1 = sq(double(N - 1) / N);
  EntryBuilder b;
  if (box == kHeaderRow1) {
    b.add(1, {}, cN1 * std::conj(kCoefA));
    b.add(0, Word{2}, std::conj(kCoefB));
  } else if (box == kHeaderRow2) {
    b.add(1, Word{3}, cN1 * kAbs2A);
    b.add(0, {}, kCoefB);
    if (R >= 2) b.add_printed(0, Word{2, 1}, kABbar, kAbarB, kNoteT34Header2);
  } else if (box == kHeaderRow3) {
    b.add_noted(0, {}, cN1 * kCoefA, kNoteT34Row3);
    if (R >= 2) b.add_noted(0, Word{2, 1}, cN1 * kAbs2B, kNoteT34Row3);
    b.add_noted(1, Word{3}, (double(N - 1) / N) * kAbarB, kNoteT34Row3);
  } else if (box == 1 || box == 2) {
    const Word ax = alpha(x);
    if (box == 1) b.add(0, cat(Word{2}, ax), kABbar);
    b.add(1, x, kAbs2A * cN1);
    b.add(0, cat(Word{0}, ax), kAbarB);
    b.add(N - l, y, sq(double(N - l) / N) * kAbs2B);
  } else if (box == 3 || box == 4) {
    const Word ax = alpha(x);
    if (box == 3) b.add(0, cat(Word{2}, ax), kABbar);
    b.add(1, x, kAbs2A * cN1);
    b.add(0, cat(Word{0}, ax), kAbarB);
    b.add_printed(N - l, y, sq(double(l) / N) * kAbs2B,
                  sq(double(N - l) / N) * kAbs2B, kNoteBox34);
  } else if (box == 5 || box == 6) {
    const Word ay = alpha(y);
    if (box == 5) b.add(0, cat(Word{2}, alpha(x)), kABbar);
    b.add(1, x, cN1 * kAbs2A);
    b.add(0, cat(Word{2}, x), kAbs2B);
    b.add_printed(N - l + 1, ay, sq(double(N - l + 1) / N) * kAbarB,
                  sq(double(N - l - 1) / N) * kAbarB, kNoteBox56);
  } else if (box == 7 || box == 8) {
    const Word ay = alpha(y);
    if (box == 7) b.add(0, cat(Word{2}, alpha(x)), kABbar);
    b.add(1, x, cN1 * kAbs2A);
    if (box == 7) b.add(0, cat(Word{2}, x), kAbs2B);
    b.add(N - l + 1, ay, sq(double(l - 1) / N) * kAbarB);
  } else if (box >= 9 && box <= 11) {
    const Word ay = alpha(y);
    b.add(0, x, cN1 * kAbs2A);
    b.add(N - l, ay, sq(double((N - 1) * (N - l)) / double(N * N)) * kABbar);
    if (box == 9 || box == 10) {
      const cplx printed = cN1 * (box == 9 ? kAbarB : kABbar);
      b.add_printed(1, cat(Word{3}, alpha(x)), (double(N - 1) / N) * kAbarB,
                    printed, kNoteBox910);
    }
    if (box == 9) b.add(0, cat(Word{2, 1}, x), cN1 * kAbs2B);
  } else if (box >= 12 && box <= 14) {
    const Word ay = alpha(y);
    b.add(0, x, cN1 * kAbs2A);
    b.add(N - l, ay, sq(double((N - 1) * l) / double(N * N)) * kABbar);
    if (box == 12 || box == 13) {
      b.add_printed(1, cat(Word{3}, alpha(x)), (double(N - 1) / N) * kAbarB,
                    cN1 * kAbarB, kNoteBox1213);
    }
    if (box == 12) b.add(0, cat(Word{2, 1}, x), cN1 * kAbs2B);
  } else if (box >= 15 && box <= 17) {
    const long kk = N - k;
    const Word ax = alpha(x);
    b.add_printed(N - kk + 1, x, 2 * s_factor(kk, N), s_factor(kk, N), kNoteBox1520);
    b.add(0, cat(bp(1 - kk), ax), sq(double(N - kk) / N) * kABbar);
    if (box == 15) {
      b.add(0, cat(Word{2}, cat(ap(-kk), x)), sq(double(N - kk) / N) * kAbs2B);
    }
    if (box == 15 || box == 16) {
      b.add(1, cat(bp(-kk), ax),
            sq(double((N - 1) * (N - kk)) / double(N * N)) * kAbarB);
    }
  } else if (box == 18 || box == 19) {
    const long kk = N - k;
    const Word ax = alpha(x);
    b.add_printed(N - kk + 1, x, 2 * s_factor(kk, N), s_factor(kk, N), kNoteBox1520);
    if (box == 18) {
      b.add(0, cat(bp(N - kk + 1), ax), sq(double(kk) / N) * kABbar);
      b.add(0, cat(Word{2}, cat(ap(N - kk), x)), sq(double(kk) / N) * kAbs2B);
    }
    b.add(1, cat(bp(N - kk), ax),
          sq(double((N - 1) * kk) / double(N * N)) * kAbarB);
  } else if (box == 20) {
    const long kk = N - k;
    b.add_printed(N - kk + 1, x, 2 * s_factor(kk, N), s_factor(kk, N), kNoteBox1520);
  } else {
    throw std::logic_error("unknown box id");
  }
  return std::move(b.out);
}

// Expected S membership of blue-tagged partners (tables 1-2): blue marks the
// partners whose membership flips with the extremal length, so the predicate
// depends on the classified row, not the partner.
bool blue_in_s_expected(int box, long k, const Word& x, long N, int R) {
  const long n = static_cast<long>(x.size());
  switch (box) {
    case kHeaderRow1:
      return R >= 2;
    case kHeaderRow2:
    case kHeaderRow3:
      return R >= 3;
    case 1:
    case 3:
    case 5:
    case 7:
      return n <= R - 2;
    case 9:
    case 12:
      return n <= R - 3;
    case 15:
      return k + n <= R - 2;
    case 18:
      return (N - k) + n <= R - 2;
    default:
      throw std::logic_error("blue tag outside the expected boxes");
  }
}

std::string pair_text(const IndexPair& p) {
  return "(" + std::to_string(p.k) + "," + word_text(p.x) + ")";
}

std::vector<Word> words_exact(int L, std::vector<Letter> first_codes, int R) {
  std::vector<Word> out;
  if (L == 0) {
    out.emplace_back();
    return out;
  }
  for (const Word& w : ball(R, 2)) {
    if (static_cast<int>(w.size()) != L) continue;
    if (std::find(first_codes.begin(), first_codes.end(), w[0]) != first_codes.end())
      out.push_back(w);
  }
  return out;
}

AuditReport audit_impl(const PVVParams& params, TablePair table, bool via_conjugation) {
  const long N = params.N;
  const int R = params.R;
  if (N < 2L * R + 4) throw std::invalid_argument("audit requires N >= 2R+4");

  AuditReport rep;
  rep.N = N;
  rep.R = R;
  rep.table = table;

  const EtaBasis basis = build_eta_basis(params);
  const auto& F = basis.pairs;
  const long n = static_cast<long>(F.size());
  rep.basis_size = n;
  std::map<IndexPair, long, IndexPairLess> idx;
  for (long i = 0; i < n; ++i) idx.emplace(F[i], i);

  const Word g = table == TablePair::T12 ? Word{0} : Word{1};
  const Eigen::MatrixXcd T = t_matrix(basis, g);

  std::vector<int> rowbox(n, 0);
  std::set<int> nonempty;
  std::map<std::pair<long, long>, cplx> pred, pred_printed;
  std::map<const char*, Erratum> errata;

  for (long i = 0; i < n; ++i) {
    const IndexPair& row = F[i];
    std::vector<PredictedEntry> entries;
    int box = 0;
    try {
      if (via_conjugation) {
        const IndexPair rc = conjugate_index(row, N);
        const BoxClass c = classify_t12(rc.k, rc.x, N, R);
        box = c.box;
        for (auto& e : partners_t12(c, rc.k, rc.x, N, R)) {
          PredictedEntry m;
          m.partner = conjugate_index(e.partner, N);
          m.value = e.value;  // sheet-specific printed values and colors do not transport
          entries.push_back(std::move(m));
        }
      } else {
        const BoxClass c = classify_row(table, row, N, R);
        box = c.box;
        entries = table == TablePair::T12 ? partners_t12(c, row.k, row.x, N, R)
                                          : partners_t34(c, row.k, row.x, N, R);
      }
    } catch (const std::logic_error&) {
      rep.coverage_gaps.push_back(row);
      continue;
    }
    rowbox[i] = box;
    if (box >= 1 && box <= 20) nonempty.insert(box);

    std::set<long> seen;
    for (const PredictedEntry& e : entries) {
      const auto it = idx.find(e.partner);
      if (it == idx.end())
        throw std::logic_error("predicted partner outside the basis: " +
                               pair_text(e.partner));
      const long j = it->second;
      if (!seen.insert(j).second)
        throw std::logic_error("partner predicted twice: " + pair_text(e.partner));
      pred[{i, j}] = e.value;
      pred_printed[{i, j}] = e.has_printed ? e.printed : e.value;
      if (e.note) {
        Erratum& er = errata[e.note];
        if (er.note.empty()) er.note = e.note;
        er.rows += 1;
        if (e.has_printed) {
          er.max_abs_deviation =
              std::max(er.max_abs_deviation, std::abs(e.printed - T(i, j)));
        }
      }
      if (table == TablePair::T12 && !via_conjugation && e.color != SlotColor::None) {
        const bool in_s = in_s_set(e.partner, params);
        bool ok = true;
        std::string why;
        if (e.color == SlotColor::Red && !in_s) {
          ok = false;
          why = "red partner outside S";
        } else if (e.color == SlotColor::Black && in_s) {
          ok = false;
          why = "black partner inside S";
        } else if (e.color == SlotColor::Blue &&
                   in_s != blue_in_s_expected(box, row.k, row.x, N, R)) {
          ok = false;
          why = "blue partner disagrees with the extremal-length predicate";
        }
        if (!ok) {
          rep.color_violations.push_back("box " + std::to_string(box) + " row " +
                                         pair_text(row) + " partner " +
                                         pair_text(e.partner) + ": " + why);
        }
      }
    }
  }

  const double nz_tol = 1e-12;
  for (long i = 0; i < n; ++i) {
    for (long j = 0; j < n; ++j) {
      const auto it = pred.find({i, j});
      if (it != pred.end()) {
        rep.max_abs_discrepancy =
            std::max(rep.max_abs_discrepancy, std::abs(T(i, j) - it->second));
        rep.max_abs_discrepancy_printed = std::max(
            rep.max_abs_discrepancy_printed, std::abs(T(i, j) - pred_printed[{i, j}]));
      } else if (std::abs(T(i, j)) > nz_tol) {
        rep.missing_nonzero.push_back({F[i], F[j], T(i, j)});
      }
    }
  }

  // Boxes sharing a nonzero column are adjacent; box 14 is excluded because
  // its printed list is the wildcard.
  for (long j = 0; j < n; ++j) {
    std::vector<int> bs;
    for (long i = 0; i < n; ++i) {
      if (rowbox[i] >= 1 && rowbox[i] <= 20 && std::abs(T(i, j)) > nz_tol)
        bs.push_back(rowbox[i]);
    }
    std::sort(bs.begin(), bs.end());
    bs.erase(std::unique(bs.begin(), bs.end()), bs.end());
    for (std::size_t p = 0; p < bs.size(); ++p) {
      for (std::size_t q = p + 1; q < bs.size(); ++q) {
        if (bs[p] != 14 && bs[q] != 14) rep.adjacency.insert({bs[p], bs[q]});
      }
    }
  }
  std::set<std::pair<int, int>> instantiated;
  for (const auto& pr : printed_adjacency()) {
    if (nonempty.count(pr.first) && nonempty.count(pr.second))
      instantiated.insert(pr);
  }
  for (const auto& pr : rep.adjacency) {
    if (!instantiated.count(pr)) rep.adjacency_extra.push_back(pr);
  }
  for (const auto& pr : instantiated) {
    if (!rep.adjacency.count(pr)) rep.adjacency_missing.push_back(pr);
  }
  rep.adjacency_ok = rep.adjacency_extra.empty() && rep.adjacency_missing.empty();

  const CaseCover cc = case_cover(params);
  rep.case_cover_ok = cc.ok;
  rep.case_cover_gaps = cc.gaps;

  for (const auto& kv : errata) rep.errata.push_back(kv.second);
  std::sort(rep.errata.begin(), rep.errata.end(),
            [](const Erratum& a, const Erratum& b) { return a.note < b.note; });
  return rep;
}

}  // namespace

double s_factor(long k, long N) {
  return (sq(double(k) * double(k - 1)) + sq(double(N - k) * double(N - k + 1))) /
         (4.0 * double(N));
}

int lead_run(const Word& w, Letter gen_code) {
  if (w.empty()) return 0;
  if (w[0] == gen_code) {
    int t = 0;
    while (t < static_cast<int>(w.size()) && w[t] == gen_code) ++t;
    return t;
  }
  if (w[0] == inv_letter(gen_code)) {
    int t = 0;
    while (t < static_cast<int>(w.size()) && w[t] == inv_letter(gen_code)) ++t;
    return -t;
  }
  return 0;
}

BoxClass classify_row(TablePair t, const IndexPair& row, long N, int R) {
  return t == TablePair::T12 ? classify_t12(row.k, row.x, N, R)
                             : classify_t34(row.k, row.x, N, R);
}

std::vector<PredictedEntry> predicted_products(TablePair t, const IndexPair& row,
                                               long N, int R) {
  const BoxClass c = classify_row(t, row, N, R);
  return t == TablePair::T12 ? partners_t12(c, row.k, row.x, N, R)
                             : partners_t34(c, row.k, row.x, N, R);
}

std::vector<IndexPair> enumerate_box(TablePair t, int box, const PVVParams& params) {
  std::vector<IndexPair> out;
  for (const IndexPair& row : build_F(params)) {
    if (classify_row(t, row, params.N, params.R).box == box) out.push_back(row);
  }
  return out;
}

IndexPair conjugate_index(const IndexPair& p, long N) {
  if (p.k == 0) return {0, beta(p.x)};
  return {N - p.k, beta(p.x)};
}

std::pair<IndexPair, IndexPair> conjugation_identity(const IndexPair& row,
                                                     const IndexPair& col, long N) {
  return {conjugate_index(row, N), conjugate_index(col, N)};
}

double conjugation_identity_dev(const PVVParams& params) {
  const EtaBasis basis = build_eta_basis(params);
  const auto& F = basis.pairs;
  const long n = static_cast<long>(F.size());
  std::map<IndexPair, long, IndexPairLess> idx;
  for (long i = 0; i < n; ++i) idx.emplace(F[i], i);
  const Eigen::MatrixXcd Ta = t_matrix(basis, Word{0});
  const Eigen::MatrixXcd Tai = t_matrix(basis, Word{1});
  double dev = 0.0;
  for (long i = 0; i < n; ++i) {
    const long ti = idx.at(conjugate_index(F[i], params.N));
    for (long j = 0; j < n; ++j) {
      const long tj = idx.at(conjugate_index(F[j], params.N));
      dev = std::max(dev, std::abs(Tai(i, j) - Ta(ti, tj)));
    }
  }
  return dev;
}

const std::set<std::pair<int, int>>& printed_adjacency() {
  static const std::set<std::pair<int, int>> adj = {
      {1, 9}, {2, 10}, {3, 12}, {4, 13}, {5, 15}, {7, 18}, {8, 19}, {11, 17}};
  return adj;
}

const char* box14_subcase(const Word& x) {
  if (x.empty() || x[0] != 3)
    throw std::invalid_argument("box 14 words start with b^-1");
  if (x.size() >= 2 && x[1] == 0) {
    if (x.size() >= 3 && x[2] == 2) return "case1";  // b^-1 a y, y in W_b
    if (x.size() >= 3 && x[2] == 3) return "case2";  // b^-1 a y, y in W_{b^-1}
    if (x.size() >= 3 && x[2] == 0) return "case3";  // b^-1 y, y in W_{a^2}
    return nullptr;                                  // bare b^-1 a
  }
  if (x.size() >= 2 && x[1] == 1) return "case4a";  // b^-1 a^-k y
  return x.size() >= 2 ? "case4b" : nullptr;        // b^-m y with m >= 2
}

CaseCover case_cover(const PVVParams& params) {
  const long N = params.N;
  const int R = params.R;
  CaseCover cc;
  auto add = [&cc](int cs, IndexPair p) { cc.covered[std::move(p)].push_back(cs); };

  const std::vector<IndexPair> F = build_F(params);
  // Cases 1-3: rows (0,x) of boxes 1/3/5 at the extremal length |x| = R-1.
  for (const IndexPair& p : F) {
    if (p.k != 0 || static_cast<int>(p.x.size()) != R - 1 || p.x.empty()) continue;
    const int box = classify_t12(p.k, p.x, N, R).box;
    const int cs = box == 1 ? 1 : (box == 3 ? 2 : (box == 5 ? 3 : 0));
    if (cs == 0) continue;
    add(cs, {0, cat(Word{3}, alpha(p.x))});
    add(cs, {N - 1, p.x});
  }
  // Case 4: boxes 7 rows b^-(N-l) y at extremal combined length.
  for (long l = N - R + 1; l <= N - 1; ++l) {
    const int L = R - 1 - static_cast<int>(N - l);
    if (L < 0) continue;
    for (const Word& y : words_exact(L, {0, 1}, R)) {
      const Word ay = alpha(y);
      add(4, {0, cat(Word{3}, cat(ap(l - N), ay))});
      add(4, {N - 1, cat(bp(l - N), y)});
      add(4, {0, cat(bp(l - N - 1), y)});
      add(4, {l - 1, ay});
    }
  }
  // Case 5: one length beyond case 4.
  for (long l = N - R; l <= N - 1; ++l) {
    const int L = R - static_cast<int>(N - l);
    if (L < 0) continue;
    for (const Word& y : words_exact(L, {0, 1}, R)) {
      add(5, {N - 1, cat(bp(l - N), y)});
      add(5, {l - 1, alpha(y)});
    }
  }
  // Case 6: positive b-runs at combined length R.
  for (int l = 1; l <= R; ++l) {
    for (const Word& y : words_exact(R - l, {0, 1}, R)) {
      add(6, {0, cat(bp(l), y)});
      add(6, {static_cast<long>(l), alpha(y)});
    }
  }
  // Case 7: rows (N-1, x), x in W_b of full length R.
  for (const Word& x : words_exact(R, {2}, R)) add(7, {N - 1, x});
  // Case 8: lowered index below every box-20 row.
  for (const IndexPair& p : F) {
    if (p.k >= 2 && classify_t12(p.k, p.x, N, R).box == 20) add(8, {p.k - 1, p.x});
  }

  std::set<IndexPair, IndexPairLess> fms;
  for (const IndexPair& p : F) {
    if (!in_s_set(p, params)) fms.insert(p);
  }
  for (const IndexPair& p : fms) {
    if (!cc.covered.count(p)) cc.gaps.push_back(p);
  }
  for (const auto& kv : cc.covered) {
    if (kv.second.size() > 1) cc.overlaps.push_back(kv.first);
    if (!fms.count(kv.first)) cc.stray.push_back(kv.first);
  }
  cc.ok = cc.gaps.empty() && cc.overlaps.empty() && cc.stray.empty();
  return cc;
}

AuditReport audit(const PVVParams& params, TablePair table) {
  return audit_impl(params, table, false);
}

AuditReport audit_t34_via_conjugation(const PVVParams& params) {
  return audit_impl(params, TablePair::T34, true);
}

std::string audit_report_json(const AuditReport& r) {
  JsonWriter w;
  w.begin_object();
  w.key("N");
  w.value(r.N);
  w.key("R");
  w.value(r.R);
  w.key("table");
  w.value(r.table == TablePair::T12 ? 12 : 34);
  w.key("max_abs_discrepancy");
  w.value(r.max_abs_discrepancy);
  w.key("missing_nonzero");
  w.begin_array();
  for (const MissingEntry& m : r.missing_nonzero) {
    w.begin_object();
    w.key("row_k");
    w.value(m.row.k);
    w.key("row_x");
    w.value(word_text(m.row.x));
    w.key("col_k");
    w.value(m.col.k);
    w.key("col_x");
    w.value(word_text(m.col.x));
    w.key("re");
    w.value(m.value.real());
    w.key("im");
    w.value(m.value.imag());
    w.end_object();
  }
  w.end_array();
  w.key("coverage_gaps");
  w.begin_array();
  for (const IndexPair& p : r.coverage_gaps) {
    w.begin_object();
    w.key("k");
    w.value(p.k);
    w.key("x");
    w.value(word_text(p.x));
    w.end_object();
  }
  w.end_array();
  w.key("case_cover_ok");
  w.value(r.case_cover_ok);
  w.key("adjacency_ok");
  w.value(r.adjacency_ok);
  w.key("basis_size");
  w.value(r.basis_size);
  w.key("max_abs_discrepancy_printed");
  w.value(r.max_abs_discrepancy_printed);
  w.key("errata");
  w.begin_array();
  for (const Erratum& e : r.errata) {
    w.begin_object();
    w.key("note");
    w.value(e.note);
    w.key("rows");
    w.value(e.rows);
    w.key("max_abs_deviation");
    w.value(e.max_abs_deviation);
    w.end_object();
  }
  w.end_array();
  w.key("adjacency_extra");
  w.begin_array();
  for (const auto& pr : r.adjacency_extra) {
    w.begin_array();
    w.value(pr.first);
    w.value(pr.second);
    w.end_array();
  }
  w.end_array();
  w.key("adjacency_missing");
  w.begin_array();
  for (const auto& pr : r.adjacency_missing) {
    w.begin_array();
    w.value(pr.first);
    w.value(pr.second);
    w.end_array();
  }
  w.end_array();
  w.key("case_cover_gaps");
  w.begin_array();
  for (const IndexPair& p : r.case_cover_gaps) {
    w.begin_object();
    w.key("k");
    w.value(p.k);
    w.key("x");
    w.value(word_text(p.x));
    w.end_object();
  }
  w.end_array();
  w.key("color_violations");
  w.begin_array();
  for (const std::string& s : r.color_violations) w.value(s);
  w.end_array();
  w.end_object();
  return w.str();
}

}  // namespace qdlab
