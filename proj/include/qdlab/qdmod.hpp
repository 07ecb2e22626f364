#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "qdlab/linops.hpp"
#include "qdlab/pvv.hpp"
#include "qdlab/words.hpp"

namespace qdlab {

// A finite rank projection candidate, given by an orthonormal frame over an
// explicit ambient window. The ambient is either an ordered word basis or,
// when `ambient` is empty, the integer sites site_lo .. site_lo + dim - 1.
// window_ok records that the range and its images under the designated
// generators stay inside the ambient, which makes every commutator
// compression exact.
struct ProjectionCandidate {
  std::vector<Word> ambient;
  long site_lo = 0;
  long dim = 0;
  Eigen::MatrixXcd frame;  // dim x rank, orthonormal columns to 1e-12
  bool window_ok = false;
};

// Frame spanning the eta' family (the projection P) on a window closed under
// lambda_a and its inverse.
ProjectionCandidate berg_window_witness(const PVVParams& params);

// Frame spanning the twisted eta family (the projection Q) on a window
// closed under both generators and their inverses.
ProjectionCandidate q_witness(const PVVParams& params);

// Two-point taper of length K for the bilateral shift, on sites [-2K, 2K).
ProjectionCandidate berg_shift_witness(long K);

// One witness value of the modulus: an upper-bound sample, never the modulus
// itself (that would take a net of projections tending to the identity).
struct QDEstimate {
  std::string omega;
  std::vector<std::string> generator_labels;
  std::vector<double> per_generator;
  double value = 0.0;
  bool window_ok = false;
  ProjectionCandidate witness;
};

// Exact max over the generator set of ||[lambda_g, P]||, each norm obtained
// from a dense decomposition of the full commutator on the witness window.
// Throws WindowViolation when the range images escape the window.
QDEstimate certified_upper_bound(const std::vector<Word>& generators,
                                 const ProjectionCandidate& witness);

// Bilateral-shift flavor for integer-site witnesses.
QDEstimate certified_upper_bound_shift(const ProjectionCandidate& witness);

struct ShiftDemoReport {
  long dim = 0;
  long trials = 0;
  long rank_max = 0;
  std::uint64_t seed = 0;
  double min_comm_norm = 0.0;
  bool rank_identities_ok = false;
};

// Proper-isometry obstruction on the truncated unilateral shift: random
// finite rank projections fixing the first basis vector always have
// rank(SP) = rank(P), rank(PS) < rank(P), and ||[S,P]|| >= 1. Projections
// are confined to coordinates [0, dim - rank_max - 2] so the truncation is
// invisible; requires dim >= 3 rank_max.
ShiftDemoReport shift_obstruction_demo(long dim, long trials, long rank_max,
                                       std::uint64_t seed);
std::string shift_demo_json(const ShiftDemoReport& r);

struct OptimizeConfig {
  double tau = 1e-3;        // smoothed-max temperature
  double step0 = 0.1;       // backtracking starts here and halves
  double step_floor = 1e-14;
  double stop_rel = 1e-9;   // relative change counted as progress
  int stop_window = 50;     // stop after this many stalled iterations
  long max_iters = 400;
  std::uint64_t seed = 0;   // recorded in reports; drives random inits
};

struct OptimizeResult {
  std::vector<std::string> generators;
  long rank = 0;
  long window = 0;  // ambient dimension
  std::uint64_t seed = 0;
  long iterations = 0;
  double value = 0.0;           // best witness value seen (never above baseline)
  double baseline_value = 0.0;  // witness value of the initial frame
  bool converged = false;       // stalled out before the iteration budget
  ProjectionCandidate witness;
};

// Gradient descent on the frame of a rank-fixed projection, minimizing the
// smoothed max of all commutator singular values, with a QR retraction and
// a row mask keeping the range inside the exactness window.
OptimizeResult optimize_shift_projection(long K, const OptimizeConfig& config);
OptimizeResult optimize_group_projection(const std::vector<Word>& generators,
                                         const std::vector<Word>& ambient,
                                         long rank,
                                         const ProjectionCandidate* init,
                                         const OptimizeConfig& config);

std::string optimize_result_json(const OptimizeResult& r);

}  // namespace qdlab
