#include "qdlab/qdmod.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <utility>

#include "qdlab/json_writer.hpp"

namespace qdlab {
namespace {

constexpr double kSupportTol = 1e-12;
constexpr double kRankTol = 1e-9;

// Unitary acting as a permutation with drops on the ambient basis:
// U e_j = e_{image[j]}, with image[j] == -1 when the image leaves the window.
struct GeneratorAction {
  std::string label;
  std::vector<long> image;
};

// U F by scattering rows.
Eigen::MatrixXcd apply_u(const GeneratorAction& a, const Eigen::MatrixXcd& F) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(F.rows(), F.cols());
  for (long j = 0; j < F.rows(); ++j)
    if (a.image[j] >= 0) out.row(a.image[j]) = F.row(j);
  return out;
}

// U* W by gathering rows.
Eigen::MatrixXcd apply_u_adj(const GeneratorAction& a, const Eigen::MatrixXcd& W) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(W.rows(), W.cols());
  for (long j = 0; j < W.rows(); ++j)
    if (a.image[j] >= 0) out.row(j) = W.row(a.image[j]);
  return out;
}

std::vector<long> support_rows(const Eigen::MatrixXcd& F) {
  std::vector<long> rows;
  for (long i = 0; i < F.rows(); ++i)
    if (F.row(i).cwiseAbs().maxCoeff() > kSupportTol) rows.push_back(i);
  return rows;
}

// Every support row must have an image and a preimage under every action;
// then each commutator compression onto the window is the exact operator.
bool window_guard(const std::vector<GeneratorAction>& acts, const Eigen::MatrixXcd& F) {
  const std::vector<long> rows = support_rows(F);
  for (const auto& a : acts) {
    std::vector<long> pre(a.image.size(), -1);
    for (long j = 0; j < static_cast<long>(a.image.size()); ++j)
      if (a.image[j] >= 0) pre[a.image[j]] = j;
    for (long i : rows)
      if (a.image[i] < 0 || pre[i] < 0) return false;
  }
  return true;
}

void check_orthonormal(const Eigen::MatrixXcd& F) {
  Eigen::MatrixXcd G = F.adjoint() * F;
  G -= Eigen::MatrixXcd::Identity(F.cols(), F.cols());
  if (G.size() == 0 || G.cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("witness frame columns are not orthonormal");
}

// ||[U, P]|| equals the top singular value of (1 - P) U F for a square
// compression PUP, so the per-generator blocks below carry the full norm.
struct BlockSVD {
  Eigen::MatrixXcd u;
  Eigen::VectorXd s;
  Eigen::MatrixXcd vh;
  Eigen::MatrixXcd UF;
};

BlockSVD block_svd(const GeneratorAction& a, const Eigen::MatrixXcd& F) {
  BlockSVD b;
  b.UF = apply_u(a, F);
  Eigen::MatrixXcd M = b.UF - F * (F.adjoint() * b.UF);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  b.u = svd.matrixU();
  b.s = svd.singularValues();
  b.vh = svd.matrixV().adjoint();
  return b;
}

double true_objective(const std::vector<GeneratorAction>& acts, const Eigen::MatrixXcd& F) {
  double mx = 0.0;
  for (const auto& a : acts) {
    Eigen::MatrixXcd UF = apply_u(a, F);
    Eigen::MatrixXcd M = UF - F * (F.adjoint() * UF);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(M);
    if (svd.singularValues().size() > 0) mx = std::max(mx, svd.singularValues()(0));
  }
  return mx;
}

struct LseEval {
  double lse = 0.0;
  double true_max = 0.0;
  Eigen::MatrixXcd grad;
};

// Smoothed max over the joint singular spectrum of all generator blocks.
// The top value is doubly degenerate at the symmetric tapers, so smoothing
// over the whole spectrum is what keeps the gradient informative there.
LseEval lse_obj_grad(const std::vector<GeneratorAction>& acts,
                     const Eigen::MatrixXcd& F, double tau) {
  std::vector<BlockSVD> blocks;
  blocks.reserve(acts.size());
  double mx = 0.0;
  for (const auto& a : acts) {
    blocks.push_back(block_svd(a, F));
    const auto& s = blocks.back().s;
    if (s.size() > 0) mx = std::max(mx, s(0));
  }
  double z = 0.0;
  for (const auto& b : blocks)
    for (long i = 0; i < b.s.size(); ++i) z += std::exp((b.s(i) - mx) / tau);

  LseEval ev;
  ev.true_max = mx;
  ev.lse = mx + tau * std::log(z);
  ev.grad = Eigen::MatrixXcd::Zero(F.rows(), F.cols());
  for (std::size_t gi = 0; gi < acts.size(); ++gi) {
    const BlockSVD& b = blocks[gi];
    if (b.s.size() == 0) continue;
    Eigen::VectorXd w(b.s.size());
    for (long i = 0; i < b.s.size(); ++i) w(i) = std::exp((b.s(i) - mx) / tau) / z;
    if (w.maxCoeff() < 1e-300) continue;
    Eigen::MatrixXcd W = b.u * w.cast<cplx>().asDiagonal() * b.vh;
    Eigen::MatrixXcd PW = F * (F.adjoint() * W);
    ev.grad += apply_u_adj(acts[gi], W - PW) - W * (b.UF.adjoint() * F) -
               b.UF * (W.adjoint() * F);
  }
  return ev;
}

// Mask the rows, then re-orthonormalize by thin QR with the column signs
// pinned to the real parts of the R diagonal.
Eigen::MatrixXcd retract(const Eigen::MatrixXcd& F, const Eigen::VectorXd& mask) {
  Eigen::MatrixXcd Fm = mask.cast<cplx>().asDiagonal() * F;
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(Fm);
  const long r = F.cols();
  Eigen::MatrixXcd Q =
      qr.householderQ() * Eigen::MatrixXcd::Identity(F.rows(), r);
  Eigen::MatrixXcd R = qr.matrixQR().topRows(r).triangularView<Eigen::Upper>();
  for (long i = 0; i < r; ++i) {
    double d = R(i, i).real();
    double s = d > 0.0 ? 1.0 : (d < 0.0 ? -1.0 : 1.0);
    Q.col(i) *= s;
  }
  return Q;
}

struct CoreResult {
  Eigen::MatrixXcd best_F;
  double best_val = 0.0;
  long iterations = 0;
  bool converged = false;
};

// Backtracking descent on the smoothed max, tracking the best true max seen.
// A step counts as progress only when the relative decrease clears stop_rel;
// stop_window stalled iterations in a row end the run.
CoreResult optimize_core(const std::vector<GeneratorAction>& acts,
                         const Eigen::MatrixXcd& F0, const Eigen::VectorXd& mask,
                         const OptimizeConfig& cfg) {
  CoreResult res;
  Eigen::MatrixXcd F = retract(F0, mask);
  res.best_F = F;
  res.best_val = true_objective(acts, F);
  LseEval ev = lse_obj_grad(acts, F, cfg.tau);
  double cur = ev.lse;
  Eigen::MatrixXcd G = std::move(ev.grad);
  int stall = 0;
  long it = 0;
  for (; it < cfg.max_iters; ++it) {
    double step = cfg.step0;
    bool accepted = false;
    while (step > cfg.step_floor) {
      Eigen::MatrixXcd Fnew =
          retract(F - step * (mask.cast<cplx>().asDiagonal() * G), mask);
      LseEval evn = lse_obj_grad(acts, Fnew, cfg.tau);
      if (evn.lse < cur) {
        const double rel = (cur - evn.lse) / std::max(std::abs(cur), 1e-30);
        F = std::move(Fnew);
        cur = evn.lse;
        G = std::move(evn.grad);
        if (evn.true_max < res.best_val) {
          res.best_val = evn.true_max;
          res.best_F = F;
        }
        stall = rel < cfg.stop_rel ? stall + 1 : 0;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) ++stall;
    if (stall >= cfg.stop_window) {
      ++it;
      res.converged = true;
      break;
    }
  }
  res.iterations = it;
  return res;
}

// Two-point Berg taper of rank K against the bilateral shift, laid out on
// the window [-2K, 2K) so two spare rows guard each edge.
void z_model(long K, GeneratorAction& act, Eigen::MatrixXcd& F0,
             Eigen::VectorXd& mask) {
  const long n = 4 * K;
  act.label = "bilateral_shift";
  act.image.assign(n, -1);
  for (long i = 0; i + 1 < n; ++i) act.image[i] = i + 1;
  F0 = Eigen::MatrixXcd::Zero(n, K);
  for (long k = 0; k < K; ++k) {
    if (k > 0) F0(k + K, k) = std::sqrt(double(k) / double(K));
    F0(k + 2 * K, k) = std::sqrt(double(K - k) / double(K));
  }
  mask = Eigen::VectorXd::Zero(n);
  for (long i = 2; i + 2 < n; ++i) mask(i) = 1.0;
}

GeneratorAction shift_action(long n) {
  GeneratorAction act;
  act.label = "bilateral_shift";
  act.image.assign(n, -1);
  for (long i = 0; i + 1 < n; ++i) act.image[i] = i + 1;
  return act;
}

// Orthonormal frame over the union of the vector supports, with the ambient
// padded by the generator orbits so the window guard can hold.
ProjectionCandidate dense_candidate(const std::vector<FinVector>& vecs,
                                    const std::vector<Word>& gens) {
  std::set<Word, WordLess> amb;
  for (const auto& v : vecs) {
    for (const auto& [w, c] : v) {
      amb.insert(w);
      for (const Word& g : gens) {
        amb.insert(multiply(g, w));
        amb.insert(multiply(invert(g), w));
      }
    }
  }
  ProjectionCandidate cand;
  cand.ambient.assign(amb.begin(), amb.end());
  cand.dim = static_cast<long>(cand.ambient.size());
  std::map<Word, long, WordLess> pos;
  for (long i = 0; i < cand.dim; ++i) pos.emplace(cand.ambient[i], i);
  cand.frame = Eigen::MatrixXcd::Zero(cand.dim, static_cast<long>(vecs.size()));
  for (std::size_t j = 0; j < vecs.size(); ++j)
    for (const auto& [w, c] : vecs[j]) cand.frame(pos.at(w), j) = c;
  cand.window_ok = true;
  return cand;
}

std::vector<GeneratorAction> word_actions(const std::vector<Word>& generators,
                                          const std::vector<Word>& ambient) {
  std::map<Word, long, WordLess> pos;
  for (long i = 0; i < static_cast<long>(ambient.size()); ++i)
    pos.emplace(ambient[i], i);
  std::vector<GeneratorAction> acts;
  acts.reserve(generators.size());
  for (const Word& g : generators) {
    GeneratorAction a;
    a.label = "lambda_" + word_text(g);
    a.image.assign(ambient.size(), -1);
    for (long j = 0; j < static_cast<long>(ambient.size()); ++j) {
      auto itp = pos.find(multiply(g, ambient[j]));
      if (itp != pos.end()) a.image[j] = itp->second;
    }
    acts.push_back(std::move(a));
  }
  return acts;
}

// Dense [U, P] on the window; exact once the window guard has passed.
double dense_commutator_norm(const GeneratorAction& a, const Eigen::MatrixXcd& F) {
  Eigen::MatrixXcd UF = apply_u(a, F);
  Eigen::MatrixXcd UHF = apply_u_adj(a, F);
  Eigen::MatrixXcd C = UF * F.adjoint() - F * UHF.adjoint();
  return operator_norm(C);
}

QDEstimate certified_impl(const std::vector<GeneratorAction>& acts,
                          const ProjectionCandidate& witness) {
  check_orthonormal(witness.frame);
  if (!window_guard(acts, witness.frame))
    throw WindowViolation("witness range leaves the window under a generator");
  QDEstimate est;
  est.witness = witness;
  est.window_ok = true;
  std::string omega = "{";
  for (const auto& a : acts) {
    est.generator_labels.push_back(a.label);
    est.per_generator.push_back(dense_commutator_norm(a, witness.frame));
    if (omega.size() > 1) omega += ", ";
    omega += a.label;
  }
  omega += "}";
  est.omega = omega;
  est.value = *std::max_element(est.per_generator.begin(), est.per_generator.end());
  return est;
}

}  // namespace

ProjectionCandidate berg_window_witness(const PVVParams& params) {
  std::vector<FinVector> vecs;
  for (const IndexPair& p : build_F(params))
    vecs.push_back(eta_prime(p.k, p.x, params.N));
  return dense_candidate(vecs, {Word{0}});
}

ProjectionCandidate q_witness(const PVVParams& params) {
  EtaBasis basis = build_eta_basis(params);
  return dense_candidate(basis.vectors, {Word{0}, Word{2}});
}

ProjectionCandidate berg_shift_witness(long K) {
  if (K < 1) throw std::invalid_argument("berg_shift_witness: K >= 1 required");
  GeneratorAction act;
  Eigen::MatrixXcd F0;
  Eigen::VectorXd mask;
  z_model(K, act, F0, mask);
  ProjectionCandidate cand;
  cand.site_lo = -2 * K;
  cand.dim = 4 * K;
  cand.frame = std::move(F0);
  cand.window_ok = window_guard({act}, cand.frame);
  return cand;
}

QDEstimate certified_upper_bound(const std::vector<Word>& generators,
                                 const ProjectionCandidate& witness) {
  if (witness.ambient.empty())
    throw std::invalid_argument("certified_upper_bound: word ambient required");
  if (generators.empty())
    throw std::invalid_argument("certified_upper_bound: empty generator set");
  if (witness.frame.rows() != static_cast<long>(witness.ambient.size()))
    throw std::invalid_argument("certified_upper_bound: frame/ambient mismatch");
  return certified_impl(word_actions(generators, witness.ambient), witness);
}

QDEstimate certified_upper_bound_shift(const ProjectionCandidate& witness) {
  if (!witness.ambient.empty())
    throw std::invalid_argument("certified_upper_bound_shift: integer ambient required");
  if (witness.frame.rows() != witness.dim)
    throw std::invalid_argument("certified_upper_bound_shift: frame/window mismatch");
  return certified_impl({shift_action(witness.dim)}, witness);
}

ShiftDemoReport shift_obstruction_demo(long dim, long trials, long rank_max,
                                       std::uint64_t seed) {
  if (rank_max < 1 || trials < 1)
    throw std::invalid_argument("shift_obstruction_demo: positive trials and rank");
  if (dim < 3 * rank_max)
    throw std::invalid_argument("shift_obstruction_demo: dim >= 3 * rank_max required");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_int_distribution<long> pick(1, rank_max);
  const GeneratorAction S = shift_action(dim);
  Eigen::VectorXd full_mask = Eigen::VectorXd::Ones(dim);

  ShiftDemoReport rep;
  rep.dim = dim;
  rep.trials = trials;
  rep.rank_max = rank_max;
  rep.seed = seed;
  rep.min_comm_norm = std::numeric_limits<double>::infinity();
  rep.rank_identities_ok = true;

  // Columns live in coordinates [0, dim - rank_max - 2], far from the
  // truncation edge, and the first one is pinned to the vector the adjoint
  // shift annihilates.
  const long hi = dim - rank_max - 2;
  for (long t = 0; t < trials; ++t) {
    const long r = pick(rng);
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(dim, r);
    A(0, 0) = 1.0;
    for (long c = 1; c < r; ++c)
      for (long i = 1; i <= hi; ++i) A(i, c) = cplx(nd(rng), nd(rng));
    Eigen::MatrixXcd F = retract(A, full_mask);

    Eigen::MatrixXcd SF = apply_u(S, F);
    Eigen::MatrixXcd SHF = apply_u_adj(S, F);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd_sf(SF);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd_shf(SHF);
    long rank_sf = 0, rank_shf = 0;
    for (long i = 0; i < svd_sf.singularValues().size(); ++i)
      if (svd_sf.singularValues()(i) > kRankTol) ++rank_sf;
    for (long i = 0; i < svd_shf.singularValues().size(); ++i)
      if (svd_shf.singularValues()(i) > kRankTol) ++rank_shf;
    if (rank_sf != r || rank_shf >= r) rep.rank_identities_ok = false;

    Eigen::MatrixXcd P = F * F.adjoint();
    Eigen::MatrixXcd SP = Eigen::MatrixXcd::Zero(dim, dim);
    for (long m = 0; m < dim; ++m)
      if (S.image[m] >= 0) SP.row(S.image[m]) = P.row(m);
    Eigen::MatrixXcd PS = Eigen::MatrixXcd::Zero(dim, dim);
    for (long j = 0; j < dim; ++j)
      if (S.image[j] >= 0) PS.col(j) = P.col(S.image[j]);
    rep.min_comm_norm = std::min(rep.min_comm_norm, operator_norm(SP - PS));
  }
  return rep;
}

std::string shift_demo_json(const ShiftDemoReport& r) {
  JsonWriter w;
  w.begin_object();
  w.key("dim");
  w.value(r.dim);
  w.key("trials");
  w.value(r.trials);
  w.key("rank_max");
  w.value(r.rank_max);
  w.key("seed");
  w.value(static_cast<long long>(r.seed));
  w.key("min_comm_norm");
  w.value(r.min_comm_norm);
  w.key("rank_identities_ok");
  w.value(r.rank_identities_ok);
  w.end_object();
  return w.str();
}

OptimizeResult optimize_shift_projection(long K, const OptimizeConfig& config) {
  if (K < 2) throw std::invalid_argument("optimize_shift_projection: K >= 2 required");
  GeneratorAction act;
  Eigen::MatrixXcd F0;
  Eigen::VectorXd mask;
  z_model(K, act, F0, mask);
  std::vector<GeneratorAction> acts{std::move(act)};

  OptimizeResult res;
  res.generators = {"bilateral_shift"};
  res.rank = K;
  res.window = 4 * K;
  res.seed = config.seed;
  res.baseline_value = true_objective(acts, retract(F0, mask));
  CoreResult core = optimize_core(acts, F0, mask, config);
  res.iterations = core.iterations;
  res.converged = core.converged;
  res.value = core.best_val;
  res.witness.site_lo = -2 * K;
  res.witness.dim = 4 * K;
  res.witness.frame = std::move(core.best_F);
  res.witness.window_ok = window_guard(acts, res.witness.frame);
  return res;
}

OptimizeResult optimize_group_projection(const std::vector<Word>& generators,
                                         const std::vector<Word>& ambient,
                                         long rank,
                                         const ProjectionCandidate* init,
                                         const OptimizeConfig& config) {
  if (generators.empty())
    throw std::invalid_argument("optimize_group_projection: empty generator set");
  const long dim = static_cast<long>(ambient.size());
  if (rank < 1 || rank > dim)
    throw std::invalid_argument("optimize_group_projection: rank out of range");

  std::vector<GeneratorAction> acts = word_actions(generators, ambient);
  std::vector<std::vector<long>> pres;
  for (const auto& a : acts) {
    std::vector<long> pre(dim, -1);
    for (long j = 0; j < dim; ++j)
      if (a.image[j] >= 0) pre[a.image[j]] = j;
    pres.push_back(std::move(pre));
  }
  Eigen::VectorXd mask = Eigen::VectorXd::Zero(dim);
  long interior = 0;
  for (long i = 0; i < dim; ++i) {
    bool ok = true;
    for (std::size_t gi = 0; gi < acts.size(); ++gi)
      if (acts[gi].image[i] < 0 || pres[gi][i] < 0) ok = false;
    if (ok) {
      mask(i) = 1.0;
      ++interior;
    }
  }
  if (rank > interior)
    throw std::invalid_argument("optimize_group_projection: rank exceeds the masked window");

  Eigen::MatrixXcd F0;
  if (init != nullptr) {
    if (init->ambient != ambient || init->frame.rows() != dim ||
        init->frame.cols() != rank)
      throw std::invalid_argument("optimize_group_projection: init frame mismatch");
    F0 = init->frame;
  } else {
    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> nd(0.0, 1.0);
    F0 = Eigen::MatrixXcd::Zero(dim, rank);
    for (long j = 0; j < rank; ++j)
      for (long i = 0; i < dim; ++i)
        if (mask(i) > 0.0) F0(i, j) = cplx(nd(rng), nd(rng));
  }

  OptimizeResult res;
  for (const auto& a : acts) res.generators.push_back(a.label);
  res.rank = rank;
  res.window = dim;
  res.seed = config.seed;
  res.baseline_value = true_objective(acts, retract(F0, mask));
  CoreResult core = optimize_core(acts, F0, mask, config);
  res.iterations = core.iterations;
  res.converged = core.converged;
  res.value = core.best_val;
  res.witness.ambient = ambient;
  res.witness.dim = dim;
  res.witness.frame = std::move(core.best_F);
  res.witness.window_ok = window_guard(acts, res.witness.frame);
  return res;
}

std::string optimize_result_json(const OptimizeResult& r) {
  JsonWriter w;
  w.begin_object();
  w.key("generators");
  w.begin_array();
  for (const auto& g : r.generators) w.value(g);
  w.end_array();
  w.key("rank");
  w.value(r.rank);
  w.key("window");
  w.value(r.window);
  w.key("seed");
  w.value(static_cast<long long>(r.seed));
  w.key("iterations");
  w.value(r.iterations);
  w.key("value");
  w.value(r.value);
  w.key("baseline_value");
  w.value(r.baseline_value);
  w.key("converged");
  w.value(r.converged);
  w.end_object();
  return w.str();
}

}  // namespace qdlab
