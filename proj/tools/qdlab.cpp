// Command line front end: constructions, audits, bound tables, optimizer
// experiments. Artifacts go to stdout (or --out) in the frozen JSON/CSV
// schemas; identical invocations produce byte-identical output.
//
// Exit codes: 0 success, 2 validation or compute error, 3 when --strict is
// set and a reported check fails.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "qdlab/json_writer.hpp"
#include "qdlab/linops.hpp"
#include "qdlab/lp_reps.hpp"
#include "qdlab/pvv.hpp"
#include "qdlab/qdmod.hpp"
#include "qdlab/tables.hpp"
#include "qdlab/words.hpp"

namespace {

using namespace qdlab;

std::vector<double> parse_grid(const std::string& text) {
  std::vector<double> parts;
  std::size_t from = 0;
  while (true) {
    std::size_t colon = text.find(':', from);
    std::string piece = text.substr(from, colon == std::string::npos
                                              ? std::string::npos
                                              : colon - from);
    std::size_t used = 0;
    double v = std::stod(piece, &used);
    if (used != piece.size()) throw std::invalid_argument("bad grid value: " + piece);
    parts.push_back(v);
    if (colon == std::string::npos) break;
    from = colon + 1;
  }
  if (parts.size() == 1) return parts;
  if (parts.size() != 3)
    throw std::invalid_argument("grid must be a value or start:stop:step");
  const double start = parts[0], stop = parts[1], step = parts[2];
  if (step <= 0 || stop < start)
    throw std::invalid_argument("grid needs step > 0 and stop >= start");
  std::vector<double> values;
  for (double x = start; x <= stop + 1e-9 * std::max(1.0, std::abs(stop)); x += step)
    values.push_back(x);
  return values;
}

double parse_q(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF") return kInf;
  std::size_t used = 0;
  double v = std::stod(text, &used);
  if (used != text.size()) throw std::invalid_argument("bad q value: " + text);
  return v;
}

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

bool witness_strict_ok(const WitnessReport& r) {
  bool ok = r.norm_comm_a < 1.0 && r.norm_comm_b < 1.0;
  ok = ok && std::abs(r.norm_comm_a - r.norm_comm_b) <= 1e-8;
  ok = ok && r.lambda_min_S >= 1.0 - std::pow(double(r.N), -0.25) - 1e-10;
  ok = ok && r.lambda_min_F_minus_S > r.claim_bound;
  return ok;
}

bool audit_strict_ok(const AuditReport& r) {
  return r.max_abs_discrepancy <= 1e-10 && r.missing_nonzero.empty() &&
         r.coverage_gaps.empty() && r.color_violations.empty() &&
         r.adjacency_ok && r.case_cover_ok;
}

struct Outcome {
  std::string artifact;
  bool ok = true;
  std::string complaint;
};

Outcome run_qd_witness(long N, int R) {
  WitnessReport rep = witness_report(make_params(N, R));
  Outcome out;
  out.artifact = witness_report_json(rep);
  out.ok = witness_strict_ok(rep);
  if (!out.ok) out.complaint = "witness report violates a stated inequality";
  return out;
}

Outcome run_table_audit(long N, int R, const std::string& tables) {
  PVVParams params = make_params(N, R);
  Outcome out;
  std::vector<AuditReport> reports;
  if (tables == "12" || tables == "both")
    reports.push_back(audit(params, TablePair::T12));
  if (tables == "34" || tables == "both")
    reports.push_back(audit(params, TablePair::T34));
  if (reports.empty())
    throw std::invalid_argument("--tables must be 12, 34, or both");
  if (reports.size() == 1) {
    out.artifact = audit_report_json(reports[0]);
  } else {
    out.artifact = "[" + audit_report_json(reports[0]) + "," +
                   audit_report_json(reports[1]) + "]";
  }
  for (const AuditReport& r : reports)
    if (!audit_strict_ok(r)) {
      out.ok = false;
      out.complaint = "table audit reports a discrepancy or an uncovered row";
    }
  return out;
}

Outcome run_ps_bounds(int d, const std::string& p_grid, const std::string& q_text) {
  const double q = parse_q(q_text);
  std::vector<double> ps = parse_grid(p_grid);
  Outcome out;
  std::string csv = "d, p, q, qd_upper, cb_upper\n";
  double prev = kInf;
  bool decreasing = true, cb_sane = true;
  for (double p : ps) {
    const double qd = qd_upper_bound(p, d);
    double cb = std::numeric_limits<double>::quiet_NaN();
    if (p < q) {
      cb = cb_upper_bound(p, q, d);
      if (!(cb >= 1.0)) cb_sane = false;
    }
    csv += std::to_string(d) + ", " + fmt17(p) + ", " + fmt17(q) + ", " +
           fmt17(qd) + ", " + fmt17(cb) + "\n";
    if (!(qd < prev)) decreasing = false;
    prev = qd;
  }
  out.artifact = csv;
  out.ok = decreasing && cb_sane;
  if (!out.ok) out.complaint = "bound table violates monotonicity";
  return out;
}

Outcome run_haagerup(int d, int R, const std::string& r_grid) {
  std::vector<double> rs = parse_grid(r_grid);
  Outcome out;
  JsonWriter w;
  w.begin_object();
  w.key("d");
  w.value(d);
  w.key("R");
  w.value(R);
  bool all_ok = true;
  w.key("entries");
  w.begin_array();
  for (double r : rs) {
    const double mn = min_eig_psd(haagerup_gram(r, R, d));
    if (mn < -1e-10) all_ok = false;
    w.begin_object();
    w.key("r");
    w.value(r);
    w.key("min_eig");
    w.value(mn);
    w.end_object();
  }
  w.end_array();
  w.key("all_nonneg");
  w.value(all_ok);
  w.end_object();
  out.artifact = w.str();
  out.ok = all_ok;
  if (!all_ok) out.complaint = "a radial Gram matrix has a negative eigenvalue";
  return out;
}

Outcome run_shift_demo(long dim, long trials, long rank_max, std::uint64_t seed) {
  ShiftDemoReport rep = shift_obstruction_demo(dim, trials, rank_max, seed);
  Outcome out;
  out.artifact = shift_demo_json(rep);
  out.ok = rep.rank_identities_ok && rep.min_comm_norm >= 1.0 - 1e-9;
  if (!out.ok) out.complaint = "proper isometry obstruction not reproduced";
  return out;
}

Outcome run_optimize(const std::string& model, long K, long N, int R, long rank,
                     const std::string& init, long iters, std::uint64_t seed) {
  OptimizeConfig cfg;
  cfg.max_iters = iters;
  cfg.seed = seed;
  OptimizeResult res;
  if (model == "shift") {
    res = optimize_shift_projection(K, cfg);
  } else if (model == "f2") {
    PVVParams params = make_params(N, R);
    ProjectionCandidate q = q_witness(params);
    const std::vector<Word> gens = {Word{0}, Word{2}};
    if (init == "q") {
      res = optimize_group_projection(gens, q.ambient, q.frame.cols(), &q, cfg);
    } else if (init == "random") {
      if (rank < 1) throw std::invalid_argument("--rank >= 1 required for random init");
      res = optimize_group_projection(gens, q.ambient, rank, nullptr, cfg);
    } else {
      throw std::invalid_argument("--init must be q or random");
    }
  } else {
    throw std::invalid_argument("--model must be shift or f2");
  }
  Outcome out;
  out.artifact = optimize_result_json(res);
  out.ok = res.value <= res.baseline_value + 1e-12 && res.witness.window_ok;
  if (!out.ok) out.complaint = "optimizer violated the never-worse contract";
  return out;
}

Outcome run_sweep(const std::string& n_grid, int R) {
  std::vector<double> raw = parse_grid(n_grid);
  std::vector<long> ns;
  for (double v : raw) {
    long n = static_cast<long>(std::llround(v));
    if (std::abs(v - double(n)) > 1e-9)
      throw std::invalid_argument("--N-grid must contain integers");
    ns.push_back(n);
  }
  unsigned workers = std::thread::hardware_concurrency();
  if (workers == 0) workers = 1;
  if (const char* env = std::getenv("QDLAB_THREADS")) {
    char* end = nullptr;
    long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1)
      workers = std::min<unsigned>(workers, static_cast<unsigned>(cap));
  }
  workers = std::min<unsigned>(workers, static_cast<unsigned>(ns.size()));

  std::vector<std::string> artifacts(ns.size());
  std::vector<bool> oks(ns.size(), true);
  std::vector<std::exception_ptr> errors(ns.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= ns.size()) return;
      try {
        WitnessReport rep = witness_report(make_params(ns[i], R));
        artifacts[i] = witness_report_json(rep);
        oks[i] = witness_strict_ok(rep);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  Outcome out;
  out.artifact = "[";
  for (std::size_t i = 0; i < artifacts.size(); ++i) {
    if (i) out.artifact += ",";
    out.artifact += artifacts[i];
    if (!oks[i]) {
      out.ok = false;
      out.complaint = "a sweep entry violates a stated inequality";
    }
  }
  out.artifact += "]";
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasidiagonality witnesses on free groups: constructions, "
               "audits, and bounds"};
  app.require_subcommand(1);

  bool strict = false;
  std::string out_path;

  long N = 50;
  int R = 1;
  std::string tables = "both";
  int d = 2;
  std::string p_grid = "2:32:1";
  std::string q_text = "inf";
  int hg_R = 3;
  std::string r_grid = "0.1:0.9:0.1";
  long dim = 64, trials = 200, rank_max = 20;
  std::uint64_t seed = 1;
  std::string model = "shift";
  long K = 25, rank = 0, iters = 400;
  std::string init = "q";
  std::string n_grid = "50:200:50";

  auto add_common = [&](CLI::App* sc) {
    sc->add_flag("--strict", strict, "exit 3 when a reported check fails");
    sc->add_option("--out", out_path, "write the artifact to this path");
  };

  CLI::App* sc_witness = app.add_subcommand("qd-witness", "witness report for Q at (N, R)");
  sc_witness->add_option("--N", N, "Berg window length")->required();
  sc_witness->add_option("--R", R, "ball radius");
  add_common(sc_witness);

  CLI::App* sc_audit = app.add_subcommand("table-audit", "audit the inner product tables");
  sc_audit->add_option("--N", N, "Berg window length")->required();
  sc_audit->add_option("--R", R, "ball radius");
  sc_audit->add_option("--tables", tables, "12, 34, or both");
  add_common(sc_audit);

  CLI::App* sc_bounds = app.add_subcommand("ps-bounds", "qd/cb bound table over a p grid");
  sc_bounds->add_option("--d", d, "free group rank, >= 2");
  sc_bounds->add_option("--p-grid", p_grid, "p values, value or start:stop:step");
  sc_bounds->add_option("--q", q_text, "q for the cb bound (number or inf)");
  add_common(sc_bounds);

  CLI::App* sc_haag = app.add_subcommand("haagerup-check", "radial Gram positivity over a ball");
  sc_haag->add_option("--d", d, "free group rank, >= 2");
  sc_haag->add_option("--R", hg_R, "ball radius");
  sc_haag->add_option("--r-grid", r_grid, "r values, value or start:stop:step");
  add_common(sc_haag);

  CLI::App* sc_shift = app.add_subcommand("shift-demo", "proper isometry obstruction trials");
  sc_shift->add_option("--dim", dim, "ambient dimension");
  sc_shift->add_option("--trials", trials, "number of random projections");
  sc_shift->add_option("--rank-max", rank_max, "maximum projection rank");
  sc_shift->add_option("--seed", seed, "RNG seed (recorded in the report)");
  add_common(sc_shift);

  CLI::App* sc_opt = app.add_subcommand("optimize", "projection optimizer runs");
  sc_opt->add_option("--model", model, "shift or f2");
  sc_opt->add_option("--K", K, "taper rank for the shift model (window 4K)");
  sc_opt->add_option("--N", N, "Berg window length for the f2 model");
  sc_opt->add_option("--R", R, "ball radius for the f2 model");
  sc_opt->add_option("--rank", rank, "projection rank for random init");
  sc_opt->add_option("--init", init, "q or random (f2 model)");
  sc_opt->add_option("--iters", iters, "iteration budget");
  sc_opt->add_option("--seed", seed, "RNG seed (recorded in the report)");
  add_common(sc_opt);

  CLI::App* sc_sweep = app.add_subcommand("sweep", "qd-witness over an N grid");
  sc_sweep->add_option("--N-grid", n_grid, "N values, value or start:stop:step");
  sc_sweep->add_option("--R", R, "ball radius");
  add_common(sc_sweep);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  Outcome out;
  try {
    if (*sc_witness) out = run_qd_witness(N, R);
    else if (*sc_audit) out = run_table_audit(N, R, tables);
    else if (*sc_bounds) out = run_ps_bounds(d, p_grid, q_text);
    else if (*sc_haag) out = run_haagerup(d, hg_R, r_grid);
    else if (*sc_shift) out = run_shift_demo(dim, trials, rank_max, seed);
    else if (*sc_opt) out = run_optimize(model, K, N, R, rank, init, iters, seed);
    else if (*sc_sweep) out = run_sweep(n_grid, R);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  if (out_path.empty()) {
    std::cout << out.artifact << "\n";
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot open output path: " << out_path << "\n";
      return 2;
    }
    f << out.artifact << "\n";
    if (!f.good()) {
      std::cerr << "error: write failed: " << out_path << "\n";
      return 2;
    }
  }
  if (strict && !out.ok) {
    std::cerr << "strict: " << out.complaint << "\n";
    return 3;
  }
  return 0;
}
