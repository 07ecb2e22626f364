#pragma once

// Frozen reference values. Every number here was produced by an independent
// brute-force oracle run before the library code existed and is never
// regenerated by the code under test.

#include <cstddef>
#include <set>
#include <utility>

namespace fixtures {

// ||[lambda_a, Q]|| at R = 1, second computation path.
inline constexpr double kCommQ50 = 0.8665349718507698;
inline constexpr double kCommQ100 = 0.8662765655033351;
inline constexpr double kCommQ200 = 0.8661500988456986;
inline constexpr double kCommQ400 = 0.8660875322733692;
// Registered final threshold for the N = 400 value.
inline constexpr double kCommQ400Tol = 1e-6;

inline constexpr double kLambdaMinFull50 = 0.24911714255958572;
inline constexpr double kLambdaMinFull100 = 0.24956491205974604;

struct LambdaMins {
  long N;
  int R;
  std::size_t s_size;
  double per_pair_min_S;
  double lambda_min_S;
  double lambda_min_F_minus_S;
  double claim_bound;
};
inline constexpr LambdaMins kLambdaMins[] = {
    {50, 1, 1, 0.99, 0.99, 0.24911714255958584, 0.08813029928261867},
    {100, 1, 1, 0.995, 0.995, 0.24956491205974635, 0.10012893742026474},
    {50, 2, 5, 0.9751000000000001, 0.9739368321348053, 0.24911714255958564,
     0.08813029928261867},
    {100, 2, 5, 0.987525, 0.986939111780075, 0.24956491205974604,
     0.10012893742026474},
};

struct CommP {
  long N;
  int R;
  double norm;
  long window;
};
inline constexpr CommP kCommP[] = {
    {4, 1, 0.5000000000000001, 27},       {64, 1, 0.1250000000000001, 387},
    {100, 1, 0.10000000000000003, 603},   {256, 1, 0.06250000000000006, 1539},
    {64, 2, 0.12500000000000017, 1161},
};

// min eigenvalue of the radial Gram on ball(3), d = 2.
struct HaagerupEntry {
  double r;
  double min_eig;
};
inline constexpr HaagerupEntry kHaagerupBall3[] = {
    {0.1, 0.7498173752190718}, {0.2, 0.5661610952549737},
    {0.3, 0.4278009898531117}, {0.4, 0.3211270188352851},
    {0.5, 0.23717924487157513}, {0.6, 0.16990696443473774},
    {0.7, 0.11512546663904204}, {0.8, 0.06987601502474514},
    {0.9, 0.0320238699720783},
};

inline constexpr double kQdUpperP2D2 = 0.9194016867619662;
inline constexpr double kQdUpperP4096D2 = 0.023159444040035098;

// Berg taper against the bilateral shift: certified values on window 4K.
struct ZTaper {
  long K;
  double value;
};
inline constexpr ZTaper kZTaper[] = {
    {25, 0.2}, {50, 0.14142135623730961}, {100, 0.10000000000000009}};

// Pre-registered optimizer run: schedule, budget, and the envelope the
// 400-iteration values must beat (oracle reached {0.0656, 0.0413, 0.0265}).
inline constexpr long kZSchedule[] = {25, 50, 100};
inline constexpr double kZBaseline[] = {0.2, 0.1414213562373095, 0.1};
inline constexpr double kZEnvelope[] = {0.085, 0.055, 0.035};
inline constexpr long kZBudgetIters = 400;

// Table audit expectations at the acceptance grids.
inline const std::set<int> kNonempty32_1 = {8, 11, 14, 17, 19, 20};
inline const std::set<int> kNonempty32_2 = {2, 4, 6, 7, 8, 10, 11, 13,
                                            14, 16, 17, 18, 19, 20};
// Computed-adjacency pairs beyond the printed cross references at R = 2.
inline const std::set<std::pair<int, int>> kAdjacencyExtraR2 = {
    {2, 6}, {2, 16}, {6, 10}, {6, 16}, {10, 16}};

}  // namespace fixtures
