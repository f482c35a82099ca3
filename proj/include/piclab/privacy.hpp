#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "piclab/dist.hpp"
#include "piclab/pic.hpp"

namespace piclab::privacy {

// Joints here are oriented with the secret S as rows and the data X as
// columns.

struct PerfectPrivacyMap {
  dist::Channel channel;       // |X| x 2 mapping p_{Y|X}
  std::vector<double> f;       // certificate: centered, unit-norm, E[f|S] = 0
  double t0 = 0.0;             // I(X;Y) of the construction, bits
};

struct RegionCurves {
  std::vector<double> t;
  std::vector<double> lower;   // max{t - H(X|S), 0}
  std::vector<double> upper;   // t I(X;S) / H(X)
};

struct PrivacyAnalysis {
  double delta = 0.0;
  double vstar_upper = 0.0;
  RegionCurves region;
  bool perfect_privacy_feasible = false;
  bool borderline = false;     // smallest singular value in (1e-9, 1e-6]
  double t_star_lower = 0.0;
  std::optional<PerfectPrivacyMap> constructed_map;
};

// Smallest-PIC coefficient delta(p_{S,X}); zero whenever |X| > |S|.
double delta_coefficient(const dist::JointPmf& j_sx);

RegionCurves funnel_region_bounds(const dist::JointPmf& j_sx, const std::vector<double>& t_grid);

// Upper estimate of the optimal privacy-utility coefficient
// v* = inf D(q_S||p_S)/D(q_X||p_X) by seeded multi-start descent over q_X.
double vstar_estimate(const dist::JointPmf& j_sx, std::size_t iters, std::uint64_t seed);

// Two-output mapping achieving I(S;Y) = 0 with I(X;Y) = t0 > 0, built from a
// null direction of Q; absent when delta exceeds tol.
std::optional<PerfectPrivacyMap> perfect_privacy_map(const dist::JointPmf& j_sx, double tol);

// Lower bound on the perfect-privacy utility threshold t*, maximized over
// the certified null space.
double t_star_lower(const dist::JointPmf& j_sx, std::size_t f_candidates);

double delta_tensor(double delta1, std::size_t n);

// Heuristic upper estimate of G_I(t): penalty-scheduled mirror descent over
// channels with |Y| = |X|+1, restarted; the result is always feasible
// (I(X;Y) >= t) and therefore never undercuts the true funnel value.
double funnel_estimate(const dist::JointPmf& j_sx, double t, std::size_t restarts,
                       std::uint64_t seed);

// Full report used by the CLI.
PrivacyAnalysis analyze(const dist::JointPmf& j_sx, double tol, std::size_t t_points,
                        std::uint64_t seed);

}  // namespace piclab::privacy
