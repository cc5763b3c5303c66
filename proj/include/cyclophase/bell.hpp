// Two-party construction on the Bloch sphere: four trajectories between two
// shared anchor states, equal-overlap sampling into setting sequences, the
// V_ij factors and the CHSH combination, its large-d closed form, and the
// one-photon-per-list impossibility searches.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "cyclophase/common.hpp"
#include "cyclophase/states.hpp"

namespace cyclophase {

// theta is the polar angle of the anchor latitude (z = cos theta), d the
// number of sampled states per trajectory; the assembled cycle then holds
// N = 2d + 2 photons.
struct TrajectoryParams {
  double theta;
  int d;

  TrajectoryParams(double theta_, int d_);
  int photons() const { return 2 * d + 2; }
};

// Anchors shared by all four trajectories.
BlochVector anchor_w1(double theta);  // (-sin theta, 0, cos theta)
BlochVector anchor_w2(double theta);  // (+sin theta, 0, cos theta)

// Latitude circles from w2 to w1 (x2 through +y, y2 runs w1 to w2 through
// -y) and the deeper circular arcs through (0, -+sin(theta/3), cos(theta/3)).
// All take theta in (0, pi/2] and t in [0, pi].
BlochVector trajectory_x2(double theta, double t);
BlochVector trajectory_y2(double theta, double t);
BlochVector trajectory_x1(double theta, double t);
BlochVector trajectory_y1(double theta, double t);

// Per-setting input lists: alice[i-1] holds (x_{i,1}..x_{i,d}), bob[j-1]
// holds (y_{j,1}..y_{j,d}), sampled at t = k pi/(d+1).
struct SettingSequences {
  std::array<std::vector<PureState>, 2> alice;
  std::array<std::vector<PureState>, 2> bob;
  PureState w1;
  PureState w2;
};

SettingSequences build_setting_sequences(const TrajectoryParams& params);

// Geometric factor of the ordered cycle (x_{i,1..d}, w1, y_{j,1..d}, w2);
// i, j in {1, 2}.
GeometricFactor vij(const TrajectoryParams& params, int i, int j);

struct ChshReport {
  // index [i-1][j-1] for settings (i, j)
  std::array<std::array<Complex, 2>, 2> v{};
  std::array<std::array<double, 2>, 2> correlators{};
  double i_chsh = 0.0;
};

// I = Re[V11 + V12 + V21 - V22].
ChshReport chsh_value(const TrajectoryParams& params);

// chsh_value extended to the theta = 0 boundary of the scan grid, where all
// trajectories collapse to the pole and every V_ij -> 1 (I -> 2).
ChshReport chsh_curve_value(double theta, int d);

// d -> infinity closed form 3 cos(phi1) - cos(3 phi1) with
// phi1 = pi(1 - cos theta)/3; equals 2 sqrt 2 at theta = arccos(1/4).
double chsh_zeno_limit(double theta);

// The same CHSH combination for d = 1 written directly in the six Bloch
// vectors, with no state construction. Basis of the optimizer.
double chsh_objective_d1(const BlochVector& x1, const BlochVector& x2,
                         const BlochVector& y1, const BlochVector& y2,
                         const BlochVector& w1, const BlochVector& w2);

struct OptimizationReport {
  double best_value = 0.0;
  // x1, x2, y1, y2, w1, w2 at the best point found
  std::array<BlochVector, 6> vectors{};
  int restarts = 0;
  std::uint64_t seed = 0;
};

// Random-restart simplex search over the twelve spherical angles of the six
// Bloch vectors. Deterministic for a fixed seed.
OptimizationReport optimize_chsh_d1(int restarts, std::uint64_t seed);

// Max of I over `samples` draws of six Haar-random states (drawn per sample
// in the order x1, x2, y1, y2, w1, w2) of the given internal dimension.
double random_state_scan(Eigen::Index dim, std::int64_t samples,
                         std::uint64_t seed);

}  // namespace cyclophase
