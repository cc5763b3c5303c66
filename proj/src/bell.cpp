#include "cyclophase/bell.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace cyclophase {

namespace {

constexpr double kPi = std::numbers::pi;
// endpoint slack for t and theta range checks (grids land on pi exactly,
// but keep arithmetic like pi*k/k safe)
constexpr double kRangeTol = 1e-12;

void require_theta(double theta) {
  if (!std::isfinite(theta) || theta <= 0.0 || theta > kPi / 2 + kRangeTol)
    throw InvalidInputError("trajectory: theta must lie in (0, pi/2]");
}

double require_t(double t) {
  if (!std::isfinite(t) || t < -kRangeTol || t > kPi + kRangeTol)
    throw InvalidInputError("trajectory: t must lie in [0, pi]");
  return std::clamp(t, 0.0, kPi);
}

// third anchor of the deep arc, between the poles of the two latitudes
BlochVector deep_midpoint(double theta) {
  return BlochVector(0.0, -std::sin(theta / 3), std::cos(theta / 3));
}

std::vector<PureState> assemble_cycle(const SettingSequences& s, int i,
                                      int j) {
  if (i < 1 || i > 2 || j < 1 || j > 2)
    throw InvalidInputError("setting labels are 1 or 2");
  std::vector<PureState> cycle;
  const auto& a = s.alice[static_cast<std::size_t>(i - 1)];
  const auto& b = s.bob[static_cast<std::size_t>(j - 1)];
  cycle.reserve(a.size() + b.size() + 2);
  cycle.insert(cycle.end(), a.begin(), a.end());
  cycle.push_back(s.w1);
  cycle.insert(cycle.end(), b.begin(), b.end());
  cycle.push_back(s.w2);
  return cycle;
}

using Vec12 = Eigen::Matrix<double, 12, 1>;

std::array<BlochVector, 6> vectors_of_angles(const Vec12& p) {
  std::array<BlochVector, 6> v;
  for (int k = 0; k < 6; ++k) {
    const double th = p[2 * k];
    const double ph = p[2 * k + 1];
    v[static_cast<std::size_t>(k)] =
        BlochVector(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph),
                    std::cos(th));
  }
  return v;
}

double objective_of_angles(const Vec12& p) {
  const auto v = vectors_of_angles(p);
  return chsh_objective_d1(v[0], v[1], v[2], v[3], v[4], v[5]);
}

struct SimplexResult {
  Vec12 point;
  double value;
};

// Nelder-Mead with the standard coefficients (reflect 1, expand 2, contract
// 1/2, shrink 1/2), stopping on the value spread. Fixed evaluation order
// keeps results reproducible for a given start point.
template <typename F>
SimplexResult nelder_mead_min(F f, const Vec12& start, double step,
                              double tol, int max_iter) {
  constexpr int n = 12;
  std::array<Vec12, n + 1> x;
  std::array<double, n + 1> fx;
  x[0] = start;
  fx[0] = f(start);
  for (int i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i + 1)] = start;
    x[static_cast<std::size_t>(i + 1)][i] += step;
    fx[static_cast<std::size_t>(i + 1)] = f(x[static_cast<std::size_t>(i + 1)]);
  }
  std::array<int, n + 1> order{};
  for (int iter = 0; iter < max_iter; ++iter) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return fx[static_cast<std::size_t>(a)] <
                                         fx[static_cast<std::size_t>(b)]; });
    const int best = order[0];
    const int second = order[n - 1];
    const int worst = order[n];
    if (fx[static_cast<std::size_t>(worst)] -
            fx[static_cast<std::size_t>(best)] < tol)
      break;
    Vec12 centroid = Vec12::Zero();
    for (int i = 0; i < n; ++i) centroid += x[static_cast<std::size_t>(order[i])];
    centroid /= n;
    const Vec12 xr = centroid + (centroid - x[static_cast<std::size_t>(worst)]);
    const double fr = f(xr);
    if (fr < fx[static_cast<std::size_t>(best)]) {
      const Vec12 xe = centroid + 2.0 * (centroid - x[static_cast<std::size_t>(worst)]);
      const double fe = f(xe);
      if (fe < fr) {
        x[static_cast<std::size_t>(worst)] = xe;
        fx[static_cast<std::size_t>(worst)] = fe;
      } else {
        x[static_cast<std::size_t>(worst)] = xr;
        fx[static_cast<std::size_t>(worst)] = fr;
      }
    } else if (fr < fx[static_cast<std::size_t>(second)]) {
      x[static_cast<std::size_t>(worst)] = xr;
      fx[static_cast<std::size_t>(worst)] = fr;
    } else {
      const bool outside = fr < fx[static_cast<std::size_t>(worst)];
      Vec12 xc;
      if (outside)
        xc = centroid + 0.5 * (xr - centroid);
      else
        xc = centroid - 0.5 * (centroid - x[static_cast<std::size_t>(worst)]);
      const double fc = f(xc);
      const double bar = outside ? fr : fx[static_cast<std::size_t>(worst)];
      if (fc < bar) {
        x[static_cast<std::size_t>(worst)] = xc;
        fx[static_cast<std::size_t>(worst)] = fc;
      } else {
        for (int i = 1; i <= n; ++i) {
          auto& xi = x[static_cast<std::size_t>(order[i])];
          xi = x[static_cast<std::size_t>(best)] +
               0.5 * (xi - x[static_cast<std::size_t>(best)]);
          fx[static_cast<std::size_t>(order[i])] = f(xi);
        }
      }
    }
  }
  std::size_t b = 0;
  for (std::size_t i = 1; i <= n; ++i)
    if (fx[i] < fx[b]) b = i;
  return {x[b], fx[b]};
}

}  // namespace

TrajectoryParams::TrajectoryParams(double theta_, int d_)
    : theta(theta_), d(d_) {
  require_theta(theta);
  if (d < 1) throw InvalidInputError("trajectory: need at least one sample");
}

BlochVector anchor_w1(double theta) {
  return BlochVector(-std::sin(theta), 0.0, std::cos(theta));
}

BlochVector anchor_w2(double theta) {
  return BlochVector(std::sin(theta), 0.0, std::cos(theta));
}

BlochVector trajectory_x2(double theta, double t) {
  require_theta(theta);
  t = require_t(t);
  const double s = std::sin(theta);
  return BlochVector(s * std::cos(t), s * std::sin(t), std::cos(theta));
}

BlochVector trajectory_y2(double theta, double t) {
  require_theta(theta);
  t = require_t(t);
  const double s = std::sin(theta);
  return BlochVector(-s * std::cos(t), -s * std::sin(t), std::cos(theta));
}

BlochVector trajectory_x1(double theta, double t) {
  require_theta(theta);
  t = require_t(t);
  // circle through w2 (t=0), the deep midpoint (t=pi/2) and w1 (t=pi),
  // traversed at constant angular speed. Its center lies on the plane
  // normal through the origin, so every point is automatically unit length.
  const BlochVector a = anchor_w2(theta);
  const BlochVector b = deep_midpoint(theta);
  const BlochVector c = anchor_w1(theta);
  const BlochVector normal = (b - a).cross(c - a);
  const double nn = normal.squaredNorm();
  if (nn < 1e-30)
    throw InvalidInputError("trajectory: degenerate anchor triple");
  const BlochVector center = normal * (normal.dot(a) / nn);
  const BlochVector radial = a - center;
  const double radius = radial.norm();
  const BlochVector e1 = radial / radius;
  BlochVector e2 = normal.normalized().cross(e1);
  double half_arc = std::atan2((b - center).dot(e2), (b - center).dot(e1));
  if (half_arc < 0) {
    e2 = -e2;
    half_arc = -half_arc;
  }
  // the midpoint bisects the w2 -> w1 arc (equal chords), so w1 sits at
  // exactly twice its angle
  const double zeta = (2.0 * half_arc / kPi) * t;
  return center + radius * (std::cos(zeta) * e1 + std::sin(zeta) * e2);
}

BlochVector trajectory_y1(double theta, double t) {
  // reflection along the y axis of the reversed deep arc; endpoints map to
  // w1 (t=0) and w2 (t=pi)
  BlochVector v = trajectory_x1(theta, kPi - require_t(t));
  v[1] = -v[1];
  return v;
}

SettingSequences build_setting_sequences(const TrajectoryParams& params) {
  std::array<std::vector<PureState>, 2> alice;
  std::array<std::vector<PureState>, 2> bob;
  for (int k = 1; k <= params.d; ++k) {
    const double t = kPi * static_cast<double>(k) /
                     static_cast<double>(params.d + 1);
    alice[0].push_back(pure_from_bloch(trajectory_x1(params.theta, t)));
    alice[1].push_back(pure_from_bloch(trajectory_x2(params.theta, t)));
    bob[0].push_back(pure_from_bloch(trajectory_y1(params.theta, t)));
    bob[1].push_back(pure_from_bloch(trajectory_y2(params.theta, t)));
  }
  return SettingSequences{std::move(alice), std::move(bob),
                          pure_from_bloch(anchor_w1(params.theta)),
                          pure_from_bloch(anchor_w2(params.theta))};
}

GeometricFactor vij(const TrajectoryParams& params, int i, int j) {
  const SettingSequences s = build_setting_sequences(params);
  return geometric_factor(assemble_cycle(s, i, j));
}

ChshReport chsh_value(const TrajectoryParams& params) {
  const SettingSequences s = build_setting_sequences(params);
  ChshReport report;
  for (int i = 1; i <= 2; ++i) {
    for (int j = 1; j <= 2; ++j) {
      const Complex v = geometric_factor(assemble_cycle(s, i, j)).value();
      report.v[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] = v;
      report.correlators[static_cast<std::size_t>(i - 1)]
                        [static_cast<std::size_t>(j - 1)] = v.real();
    }
  }
  report.i_chsh = report.correlators[0][0] + report.correlators[0][1] +
                  report.correlators[1][0] - report.correlators[1][1];
  return report;
}

ChshReport chsh_curve_value(double theta, int d) {
  if (d < 1) throw InvalidInputError("trajectory: need at least one sample");
  if (theta == 0.0) {
    // boundary of the scan grid: every state collapses to the pole
    ChshReport report;
    for (auto& row : report.v) row = {Complex(1.0, 0.0), Complex(1.0, 0.0)};
    for (auto& row : report.correlators) row = {1.0, 1.0};
    report.i_chsh = 2.0;
    return report;
  }
  return chsh_value(TrajectoryParams(theta, d));
}

double chsh_zeno_limit(double theta) {
  if (!std::isfinite(theta) || theta < 0.0 || theta > kPi / 2 + kRangeTol)
    throw InvalidInputError("zeno limit: theta must lie in [0, pi/2]");
  const double phi1 = kPi * (1.0 - std::cos(theta)) / 3.0;
  return 3.0 * std::cos(phi1) - std::cos(3.0 * phi1);
}

double chsh_objective_d1(const BlochVector& x1, const BlochVector& x2,
                         const BlochVector& y1, const BlochVector& y2,
                         const BlochVector& w1, const BlochVector& w2) {
  // Re[V11 + V12 + V21 - V22] expanded through qubit projector traces,
  // using (a sigma)(b sigma) = (a.b) I + i (a x b) sigma
  const BlochVector qp = y1 + y2;
  const BlochVector qm = y1 - y2;
  const double plus_part = (1.0 + x1.dot(w1)) * (2.0 + qp.dot(w2)) +
                           (x1 + w1).dot(qp + 2.0 * w2) -
                           x1.cross(w1).dot(qp.cross(w2));
  const double minus_part = (1.0 + x2.dot(w1)) * qm.dot(w2) +
                            (x2 + w1).dot(qm) -
                            x2.cross(w1).dot(qm.cross(w2));
  return (plus_part + minus_part) / 8.0;
}

OptimizationReport optimize_chsh_d1(int restarts, std::uint64_t seed) {
  if (restarts < 1)
    throw InvalidInputError("optimizer: need at least one restart");
  std::mt19937_64 rng(seed);
  const auto negated = [](const Vec12& p) { return -objective_of_angles(p); };
  OptimizationReport report;
  report.restarts = restarts;
  report.seed = seed;
  report.best_value = -std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    Vec12 start;
    for (int k = 0; k < 6; ++k) {
      // area-uniform polar angle, uniform azimuth
      start[2 * k] = std::acos(1.0 - 2.0 * uniform_unit(rng));
      start[2 * k + 1] = uniform_in(rng, -kPi, kPi);
    }
    const SimplexResult result =
        nelder_mead_min(negated, start, 0.25, 1e-12, 4000);
    if (-result.value > report.best_value) {
      report.best_value = -result.value;
      report.vectors = vectors_of_angles(result.point);
    }
  }
  return report;
}

double random_state_scan(Eigen::Index dim, std::int64_t samples,
                         std::uint64_t seed) {
  if (dim < 2) throw InvalidInputError("state scan: dimension must be >= 2");
  if (samples < 1) throw InvalidInputError("state scan: need >= 1 samples");
  std::mt19937_64 rng(seed);
  double best = -std::numeric_limits<double>::infinity();
  for (std::int64_t s = 0; s < samples; ++s) {
    const PureState x1 = random_pure_state(dim, rng);
    const PureState x2 = random_pure_state(dim, rng);
    const PureState y1 = random_pure_state(dim, rng);
    const PureState y2 = random_pure_state(dim, rng);
    const PureState w1 = random_pure_state(dim, rng);
    const PureState w2 = random_pure_state(dim, rng);
    // V_ij = <x_i|w1><w1|y_j><y_j|w2><w2|x_i>
    const auto chain = [&](const PureState& x, const PureState& y) {
      return x.amplitudes().dot(w1.amplitudes()) *
             w1.amplitudes().dot(y.amplitudes()) *
             y.amplitudes().dot(w2.amplitudes()) *
             w2.amplitudes().dot(x.amplitudes());
    };
    const double i_chsh = (chain(x1, y1) + chain(x1, y2) + chain(x2, y1) -
                           chain(x2, y2))
                              .real();
    best = std::max(best, i_chsh);
  }
  return best;
}

}  // namespace cyclophase
