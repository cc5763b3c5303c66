// JSON and CSV forms of the library's data types. A complex number is a
// [re, im] pair, a matrix is a row-major array of such pairs, and floats
// print with 17 significant digits so every double survives a round trip.
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cyclophase/bell.hpp"
#include "cyclophase/cyclic.hpp"
#include "cyclophase/oracle.hpp"
#include "cyclophase/states.hpp"

namespace cyclophase {

// ordered so that emitted documents are byte-stable
using Json = nlohmann::ordered_json;

std::string format_double(double x);

Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j);

// {"amplitudes": [[re, im], ...]}
Json pure_state_to_json(const PureState& psi);
PureState pure_state_from_json(const Json& j);

// {"density": [[[re, im], ...], ...]} row-major
Json mixed_state_to_json(const MixedState& rho);
MixedState mixed_state_from_json(const Json& j);

// [x, y, z]
Json bloch_to_json(const BlochVector& v);
BlochVector bloch_from_json(const Json& j);

// {"photons": N, "ports": K, "rows": [[[re, im], ...], ...]}; parsing
// revalidates orthonormality through the InterferometerRows constructor
Json rows_to_json(const InterferometerRows& rows);
InterferometerRows rows_from_json(const Json& j);

// { "n": int, "phases": [rad], "states": [...], "partition": [[..], [..]] }
// with the partition optional. Each states entry is a pure or a mixed
// state object; the parse keeps the pure representation only if every
// entry is pure, otherwise all entries are promoted to density matrices.
struct ExperimentConfig {
  CyclicConfig config;
  std::vector<PureState> pure_states;
  std::vector<MixedState> mixed_states;
  std::optional<StationPartition> partition;

  explicit ExperimentConfig(CyclicConfig c) : config(std::move(c)) {}
  bool all_pure() const { return mixed_states.empty(); }
};

Json experiment_to_json(const ExperimentConfig& experiment);
ExperimentConfig experiment_from_json(const Json& j);

// pattern,k,probability over all 2^N outcomes in index order; the pattern
// column prints station 0 leftmost
std::string coincidence_csv(int n_stations,
                            const std::vector<double>& probabilities);

// pattern,probability with the sorted ports joined by '-'
std::string port_distribution_csv(
    const std::vector<std::pair<OutputPortPattern, double>>& distribution);

struct ScanRow {
  double theta = 0.0;
  int d = 0;
  ChshReport report;
  double zeno_limit = 0.0;
};

// theta,d,re_v11,re_v12,re_v21,re_v22,phase_g11,phase_g12,phase_g21,
// phase_g22,i_chsh,i_zeno_limit
std::string scan_csv(const std::vector<ScanRow>& rows);

struct TrajectoryPoint {
  std::string trajectory;  // x1, x2, y1, y2, w1, w2
  std::string kind;        // anchor, sample, grid
  double t = 0.0;
  BlochVector point{0.0, 0.0, 0.0};
};

// trajectory,kind,t,bx,by,bz
std::string trajectories_csv(const std::vector<TrajectoryPoint>& points);

// best value, six Bloch vectors, restart count, seed
Json optimization_report_to_json(const OptimizationReport& report);

}  // namespace cyclophase
