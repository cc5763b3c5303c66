// N-station cyclic interferometer: construction of the occupied network
// rows and the closed-form coincidence statistics, which depend on the
// input states only through their collective geometric factor.
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cyclophase/common.hpp"
#include "cyclophase/states.hpp"

namespace cyclophase {

// Station count and the per-station phase shifts, indexed 0..N-1. The loop
// arm arriving at station m carries phase phases[m].
class CyclicConfig {
 public:
  explicit CyclicConfig(int n_photons)
      : CyclicConfig(n_photons,
                     std::vector<double>(static_cast<std::size_t>(
                                             n_photons < 0 ? 0 : n_photons),
                                         0.0)) {}

  CyclicConfig(int n_photons, std::vector<double> phases);

  int photons() const { return n_; }
  const std::vector<double>& phases() const { return phases_; }
  double total_phase() const;

 private:
  int n_ = 0;
  std::vector<double> phases_;
};

// One detector outcome per station: 0 upper, 1 lower.
class OutcomePattern {
 public:
  explicit OutcomePattern(std::vector<int> bits);

  // bit m of index is station m's outcome
  static OutcomePattern from_index(int n_stations, std::uint64_t index);

  int stations() const { return static_cast<int>(bits_.size()); }
  int weight() const;
  std::uint64_t index() const;
  const std::vector<int>& bits() const { return bits_; }

 private:
  std::vector<int> bits_;
};

// The N occupied rows of the K-port network unitary. Rows must be
// orthonormal; anything else is rejected as an invalid interferometer.
class InterferometerRows {
 public:
  explicit InterferometerRows(Eigen::MatrixXcd rows);

  Eigen::Index photons() const { return rows_.rows(); }
  Eigen::Index ports() const { return rows_.cols(); }
  const Eigen::MatrixXcd& matrix() const { return rows_; }

 private:
  Eigen::MatrixXcd rows_;
};

// Station index sets owned by the two parties; must partition 0..N-1.
struct StationPartition {
  std::vector<int> alice;
  std::vector<int> bob;
};

// Distribution of the merged two-outcome variables (a, b), conditioned on
// the coincidence event. Index 0 holds outcome +1, index 1 outcome -1.
struct MergedDistribution {
  std::array<std::array<double, 2>, 2> p{};

  double prob(int a, int b) const;  // a, b in {+1, -1}
  double correlator() const;        // sum of a*b*prob(a,b)
};

// Row m of the port unitary restricted to the occupied inputs: 1/2 and i/2
// on station m's two detectors, -e^{i phi}/2 and i e^{i phi}/2 on station
// (m+1)'s detectors, phi the phase of the arm into station m+1. Ports are
// numbered 2*station + detector.
InterferometerRows build_cyclic_rows(const CyclicConfig& config);

// Total probability that every station fires exactly once: 1/2^(N-1),
// independent of states and phases.
double coincidence_probability_total(int n_photons);

// P(o) = (1 + (-1)^(N+k) Re[V e^{-i phi}]) / 2^(2N-1) with k the outcome
// weight, phi the total phase and V the collective geometric factor of the
// inputs (tiny negative rounding is clamped to zero).
double outcome_probability(const CyclicConfig& config,
                           const std::vector<PureState>& states,
                           const OutcomePattern& o);
double outcome_probability(const CyclicConfig& config,
                           const std::vector<MixedState>& states,
                           const OutcomePattern& o);

// All 2^N coincidence outcome probabilities, indexed by OutcomePattern
// index. The entries sum to 1/2^(N-1).
std::vector<double> coincidence_distribution(
    const CyclicConfig& config, const std::vector<PureState>& states);
std::vector<double> coincidence_distribution(
    const CyclicConfig& config, const std::vector<MixedState>& states);

// Renormalized distribution of the per-party outcome parities, obtained by
// brute-force summation of the coincidence patterns. Requires even N and a
// partition with two nonempty sides.
MergedDistribution merged_outcome_distribution(
    const CyclicConfig& config, const std::vector<PureState>& states,
    const StationPartition& partition);
MergedDistribution merged_outcome_distribution(
    const CyclicConfig& config, const std::vector<MixedState>& states,
    const StationPartition& partition);

// <A B> over the merged distribution; equals Re[V e^{-i phi}] at even N
// (so Re[V] once the phases are calibrated to zero).
double parity_correlator(const CyclicConfig& config,
                         const std::vector<PureState>& states,
                         const StationPartition& partition);

}  // namespace cyclophase
