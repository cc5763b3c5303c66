#include "cyclophase/cyclic.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace cyclophase {

namespace {

// Brute-force enumeration of 2^N patterns; beyond this the closed form is
// still fine per pattern, but whole-distribution ops refuse.
constexpr int kMaxEnumeratedStations = 24;

double closed_form_probability(int n, int k, double total_phase,
                               Complex factor) {
  const double re = (factor * std::polar(1.0, -total_phase)).real();
  const double sign = ((n + k) % 2 == 0) ? 1.0 : -1.0;
  const double p = std::ldexp(1.0 + sign * re, -(2 * n - 1));
  return p > 0.0 ? p : 0.0;
}

template <typename StateT>
Complex chain_factor(const std::vector<StateT>& states);

template <>
Complex chain_factor(const std::vector<PureState>& states) {
  return geometric_factor(states).value();
}

template <>
Complex chain_factor(const std::vector<MixedState>& states) {
  return geometric_factor_mixed(states).value();
}

template <typename StateT>
void require_state_count(const CyclicConfig& config,
                         const std::vector<StateT>& states) {
  if (static_cast<int>(states.size()) != config.photons())
    throw InvalidInputError("cyclic: need one input state per station");
}

void require_enumerable(int n) {
  if (n > kMaxEnumeratedStations)
    throw CapacityError("cyclic: pattern enumeration capped at 24 stations");
}

std::uint64_t partition_mask(const StationPartition& partition, int n,
                             bool alice) {
  const std::vector<int>& side = alice ? partition.alice : partition.bob;
  std::uint64_t mask = 0;
  for (int s : side) {
    if (s < 0 || s >= n)
      throw InvalidInputError("cyclic: partition station index out of range");
    const std::uint64_t bit = std::uint64_t{1} << s;
    if (mask & bit)
      throw InvalidInputError("cyclic: partition repeats a station");
    mask |= bit;
  }
  return mask;
}

template <typename StateT>
MergedDistribution merged_impl(const CyclicConfig& config,
                               const std::vector<StateT>& states,
                               const StationPartition& partition) {
  const int n = config.photons();
  if (n % 2 != 0)
    throw InvalidInputError("cyclic: merged outcomes need an even N");
  require_state_count(config, states);
  require_enumerable(n);
  if (partition.alice.empty() || partition.bob.empty())
    throw InvalidInputError("cyclic: both parties need at least one station");
  const std::uint64_t mask_a = partition_mask(partition, n, true);
  const std::uint64_t mask_b = partition_mask(partition, n, false);
  if (mask_a & mask_b)
    throw InvalidInputError("cyclic: partition sides overlap");
  if ((mask_a | mask_b) != ((std::uint64_t{1} << n) - 1))
    throw InvalidInputError("cyclic: partition must cover every station");

  const Complex v = chain_factor(states);
  const double phi = config.total_phase();

  MergedDistribution merged;
  for (std::uint64_t idx = 0; idx < (std::uint64_t{1} << n); ++idx) {
    const int k = std::popcount(idx);
    const double p = closed_form_probability(n, k, phi, v);
    const int a = std::popcount(idx & mask_a) & 1;  // 0 -> +1, 1 -> -1
    const int b = std::popcount(idx & mask_b) & 1;
    merged.p[a][b] += p;
  }
  const double total = coincidence_probability_total(n);
  for (auto& row : merged.p)
    for (double& q : row) q /= total;
  return merged;
}

template <typename StateT>
std::vector<double> distribution_impl(const CyclicConfig& config,
                                      const std::vector<StateT>& states) {
  require_state_count(config, states);
  const int n = config.photons();
  require_enumerable(n);
  const Complex v = chain_factor(states);
  const double phi = config.total_phase();
  std::vector<double> out(std::size_t{1} << n);
  for (std::uint64_t idx = 0; idx < out.size(); ++idx)
    out[idx] = closed_form_probability(n, std::popcount(idx), phi, v);
  return out;
}

}  // namespace

CyclicConfig::CyclicConfig(int n_photons, std::vector<double> phases)
    : n_(n_photons), phases_(std::move(phases)) {
  if (n_ < 2) throw InvalidInputError("cyclic: need at least two stations");
  if (static_cast<int>(phases_.size()) != n_)
    throw InvalidInputError("cyclic: need one phase per station");
  for (double p : phases_)
    if (!std::isfinite(p))
      throw InvalidInputError("cyclic: phases must be finite");
}

double CyclicConfig::total_phase() const {
  double sum = 0.0;
  for (double p : phases_) sum += p;
  return sum;
}

OutcomePattern::OutcomePattern(std::vector<int> bits) : bits_(std::move(bits)) {
  if (bits_.empty())
    throw InvalidInputError("outcome pattern: empty bit list");
  for (int b : bits_)
    if (b != 0 && b != 1)
      throw InvalidInputError("outcome pattern: outcomes are 0 or 1");
}

OutcomePattern OutcomePattern::from_index(int n_stations,
                                          std::uint64_t index) {
  if (n_stations < 1 || n_stations > 63)
    throw InvalidInputError("outcome pattern: unsupported station count");
  if (index >> n_stations)
    throw InvalidInputError("outcome pattern: index out of range");
  std::vector<int> bits(static_cast<std::size_t>(n_stations));
  for (int m = 0; m < n_stations; ++m)
    bits[static_cast<std::size_t>(m)] = static_cast<int>((index >> m) & 1);
  return OutcomePattern(std::move(bits));
}

int OutcomePattern::weight() const {
  int k = 0;
  for (int b : bits_) k += b;
  return k;
}

std::uint64_t OutcomePattern::index() const {
  std::uint64_t idx = 0;
  for (std::size_t m = 0; m < bits_.size(); ++m)
    idx |= static_cast<std::uint64_t>(bits_[m]) << m;
  return idx;
}

InterferometerRows::InterferometerRows(Eigen::MatrixXcd rows)
    : rows_(std::move(rows)) {
  if (rows_.rows() < 1 || rows_.cols() < rows_.rows())
    throw InvalidInterferometerError(
        "interferometer rows: need N rows over at least N ports");
  const Eigen::MatrixXcd gram = rows_ * rows_.adjoint();
  const double residue =
      (gram - Eigen::MatrixXcd::Identity(rows_.rows(), rows_.rows()))
          .cwiseAbs()
          .maxCoeff();
  if (residue > kOrthonormalTol)
    throw InvalidInterferometerError(
        "interferometer rows: rows are not orthonormal");
}

double MergedDistribution::prob(int a, int b) const {
  if ((a != 1 && a != -1) || (b != 1 && b != -1))
    throw InvalidInputError("merged distribution: outcomes are +1 or -1");
  return p[a == 1 ? 0 : 1][b == 1 ? 0 : 1];
}

double MergedDistribution::correlator() const {
  return p[0][0] - p[0][1] - p[1][0] + p[1][1];
}

InterferometerRows build_cyclic_rows(const CyclicConfig& config) {
  const int n = config.photons();
  Eigen::MatrixXcd rows = Eigen::MatrixXcd::Zero(n, 2 * n);
  for (int m = 0; m < n; ++m) {
    const int next = (m + 1) % n;
    const Complex loop =
        std::polar(0.5, config.phases()[static_cast<std::size_t>(next)]);
    rows(m, 2 * m) = Complex(0.5, 0.0);
    rows(m, 2 * m + 1) = Complex(0.0, 0.5);
    rows(m, 2 * next) = -loop;
    rows(m, 2 * next + 1) = Complex(0.0, 1.0) * loop;
  }
  return InterferometerRows(std::move(rows));
}

double coincidence_probability_total(int n_photons) {
  if (n_photons < 2)
    throw InvalidInputError("cyclic: need at least two stations");
  return std::ldexp(1.0, -(n_photons - 1));
}

double outcome_probability(const CyclicConfig& config,
                           const std::vector<PureState>& states,
                           const OutcomePattern& o) {
  require_state_count(config, states);
  if (o.stations() != config.photons())
    throw InvalidInputError("cyclic: outcome pattern length mismatch");
  return closed_form_probability(config.photons(), o.weight(),
                                 config.total_phase(), chain_factor(states));
}

double outcome_probability(const CyclicConfig& config,
                           const std::vector<MixedState>& states,
                           const OutcomePattern& o) {
  require_state_count(config, states);
  if (o.stations() != config.photons())
    throw InvalidInputError("cyclic: outcome pattern length mismatch");
  return closed_form_probability(config.photons(), o.weight(),
                                 config.total_phase(), chain_factor(states));
}

std::vector<double> coincidence_distribution(
    const CyclicConfig& config, const std::vector<PureState>& states) {
  return distribution_impl(config, states);
}

std::vector<double> coincidence_distribution(
    const CyclicConfig& config, const std::vector<MixedState>& states) {
  return distribution_impl(config, states);
}

MergedDistribution merged_outcome_distribution(
    const CyclicConfig& config, const std::vector<PureState>& states,
    const StationPartition& partition) {
  return merged_impl(config, states, partition);
}

MergedDistribution merged_outcome_distribution(
    const CyclicConfig& config, const std::vector<MixedState>& states,
    const StationPartition& partition) {
  return merged_impl(config, states, partition);
}

double parity_correlator(const CyclicConfig& config,
                         const std::vector<PureState>& states,
                         const StationPartition& partition) {
  return merged_outcome_distribution(config, states, partition).correlator();
}

}  // namespace cyclophase
