// Brute-force output statistics of a fixed linear network with partially
// distinguishable photons: a double sum over permutation pairs weighted by
// the distinguishability function J of the internal states. Exponentially
// expensive and deliberately independent of the closed-form module, for
// which it serves as ground truth.
#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cyclophase/common.hpp"
#include "cyclophase/cyclic.hpp"
#include "cyclophase/states.hpp"

namespace cyclophase {

class Permutation {
 public:
  explicit Permutation(std::vector<int> mapping);
  static Permutation identity(int n);

  int size() const { return static_cast<int>(map_.size()); }
  int operator()(int k) const { return map_[static_cast<std::size_t>(k)]; }
  const std::vector<int>& mapping() const { return map_; }
  Permutation inverse() const;

 private:
  std::vector<int> map_;
};

// Disjoint cycles of p, each starting at its smallest element, listed in
// increasing order of that element. Fixed points appear as 1-cycles.
std::vector<std::vector<int>> cycle_decomposition(const Permutation& p);

// J(p) = product over cycles (k1 k2 ... kr) of tr[rho_kr ... rho_k2 rho_k1].
// J(identity) = 1, |J| <= 1, and J(p^-1) = conj(J(p)).
Complex distinguishability_J(const Permutation& p,
                             const std::vector<MixedState>& states);
Complex distinguishability_J(const Permutation& p,
                             const std::vector<PureState>& states);

// Multiset of N output ports (repeats = several photons in one port),
// stored sorted ascending, enumerable in colexicographic order.
class OutputPortPattern {
 public:
  OutputPortPattern(std::vector<int> ports, int n_ports);

  static OutputPortPattern first(int n_photons, int n_ports);
  // one-photon-per-station pattern of the cyclic network: port 2m + o_m
  static OutputPortPattern coincidence(const OutcomePattern& outcomes);

  int photons() const { return static_cast<int>(ports_.size()); }
  int ports() const { return n_ports_; }
  const std::vector<int>& sorted_ports() const { return ports_; }

  // M(l): product of the factorials of the port occupations
  double multiplicity_factor() const;

  // advance to the colex successor; false once the last pattern is passed
  bool next_colex();

 private:
  std::vector<int> ports_;
  int n_ports_ = 0;
};

struct OracleOptions {
  // (N!)^2 terms: 8 is the practical ceiling on desktop hardware
  int max_photons = 8;
};

// P(l) = (1/M(l)) sum over permutation pairs (tau, sigma) of
// J(tau^-1 sigma) prod_k U*_{k, l_tau(k)} U_{k, l_sigma(k)}, evaluated by
// grouping over nu = tau^-1 sigma; the inner tau sum is a permanent.
double output_probability(const InterferometerRows& rows,
                          const std::vector<MixedState>& states,
                          const OutputPortPattern& l,
                          const OracleOptions& options = {});
double output_probability(const InterferometerRows& rows,
                          const std::vector<PureState>& states,
                          const OutputPortPattern& l,
                          const OracleOptions& options = {});

// The same sum before the imaginary residue (a pure rounding artifact, the
// tau/sigma swap conjugates terms) is discarded. Diagnostic, used by tests.
Complex output_probability_complex(const InterferometerRows& rows,
                                   const std::vector<MixedState>& states,
                                   const OutputPortPattern& l,
                                   const OracleOptions& options = {});
Complex output_probability_complex(const InterferometerRows& rows,
                                   const std::vector<PureState>& states,
                                   const OutputPortPattern& l,
                                   const OracleOptions& options = {});

// Probabilities for every output pattern in colex order, or for the 2^N
// one-per-station patterns (in OutcomePattern index order) when restricted.
std::vector<std::pair<OutputPortPattern, double>> full_distribution(
    const InterferometerRows& rows, const std::vector<MixedState>& states,
    bool restrict_to_coincidence, const OracleOptions& options = {});
std::vector<std::pair<OutputPortPattern, double>> full_distribution(
    const InterferometerRows& rows, const std::vector<PureState>& states,
    bool restrict_to_coincidence, const OracleOptions& options = {});

namespace detail {

// Ryser's inclusion-exclusion permanent with Gray-code column updates,
// O(2^n n). Used by the oracle sum; exposed for direct testing.
Complex ryser_permanent(const Eigen::MatrixXcd& z);

}  // namespace detail

}  // namespace cyclophase
