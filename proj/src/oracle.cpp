#include "cyclophase/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <string>

namespace cyclophase {

namespace {

void require_same_dims(Eigen::Index expected, Eigen::Index actual) {
  if (expected != actual) {
    throw InvalidInputError("all internal states must share one dimension");
  }
}

// J(p) via one walk over the cycles; eval(cycle) supplies the trace of the
// state product along that cycle.
template <typename Eval>
Complex j_from_cycles(const Permutation& p, Eval&& eval) {
  Complex j(1.0, 0.0);
  for (const auto& cycle : cycle_decomposition(p)) {
    j *= eval(cycle);
  }
  return j;
}

// Permutations of {0..n-1} visited by std::next_permutation starting from
// the identity, i.e. lexicographic order. Both the table builder and the
// pattern sum rely on this shared convention.
template <typename States>
std::vector<Complex> j_table_lex(const States& states) {
  const int n = static_cast<int>(states.size());
  std::vector<int> nu(static_cast<std::size_t>(n));
  std::iota(nu.begin(), nu.end(), 0);
  std::vector<Complex> table;
  do {
    table.push_back(distinguishability_J(Permutation(nu), states));
  } while (std::next_permutation(nu.begin(), nu.end()));
  return table;
}

// sum over nu of J(nu) perm(Z), Z_{k,j} = conj(W_{k,j}) W_{nu^-1(k),j},
// W_{k,j} = U_{k, l_j}. Grouping the (tau, sigma) double sum over
// nu = tau^-1 sigma turns the inner sum into a permanent.
Complex pattern_sum(const Eigen::MatrixXcd& u, const std::vector<int>& ports,
                    const std::vector<Complex>& j_table) {
  const int n = static_cast<int>(u.rows());
  Eigen::MatrixXcd w(n, n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      w(k, j) = u(k, ports[static_cast<std::size_t>(j)]);
    }
  }
  std::vector<int> nu(static_cast<std::size_t>(n));
  std::vector<int> inv(static_cast<std::size_t>(n));
  std::iota(nu.begin(), nu.end(), 0);
  Eigen::MatrixXcd z(n, n);
  Complex total(0.0, 0.0);
  std::size_t index = 0;
  do {
    const Complex j = j_table[index++];
    // exact zeros only (orthogonal internal states); keeps the summation
    // order of the surviving terms fixed
    if (j == Complex(0.0, 0.0)) {
      continue;
    }
    for (int k = 0; k < n; ++k) {
      inv[static_cast<std::size_t>(nu[static_cast<std::size_t>(k)])] = k;
    }
    for (int k = 0; k < n; ++k) {
      for (int c = 0; c < n; ++c) {
        z(k, c) = std::conj(w(k, c)) * w(inv[static_cast<std::size_t>(k)], c);
      }
    }
    total += j * detail::ryser_permanent(z);
  } while (std::next_permutation(nu.begin(), nu.end()));
  return total;
}

template <typename States>
Complex probability_complex_impl(const InterferometerRows& rows,
                                 const States& states,
                                 const OutputPortPattern& l,
                                 const OracleOptions& options) {
  const int n = static_cast<int>(rows.photons());
  if (n > options.max_photons) {
    throw CapacityError("oracle limited to " +
                        std::to_string(options.max_photons) +
                        " photons, got " + std::to_string(n));
  }
  if (static_cast<int>(states.size()) != n) {
    throw InvalidInputError("need one internal state per photon");
  }
  if (l.photons() != n || l.ports() != rows.ports()) {
    throw InvalidInputError("output pattern does not match the network");
  }
  const auto j_table = j_table_lex(states);
  return pattern_sum(rows.matrix(), l.sorted_ports(), j_table) /
         l.multiplicity_factor();
}

double to_probability(const Complex& raw) {
  return std::clamp(raw.real(), 0.0, 1.0);
}

template <typename States>
std::vector<std::pair<OutputPortPattern, double>> full_distribution_impl(
    const InterferometerRows& rows, const States& states,
    bool restrict_to_coincidence, const OracleOptions& options) {
  const int n = static_cast<int>(rows.photons());
  if (n > options.max_photons) {
    throw CapacityError("oracle limited to " +
                        std::to_string(options.max_photons) +
                        " photons, got " + std::to_string(n));
  }
  if (static_cast<int>(states.size()) != n) {
    throw InvalidInputError("need one internal state per photon");
  }
  const auto j_table = j_table_lex(states);
  std::vector<std::pair<OutputPortPattern, double>> result;
  const auto append = [&](OutputPortPattern pattern) {
    const Complex raw =
        pattern_sum(rows.matrix(), pattern.sorted_ports(), j_table) /
        pattern.multiplicity_factor();
    result.emplace_back(std::move(pattern), to_probability(raw));
  };
  if (restrict_to_coincidence) {
    if (rows.ports() != 2 * n) {
      throw InvalidInputError(
          "coincidence restriction needs two ports per photon");
    }
    for (std::uint64_t index = 0; index < (std::uint64_t{1} << n); ++index) {
      append(OutputPortPattern::coincidence(OutcomePattern::from_index(
          n, index)));
    }
  } else {
    OutputPortPattern pattern = OutputPortPattern::first(n, rows.ports());
    do {
      append(pattern);
    } while (pattern.next_colex());
  }
  return result;
}

}  // namespace

Permutation::Permutation(std::vector<int> mapping) : map_(std::move(mapping)) {
  if (map_.empty()) {
    throw InvalidInputError("permutation must act on at least one element");
  }
  std::vector<bool> seen(map_.size(), false);
  for (const int v : map_) {
    if (v < 0 || v >= size() || seen[static_cast<std::size_t>(v)]) {
      throw InvalidInputError("mapping is not a bijection on 0..n-1");
    }
    seen[static_cast<std::size_t>(v)] = true;
  }
}

Permutation Permutation::identity(int n) {
  if (n < 1) {
    throw InvalidInputError("permutation must act on at least one element");
  }
  std::vector<int> map(static_cast<std::size_t>(n));
  std::iota(map.begin(), map.end(), 0);
  return Permutation(std::move(map));
}

Permutation Permutation::inverse() const {
  std::vector<int> inv(map_.size());
  for (int k = 0; k < size(); ++k) {
    inv[static_cast<std::size_t>(map_[static_cast<std::size_t>(k)])] = k;
  }
  return Permutation(std::move(inv));
}

std::vector<std::vector<int>> cycle_decomposition(const Permutation& p) {
  const int n = p.size();
  std::vector<bool> visited(static_cast<std::size_t>(n), false);
  std::vector<std::vector<int>> cycles;
  for (int start = 0; start < n; ++start) {
    if (visited[static_cast<std::size_t>(start)]) {
      continue;
    }
    std::vector<int> cycle;
    int k = start;
    do {
      visited[static_cast<std::size_t>(k)] = true;
      cycle.push_back(k);
      k = p(k);
    } while (k != start);
    cycles.push_back(std::move(cycle));
  }
  return cycles;
}

Complex distinguishability_J(const Permutation& p,
                             const std::vector<MixedState>& states) {
  if (static_cast<int>(states.size()) != p.size()) {
    throw InvalidInputError("need one internal state per photon");
  }
  for (const auto& s : states) {
    require_same_dims(states.front().dim(), s.dim());
  }
  return j_from_cycles(p, [&](const std::vector<int>& cycle) {
    // tr[rho_kr ... rho_k2 rho_k1] built by left-multiplication
    Eigen::MatrixXcd acc =
        states[static_cast<std::size_t>(cycle.front())].density();
    for (std::size_t i = 1; i < cycle.size(); ++i) {
      acc = states[static_cast<std::size_t>(cycle[i])].density() * acc;
    }
    return acc.trace();
  });
}

Complex distinguishability_J(const Permutation& p,
                             const std::vector<PureState>& states) {
  if (static_cast<int>(states.size()) != p.size()) {
    throw InvalidInputError("need one internal state per photon");
  }
  for (const auto& s : states) {
    require_same_dims(states.front().dim(), s.dim());
  }
  return j_from_cycles(p, [&](const std::vector<int>& cycle) {
    // projector product trace = product of overlaps along the cycle
    Complex term(1.0, 0.0);
    const std::size_t r = cycle.size();
    for (std::size_t i = 0; i < r; ++i) {
      const auto& bra = states[static_cast<std::size_t>(cycle[(i + 1) % r])];
      const auto& ket = states[static_cast<std::size_t>(cycle[i])];
      term *= bra.amplitudes().dot(ket.amplitudes());
    }
    return term;
  });
}

OutputPortPattern::OutputPortPattern(std::vector<int> ports, int n_ports)
    : ports_(std::move(ports)), n_ports_(n_ports) {
  if (ports_.empty()) {
    throw InvalidInputError("output pattern needs at least one photon");
  }
  std::sort(ports_.begin(), ports_.end());
  if (ports_.front() < 0 || ports_.back() >= n_ports_) {
    throw InvalidInputError("output port index out of range");
  }
}

OutputPortPattern OutputPortPattern::first(int n_photons, int n_ports) {
  if (n_photons < 1) {
    throw InvalidInputError("output pattern needs at least one photon");
  }
  return OutputPortPattern(std::vector<int>(static_cast<std::size_t>(n_photons), 0),
                           n_ports);
}

OutputPortPattern OutputPortPattern::coincidence(
    const OutcomePattern& outcomes) {
  const int n = outcomes.stations();
  std::vector<int> ports(static_cast<std::size_t>(n));
  for (int m = 0; m < n; ++m) {
    ports[static_cast<std::size_t>(m)] =
        2 * m + outcomes.bits()[static_cast<std::size_t>(m)];
  }
  return OutputPortPattern(std::move(ports), 2 * n);
}

double OutputPortPattern::multiplicity_factor() const {
  double factor = 1.0;
  std::size_t i = 0;
  while (i < ports_.size()) {
    std::size_t j = i;
    while (j < ports_.size() && ports_[j] == ports_[i]) {
      ++j;
    }
    for (std::size_t occ = 2; occ <= j - i; ++occ) {
      factor *= static_cast<double>(occ);
    }
    i = j;
  }
  return factor;
}

bool OutputPortPattern::next_colex() {
  const int n = photons();
  int i = 0;
  while (i < n) {
    const int limit =
        (i + 1 < n) ? ports_[static_cast<std::size_t>(i + 1)] : n_ports_ - 1;
    if (ports_[static_cast<std::size_t>(i)] < limit) {
      break;
    }
    ++i;
  }
  if (i == n) {
    return false;
  }
  ++ports_[static_cast<std::size_t>(i)];
  std::fill(ports_.begin(), ports_.begin() + i, 0);
  return true;
}

double output_probability(const InterferometerRows& rows,
                          const std::vector<MixedState>& states,
                          const OutputPortPattern& l,
                          const OracleOptions& options) {
  return to_probability(probability_complex_impl(rows, states, l, options));
}

double output_probability(const InterferometerRows& rows,
                          const std::vector<PureState>& states,
                          const OutputPortPattern& l,
                          const OracleOptions& options) {
  return to_probability(probability_complex_impl(rows, states, l, options));
}

Complex output_probability_complex(const InterferometerRows& rows,
                                   const std::vector<MixedState>& states,
                                   const OutputPortPattern& l,
                                   const OracleOptions& options) {
  return probability_complex_impl(rows, states, l, options);
}

Complex output_probability_complex(const InterferometerRows& rows,
                                   const std::vector<PureState>& states,
                                   const OutputPortPattern& l,
                                   const OracleOptions& options) {
  return probability_complex_impl(rows, states, l, options);
}

std::vector<std::pair<OutputPortPattern, double>> full_distribution(
    const InterferometerRows& rows, const std::vector<MixedState>& states,
    bool restrict_to_coincidence, const OracleOptions& options) {
  return full_distribution_impl(rows, states, restrict_to_coincidence,
                                options);
}

std::vector<std::pair<OutputPortPattern, double>> full_distribution(
    const InterferometerRows& rows, const std::vector<PureState>& states,
    bool restrict_to_coincidence, const OracleOptions& options) {
  return full_distribution_impl(rows, states, restrict_to_coincidence,
                                options);
}

namespace detail {

Complex ryser_permanent(const Eigen::MatrixXcd& z) {
  const int n = static_cast<int>(z.rows());
  if (n < 1 || z.cols() != n) {
    throw InvalidInputError("permanent needs a nonempty square matrix");
  }
  if (n > 62) {
    throw CapacityError("permanent limited to 62 columns");
  }
  // perm(A) = (-1)^n sum over nonempty column subsets S of
  // (-1)^|S| prod_i sum_{j in S} a_ij; Gray code updates one column per step
  std::vector<Complex> row_sums(static_cast<std::size_t>(n), Complex(0.0, 0.0));
  Complex total(0.0, 0.0);
  std::uint64_t gray = 0;
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t s = 1; s < count; ++s) {
    const std::uint64_t next = s ^ (s >> 1);
    const std::uint64_t diff = next ^ gray;
    const int col = std::countr_zero(diff);
    if ((next & diff) != 0) {
      for (int k = 0; k < n; ++k) {
        row_sums[static_cast<std::size_t>(k)] += z(k, col);
      }
    } else {
      for (int k = 0; k < n; ++k) {
        row_sums[static_cast<std::size_t>(k)] -= z(k, col);
      }
    }
    gray = next;
    Complex prod(1.0, 0.0);
    for (int k = 0; k < n; ++k) {
      prod *= row_sums[static_cast<std::size_t>(k)];
    }
    if (((n - std::popcount(next)) & 1) != 0) {
      total -= prod;
    } else {
      total += prod;
    }
  }
  return total;
}

}  // namespace detail

}  // namespace cyclophase
