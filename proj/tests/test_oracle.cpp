#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <vector>

#include "cyclophase/cyclic.hpp"
#include "cyclophase/oracle.hpp"
#include "support/fock_reference.hpp"
#include "support/random_support.hpp"

using namespace cyclophase;
using testsupport::fock_port_probability;
using testsupport::fock_port_probability_mixed;
using testsupport::naive_permanent;
using testsupport::random_mixed_states;
using testsupport::random_pure_states;

namespace {

std::vector<double> random_phases(int n, std::mt19937_64& rng) {
  std::vector<double> phases(static_cast<std::size_t>(n));
  for (double& p : phases)
    p = uniform_in(rng, -std::numbers::pi, std::numbers::pi);
  return phases;
}

std::vector<Permutation> all_permutations(int n) {
  std::vector<int> map(static_cast<std::size_t>(n));
  std::iota(map.begin(), map.end(), 0);
  std::vector<Permutation> out;
  do {
    out.emplace_back(map);
  } while (std::next_permutation(map.begin(), map.end()));
  return out;
}

// the ungrouped double sum over permutation pairs, straight from the
// definition; exponentially slower than the library path it validates
double literal_pair_sum(const InterferometerRows& rows,
                        const std::vector<PureState>& states,
                        const OutputPortPattern& l) {
  const int n = static_cast<int>(rows.photons());
  const auto perms = all_permutations(n);
  Complex total(0.0, 0.0);
  for (const auto& tau : perms) {
    const Permutation tau_inv = tau.inverse();
    for (const auto& sigma : perms) {
      std::vector<int> nu(static_cast<std::size_t>(n));
      for (int k = 0; k < n; ++k) nu[static_cast<std::size_t>(k)] = tau_inv(sigma(k));
      Complex term = distinguishability_J(Permutation(nu), states);
      for (int k = 0; k < n; ++k) {
        const int lt = l.sorted_ports()[static_cast<std::size_t>(tau(k))];
        const int ls = l.sorted_ports()[static_cast<std::size_t>(sigma(k))];
        term *= std::conj(rows.matrix()(k, lt)) * rows.matrix()(k, ls);
      }
      total += term;
    }
  }
  return (total / l.multiplicity_factor()).real();
}

Eigen::MatrixXcd pattern_submatrix(const InterferometerRows& rows,
                                   const OutputPortPattern& l) {
  const int n = static_cast<int>(rows.photons());
  Eigen::MatrixXcd w(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      w(k, j) = rows.matrix()(k, l.sorted_ports()[static_cast<std::size_t>(j)]);
  return w;
}

InterferometerRows balanced_two_port() {
  Eigen::MatrixXcd u(2, 2);
  const double s = 1.0 / std::sqrt(2.0);
  u << Complex(s, 0.0), Complex(0.0, -s), Complex(0.0, -s), Complex(s, 0.0);
  return InterferometerRows(std::move(u));
}

}  // namespace

TEST_CASE("permutation basics") {
  CHECK_THROWS_AS(Permutation({0, 0, 1}), InvalidInputError);
  CHECK_THROWS_AS(Permutation({0, 3, 1}), InvalidInputError);
  CHECK_THROWS_AS(Permutation(std::vector<int>{}), InvalidInputError);
  const Permutation p({1, 2, 0});
  CHECK(p.size() == 3);
  CHECK(p(0) == 1);
  CHECK(p.inverse().mapping() == std::vector<int>{2, 0, 1});
  CHECK(Permutation::identity(4).mapping() == std::vector<int>{0, 1, 2, 3});
}

TEST_CASE("cycle decomposition is canonical") {
  using Cycles = std::vector<std::vector<int>>;
  CHECK(cycle_decomposition(Permutation({1, 0, 3, 2})) ==
        Cycles{{0, 1}, {2, 3}});
  CHECK(cycle_decomposition(Permutation::identity(3)) ==
        Cycles{{0}, {1}, {2}});
  CHECK(cycle_decomposition(Permutation({1, 2, 3, 0})) ==
        Cycles{{0, 1, 2, 3}});
  CHECK(cycle_decomposition(Permutation({2, 3, 4, 1, 0})) ==
        Cycles{{0, 2, 4}, {1, 3}});
}

TEST_CASE("distinguishability weights") {
  std::mt19937_64 rng(31);
  const int n = 4;
  const auto pure = random_pure_states(n, 3, rng);
  const auto mixed = random_mixed_states(n, 3, rng);
  std::vector<MixedState> proj;
  for (const auto& s : pure)
    proj.emplace_back((s.amplitudes() * s.amplitudes().adjoint()).eval());

  SUBCASE("identity gives one, everything stays in the unit disk") {
    CHECK(std::abs(distinguishability_J(Permutation::identity(n), pure) -
                   Complex(1.0, 0.0)) < 1e-12);
    CHECK(std::abs(distinguishability_J(Permutation::identity(n), mixed) -
                   Complex(1.0, 0.0)) < 1e-12);
    for (const auto& p : all_permutations(n)) {
      CHECK(std::abs(distinguishability_J(p, pure)) < 1.0 + 1e-12);
      CHECK(std::abs(distinguishability_J(p, mixed)) < 1.0 + 1e-12);
    }
  }
  SUBCASE("inverting the permutation conjugates the weight") {
    for (const auto& p : all_permutations(n)) {
      CHECK(std::abs(distinguishability_J(p.inverse(), mixed) -
                     std::conj(distinguishability_J(p, mixed))) < 1e-12);
    }
  }
  SUBCASE("projectors match the pure overlap route") {
    for (const auto& p : all_permutations(n)) {
      CHECK(std::abs(distinguishability_J(p, pure) -
                     distinguishability_J(p, proj)) < 1e-12);
    }
  }
  SUBCASE("identical states give one for every permutation") {
    const std::vector<PureState> same(n, pure.front());
    for (const auto& p : all_permutations(n))
      CHECK(std::abs(distinguishability_J(p, same) - Complex(1.0, 0.0)) <
            1e-12);
  }
  SUBCASE("orthogonal states kill every nontrivial permutation") {
    std::vector<PureState> basis;
    for (int k = 0; k < n; ++k) {
      Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
      e[k] = 1.0;
      basis.emplace_back(std::move(e));
    }
    for (const auto& p : all_permutations(n)) {
      const Complex j = distinguishability_J(p, basis);
      if (p.mapping() == Permutation::identity(n).mapping())
        CHECK(std::abs(j - Complex(1.0, 0.0)) < 1e-15);
      else
        CHECK(std::abs(j) < 1e-15);
    }
  }
  SUBCASE("the cyclic shift recovers the conjugate geometric factor") {
    std::vector<int> shift(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) shift[static_cast<std::size_t>(k)] = (k + 1) % n;
    const Complex v = geometric_factor(pure).value();
    CHECK(std::abs(distinguishability_J(Permutation(shift), pure) -
                   std::conj(v)) < 1e-12);
    const Complex vm = geometric_factor_mixed(mixed).value();
    CHECK(std::abs(distinguishability_J(Permutation(shift), mixed) -
                   std::conj(vm)) < 1e-12);
  }
  SUBCASE("state count and dimensions must line up") {
    CHECK_THROWS_AS(distinguishability_J(Permutation::identity(3), pure),
                    InvalidInputError);
    auto uneven = pure;
    uneven[1] = random_pure_state(2, rng);
    CHECK_THROWS_AS(distinguishability_J(Permutation::identity(n), uneven),
                    InvalidInputError);
  }
}

TEST_CASE("output port patterns") {
  const OutputPortPattern l({5, 0, 2, 0, 2, 0}, 6);
  CHECK(l.sorted_ports() == std::vector<int>{0, 0, 0, 2, 2, 5});
  CHECK(l.photons() == 6);
  CHECK(l.ports() == 6);
  CHECK(l.multiplicity_factor() == doctest::Approx(12.0));  // 3! * 2!
  CHECK_THROWS_AS(OutputPortPattern({0, 6}, 6), InvalidInputError);
  CHECK_THROWS_AS(OutputPortPattern({-1, 0}, 6), InvalidInputError);
  CHECK_THROWS_AS(OutputPortPattern({}, 6), InvalidInputError);

  SUBCASE("colex enumeration covers the multisets in order") {
    OutputPortPattern p = OutputPortPattern::first(2, 2);
    CHECK(p.sorted_ports() == std::vector<int>{0, 0});
    CHECK(p.next_colex());
    CHECK(p.sorted_ports() == std::vector<int>{0, 1});
    CHECK(p.next_colex());
    CHECK(p.sorted_ports() == std::vector<int>{1, 1});
    CHECK_FALSE(p.next_colex());

    OutputPortPattern q = OutputPortPattern::first(3, 6);
    int count = 1;
    auto prev = q.sorted_ports();
    while (q.next_colex()) {
      ++count;
      auto rev_prev = prev;
      auto rev_cur = q.sorted_ports();
      std::reverse(rev_prev.begin(), rev_prev.end());
      std::reverse(rev_cur.begin(), rev_cur.end());
      CHECK(std::lexicographical_compare(rev_prev.begin(), rev_prev.end(),
                                         rev_cur.begin(), rev_cur.end()));
      prev = q.sorted_ports();
    }
    CHECK(count == 56);  // C(6 + 3 - 1, 3)
    CHECK(prev == std::vector<int>{5, 5, 5});
  }
  SUBCASE("coincidence patterns place each photon at its station") {
    const OutputPortPattern c =
        OutputPortPattern::coincidence(OutcomePattern({1, 0, 1}));
    CHECK(c.sorted_ports() == std::vector<int>{1, 2, 5});
    CHECK(c.ports() == 6);
    CHECK(c.multiplicity_factor() == doctest::Approx(1.0));
  }
}

TEST_CASE("permanent implementations agree") {
  std::mt19937_64 rng(32);
  Eigen::MatrixXcd two(2, 2);
  two << Complex(1, 2), Complex(0, 1), Complex(3, -1), Complex(2, 0);
  CHECK(std::abs(detail::ryser_permanent(two) -
                 (two(0, 0) * two(1, 1) + two(0, 1) * two(1, 0))) < 1e-14);
  for (int n = 1; n <= 7; ++n) {
    CHECK(std::abs(detail::ryser_permanent(Eigen::MatrixXcd::Ones(n, n)) -
                   Complex(std::tgamma(n + 1.0), 0.0)) < 1e-9);
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = complex_gaussian(rng);
    const Complex ref = naive_permanent(a);
    CHECK(std::abs(detail::ryser_permanent(a) - ref) <=
          1e-12 * (1.0 + std::abs(ref)));
  }
  CHECK_THROWS_AS(detail::ryser_permanent(Eigen::MatrixXcd::Ones(2, 3)),
                  InvalidInputError);
}

TEST_CASE("two photons on a balanced coupler") {
  const InterferometerRows bs = balanced_two_port();
  const PureState e0(Eigen::Vector2cd(1.0, 0.0));
  const PureState e1(Eigen::Vector2cd(0.0, 1.0));
  const OutputPortPattern both_zero({0, 0}, 2);
  const OutputPortPattern split({0, 1}, 2);
  const OutputPortPattern both_one({1, 1}, 2);

  const std::vector<PureState> same{e0, e0};
  CHECK(output_probability(bs, same, split) == doctest::Approx(0.0));
  CHECK(output_probability(bs, same, both_zero) == doctest::Approx(0.5));
  CHECK(output_probability(bs, same, both_one) == doctest::Approx(0.5));

  const std::vector<PureState> orth{e0, e1};
  CHECK(output_probability(bs, orth, split) == doctest::Approx(0.5));
  CHECK(output_probability(bs, orth, both_zero) == doctest::Approx(0.25));
  CHECK(output_probability(bs, orth, both_one) == doctest::Approx(0.25));
}

TEST_CASE("grouped sum equals the literal pair sum") {
  std::mt19937_64 rng(33);
  for (int n : {2, 3, 4}) {
    const InterferometerRows rows =
        build_cyclic_rows(CyclicConfig(n, random_phases(n, rng)));
    const auto states = random_pure_states(static_cast<std::size_t>(n), 2, rng);
    OutputPortPattern l = OutputPortPattern::first(n, 2 * n);
    int checked = 0;
    do {
      if (checked++ % 7 != 0) continue;  // sample the pattern space
      const double lib = output_probability(rows, states, l);
      CHECK(lib == doctest::Approx(literal_pair_sum(rows, states, l))
                       .epsilon(1e-11));
    } while (l.next_colex());
  }
}

TEST_CASE("matches the brute-force mode expansion") {
  std::mt19937_64 rng(34);
  for (int n : {2, 3}) {
    const InterferometerRows rows =
        build_cyclic_rows(CyclicConfig(n, random_phases(n, rng)));

    SUBCASE("pure inputs") {
      const auto states = random_pure_states(static_cast<std::size_t>(n), 2, rng);
      std::vector<Eigen::VectorXcd> internals;
      for (const auto& s : states) internals.push_back(s.amplitudes());
      double mass = 0.0;
      for (const auto& [pattern, p] : full_distribution(rows, states, false)) {
        const double ref =
            fock_port_probability(rows.matrix(), internals,
                                  pattern.sorted_ports());
        CHECK(std::abs(p - ref) < 1e-10);
        mass += p;
      }
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    }
    SUBCASE("mixed inputs") {
      const auto states = random_mixed_states(static_cast<std::size_t>(n), 2, rng);
      double mass = 0.0;
      for (const auto& [pattern, p] : full_distribution(rows, states, false)) {
        const double ref = fock_port_probability_mixed(rows.matrix(), states,
                                                       pattern.sorted_ports());
        CHECK(std::abs(p - ref) < 1e-10);
        mass += p;
      }
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("bosonic and classical limits") {
  std::mt19937_64 rng(35);
  for (int n : {2, 3, 4, 5}) {
    const InterferometerRows rows =
        build_cyclic_rows(CyclicConfig(n, random_phases(n, rng)));

    SUBCASE("identical inputs reduce to a single permanent") {
      const std::vector<PureState> states(static_cast<std::size_t>(n),
                                          random_pure_state(3, rng));
      OutputPortPattern l = OutputPortPattern::first(n, 2 * n);
      int checked = 0;
      do {
        if (checked++ % 11 != 0) continue;
        const Eigen::MatrixXcd w = pattern_submatrix(rows, l);
        const double ref =
            std::norm(naive_permanent(w)) / l.multiplicity_factor();
        CHECK(std::abs(output_probability(rows, states, l) - ref) < 1e-10);
      } while (l.next_colex());
    }
    SUBCASE("orthogonal inputs reduce to the classical transfer permanent") {
      std::vector<PureState> states;
      for (int k = 0; k < n; ++k) {
        Eigen::VectorXcd e = Eigen::VectorXcd::Zero(n);
        e[k] = 1.0;
        states.emplace_back(std::move(e));
      }
      OutputPortPattern l = OutputPortPattern::first(n, 2 * n);
      int checked = 0;
      do {
        if (checked++ % 11 != 0) continue;
        const Eigen::MatrixXcd w = pattern_submatrix(rows, l);
        const Eigen::MatrixXcd b = w.cwiseAbs2();
        const double ref =
            naive_permanent(b).real() / l.multiplicity_factor();
        CHECK(std::abs(output_probability(rows, states, l) - ref) < 1e-10);
      } while (l.next_colex());
    }
  }
}

TEST_CASE("probabilities only see the internal states through overlaps") {
  std::mt19937_64 rng(36);
  const int n = 3;
  const InterferometerRows rows =
      build_cyclic_rows(CyclicConfig(n, random_phases(n, rng)));
  const auto states = random_pure_states(n, 3, rng);
  const Eigen::MatrixXcd u = testsupport::haar_unitary(3, rng);
  std::vector<PureState> rotated;
  for (const auto& s : states)
    rotated.emplace_back((u * s.amplitudes()).eval());
  const auto da = full_distribution(rows, states, false);
  const auto db = full_distribution(rows, rotated, false);
  REQUIRE(da.size() == db.size());
  for (std::size_t i = 0; i < da.size(); ++i)
    CHECK(std::abs(da[i].second - db[i].second) < 1e-10);
}

TEST_CASE("agrees with the closed form on the coincidence sector") {
  std::mt19937_64 rng(37);
  for (int n : {2, 3, 4}) {
    const auto phases = random_phases(n, rng);
    const CyclicConfig config(n, phases);
    const InterferometerRows rows = build_cyclic_rows(config);

    const auto pure = random_pure_states(static_cast<std::size_t>(n), 2, rng);
    const auto closed = coincidence_distribution(config, pure);
    const auto oracle = full_distribution(rows, pure, true);
    REQUIRE(oracle.size() == closed.size());
    double mass = 0.0;
    for (std::size_t idx = 0; idx < closed.size(); ++idx) {
      CHECK(std::abs(oracle[idx].second - closed[idx]) < 1e-10);
      mass += oracle[idx].second;
    }
    CHECK(mass == doctest::Approx(coincidence_probability_total(n))
                      .epsilon(1e-10));

    const auto mixed = random_mixed_states(static_cast<std::size_t>(n), 2, rng);
    const auto closed_m = coincidence_distribution(config, mixed);
    const auto oracle_m = full_distribution(rows, mixed, true);
    for (std::size_t idx = 0; idx < closed_m.size(); ++idx)
      CHECK(std::abs(oracle_m[idx].second - closed_m[idx]) < 1e-10);
  }
}

TEST_CASE("phase sign convention is fixed by a single loop phase") {
  // one nonzero phase and a state chain with a complex geometric factor:
  // any sign slip in e^{-i phi} shows up immediately
  std::mt19937_64 rng(38);
  const CyclicConfig config(3, {0.9, 0.0, 0.0});
  const InterferometerRows rows = build_cyclic_rows(config);
  const auto states = random_pure_states(3, 2, rng);
  const auto closed = coincidence_distribution(config, states);
  const auto oracle = full_distribution(rows, states, true);
  for (std::size_t idx = 0; idx < closed.size(); ++idx)
    CHECK(std::abs(oracle[idx].second - closed[idx]) < 1e-10);
}

TEST_CASE("imaginary parts are rounding residue only") {
  std::mt19937_64 rng(39);
  const int n = 4;
  const InterferometerRows rows =
      build_cyclic_rows(CyclicConfig(n, random_phases(n, rng)));
  const auto pure = random_pure_states(n, 2, rng);
  const auto mixed = random_mixed_states(n, 2, rng);
  OutputPortPattern l = OutputPortPattern::first(n, 2 * n);
  int checked = 0;
  do {
    if (checked++ % 13 != 0) continue;
    CHECK(std::abs(output_probability_complex(rows, pure, l).imag()) <
          kImagResidueTol);
    CHECK(std::abs(output_probability_complex(rows, mixed, l).imag()) <
          kImagResidueTol);
  } while (l.next_colex());
}

TEST_CASE("capacity and shape guards") {
  std::mt19937_64 rng(40);
  const int n = 3;
  const InterferometerRows rows = build_cyclic_rows(CyclicConfig(n));
  const auto states = random_pure_states(n, 2, rng);
  OracleOptions tight;
  tight.max_photons = 2;
  CHECK_THROWS_AS(
      output_probability(rows, states, OutputPortPattern::first(n, 2 * n),
                         tight),
      CapacityError);
  CHECK_THROWS_AS(full_distribution(rows, states, false, tight),
                  CapacityError);
  CHECK_THROWS_AS(
      output_probability(rows, random_pure_states(2, 2, rng),
                         OutputPortPattern::first(n, 2 * n)),
      InvalidInputError);
  CHECK_THROWS_AS(
      output_probability(rows, states, OutputPortPattern::first(2, 2 * n)),
      InvalidInputError);
  CHECK_THROWS_AS(
      output_probability(rows, states, OutputPortPattern::first(n, n)),
      InvalidInputError);
  CHECK_THROWS_AS(full_distribution(balanced_two_port(),
                                    random_pure_states(2, 2, rng), true),
                  InvalidInputError);
}
