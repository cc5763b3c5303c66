// Shared helpers for the test binaries: Haar unitaries, random state lists,
// angle wrapping. Test-only code, deliberately independent of the library's
// production paths where it serves as a cross-check.
#pragma once

#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/QR>

#include "cyclophase/common.hpp"
#include "cyclophase/states.hpp"

namespace testsupport {

// Haar-distributed unitary via QR of a complex Gaussian matrix with the
// standard phase fix on the diagonal of R.
inline Eigen::MatrixXcd haar_unitary(Eigen::Index n, std::mt19937_64& rng) {
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      g(i, j) = cyclophase::complex_gaussian(rng);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR();
  for (Eigen::Index j = 0; j < n; ++j) {
    const cyclophase::Complex d = r(j, j);
    const double a = std::abs(d);
    if (a > 0) q.col(j) *= d / a;
  }
  return q;
}

inline std::vector<cyclophase::PureState> random_pure_states(
    std::size_t count, Eigen::Index dim, std::mt19937_64& rng) {
  std::vector<cyclophase::PureState> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(cyclophase::random_pure_state(dim, rng));
  return out;
}

inline std::vector<cyclophase::MixedState> random_mixed_states(
    std::size_t count, Eigen::Index dim, std::mt19937_64& rng) {
  std::vector<cyclophase::MixedState> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i)
    out.push_back(cyclophase::random_mixed_state(dim, dim, rng));
  return out;
}

// wrap to (-pi, pi]
inline double wrap_angle(double a) {
  constexpr double two_pi = 2 * std::numbers::pi;
  a = std::fmod(a, two_pi);
  if (a <= -std::numbers::pi) a += two_pi;
  if (a > std::numbers::pi) a -= two_pi;
  return a;
}

}  // namespace testsupport
