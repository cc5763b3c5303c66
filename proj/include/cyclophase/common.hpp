// Shared basics: scalar aliases, error taxonomy, tolerances and the
// deterministic sampling helpers used across the library.
#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace cyclophase {

using Complex = std::complex<double>;

inline constexpr const char* kVersion = "0.1.0";

// Numerical contracts shared between modules. Validation tolerances are
// deliberately loose relative to double precision; identity tolerances are
// what the corresponding algebraic statements are tested at.
inline constexpr double kUnitNormTol = 1e-12;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kPsdTol = -1e-10;
inline constexpr double kOrthonormalTol = 1e-12;
inline constexpr double kPhaseUndefinedTol = 1e-12;
inline constexpr double kVisibilityTol = 1e-9;
inline constexpr double kImagResidueTol = 1e-10;
inline constexpr double kDistributionMassTol = 1e-10;

// Rejected domain values: malformed states, configs, file contents.
class InvalidInputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Row sets that fail the orthonormality contract.
class InvalidInterferometerError : public InvalidInputError {
 public:
  using InvalidInputError::InvalidInputError;
};

// Phase requested for a factor with (numerically) vanishing magnitude.
class UndefinedPhaseError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Problem size beyond the configured cap (factorial-cost guard).
class CapacityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Deterministic sampling. std::uniform_real_distribution and
// std::normal_distribution are implementation-defined, so identical seeds
// would not give identical streams across standard libraries. These helpers
// consume raw mt19937_64 output in a fixed way instead.
inline double uniform_unit(std::mt19937_64& rng) {
  // 53 uniform bits in [0, 1)
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline double uniform_in(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform_unit(rng);
}

// Box-Muller, always consuming exactly two draws per call.
inline double gaussian(std::mt19937_64& rng) {
  double u1 = uniform_unit(rng);
  double u2 = uniform_unit(rng);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  constexpr double two_pi = 6.283185307179586476925286766559;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

inline Complex complex_gaussian(std::mt19937_64& rng) {
  const double re = gaussian(rng);
  const double im = gaussian(rng);
  return Complex(re, im);
}

}  // namespace cyclophase
