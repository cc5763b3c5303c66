// State containers (pure amplitude vectors, density matrices, Bloch vectors)
// and the cyclic-overlap primitives built on them: the geometric factor of an
// ordered state list, its Pancharatnam phase, and signed spherical areas for
// qubit loops.
#pragma once

#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "cyclophase/common.hpp"

namespace cyclophase {

template <typename Scalar>
using BlochVectorT = Eigen::Matrix<Scalar, 3, 1>;
using BlochVector = BlochVectorT<double>;

// Unit-norm amplitude vector of a single internal mode, any dimension >= 1.
template <typename Scalar>
class PureStateT {
 public:
  using ComplexT = std::complex<Scalar>;
  using Vector = Eigen::Matrix<ComplexT, Eigen::Dynamic, 1>;

  explicit PureStateT(Vector amplitudes) : amp_(std::move(amplitudes)) {
    validate();
  }

  template <typename Derived>
  explicit PureStateT(const Eigen::MatrixBase<Derived>& amplitudes)
      : amp_(amplitudes) {
    validate();
  }

  Eigen::Index dim() const { return amp_.size(); }
  const Vector& amplitudes() const { return amp_; }

 private:
  void validate() const {
    if (amp_.size() == 0)
      throw InvalidInputError("pure state: amplitude vector is empty");
    if (std::abs(amp_.norm() - Scalar(1)) > kUnitNormTol)
      throw InvalidInputError("pure state: amplitudes must have unit norm");
  }

  Vector amp_;
};

using PureState = PureStateT<double>;

// Density matrix: Hermitian, unit trace, spectrum nonnegative up to a small
// numerical allowance. Validated once at construction.
template <typename Scalar>
class MixedStateT {
 public:
  using ComplexT = std::complex<Scalar>;
  using Matrix = Eigen::Matrix<ComplexT, Eigen::Dynamic, Eigen::Dynamic>;

  explicit MixedStateT(Matrix rho) : rho_(std::move(rho)) { validate(); }

  template <typename Derived>
  explicit MixedStateT(const Eigen::MatrixBase<Derived>& rho) : rho_(rho) {
    validate();
  }

  Eigen::Index dim() const { return rho_.rows(); }
  const Matrix& density() const { return rho_; }

 private:
  void validate() const {
    if (rho_.rows() == 0 || rho_.rows() != rho_.cols())
      throw InvalidInputError("mixed state: density matrix must be square");
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol)
      throw InvalidInputError("mixed state: density matrix must be Hermitian");
    if (std::abs(rho_.trace() - ComplexT(1)) > kUnitNormTol)
      throw InvalidInputError("mixed state: density matrix must have unit trace");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < kPsdTol)
      throw InvalidInputError(
          "mixed state: density matrix has a negative eigenvalue");
  }

  Matrix rho_;
};

using MixedState = MixedStateT<double>;

// Cyclic overlap product of an ordered state list. The magnitude is the
// interference visibility (always <= 1), the argument the collective
// geometric phase, reported in (-pi, pi].
template <typename Scalar>
class GeometricFactorT {
 public:
  using ComplexT = std::complex<Scalar>;

  explicit GeometricFactorT(ComplexT value) : value_(value) {
    if (std::abs(value_) > Scalar(1) + kVisibilityTol)
      throw InvalidInputError("geometric factor: magnitude exceeds one");
  }

  ComplexT value() const { return value_; }
  Scalar visibility() const { return std::abs(value_); }

  Scalar phase() const {
    if (visibility() < kPhaseUndefinedTol)
      throw UndefinedPhaseError(
          "geometric factor: phase undefined at vanishing visibility");
    Scalar p = std::arg(value_);
    if (p <= -std::numbers::pi_v<Scalar>) p = std::numbers::pi_v<Scalar>;
    return p;
  }

 private:
  ComplexT value_;
};

using GeometricFactor = GeometricFactorT<double>;

namespace detail {

template <typename StateList>
void require_uniform_dimension(const StateList& states) {
  if (states.empty())
    throw InvalidInputError("geometric factor: state list is empty");
  const Eigen::Index d = states.front().dim();
  for (const auto& s : states)
    if (s.dim() != d)
      throw InvalidInputError("geometric factor: mixed state dimensions");
}

}  // namespace detail

// V = <s1|s2><s2|s3>...<sN|s1>. Invariant under per-state global phases,
// cyclic rotation of the list and a common unitary; list reversal
// conjugates the value.
template <typename Scalar>
GeometricFactorT<Scalar> geometric_factor(
    const std::vector<PureStateT<Scalar>>& states) {
  detail::require_uniform_dimension(states);
  const std::size_t n = states.size();
  std::complex<Scalar> v(1);
  for (std::size_t k = 0; k < n; ++k)
    v *= states[k].amplitudes().dot(states[(k + 1) % n].amplitudes());
  return GeometricFactorT<Scalar>(v);
}

// tr[rho_1 rho_2 ... rho_N]; coincides with the pure chain when every
// rho_k is a rank-one projector.
template <typename Scalar>
GeometricFactorT<Scalar> geometric_factor_mixed(
    const std::vector<MixedStateT<Scalar>>& states) {
  detail::require_uniform_dimension(states);
  typename MixedStateT<Scalar>::Matrix prod = states.front().density();
  for (std::size_t k = 1; k < states.size(); ++k)
    prod = prod * states[k].density();
  return GeometricFactorT<Scalar>(prod.trace());
}

template <typename Scalar>
Scalar pancharatnam_phase(const std::vector<PureStateT<Scalar>>& states) {
  return geometric_factor(states).phase();
}

// Qubit convention: theta=0 is the north pole, amplitudes
// (cos(theta/2), e^{i phi} sin(theta/2)).
template <typename Scalar>
PureStateT<Scalar> pure_from_bloch(Scalar theta, Scalar phi) {
  typename PureStateT<Scalar>::Vector amp(2);
  amp[0] = std::complex<Scalar>(std::cos(theta / 2), 0);
  amp[1] = std::polar(std::sin(theta / 2), phi);
  return PureStateT<Scalar>(std::move(amp));
}

template <typename Derived>
PureStateT<typename Derived::Scalar> pure_from_bloch(
    const Eigen::MatrixBase<Derived>& n) {
  using Scalar = typename Derived::Scalar;
  const BlochVectorT<Scalar> v = n;
  if (std::abs(v.norm() - Scalar(1)) > kUnitNormTol)
    throw InvalidInputError("Bloch vector must have unit length");
  const Scalar z = std::clamp(v[2], Scalar(-1), Scalar(1));
  return pure_from_bloch(std::acos(z), std::atan2(v[1], v[0]));
}

template <typename Scalar>
BlochVectorT<Scalar> state_to_bloch(const PureStateT<Scalar>& psi) {
  if (psi.dim() != 2)
    throw InvalidInputError("Bloch vector is defined for qubit states only");
  const auto& a = psi.amplitudes();
  const std::complex<Scalar> c = std::conj(a[0]) * a[1];
  return BlochVectorT<Scalar>(2 * c.real(), 2 * c.imag(),
                              std::norm(a[0]) - std::norm(a[1]));
}

// Signed solid angle of the geodesic polygon through the given unit
// vertices, fan-triangulated from the first vertex. Orientation is fixed so
// that the phase of the overlap chain of the corresponding qubit states
// equals minus half the returned angle; a loop that runs counterclockwise
// as seen from outside the sphere therefore counts as negative area.
template <typename Scalar>
Scalar spherical_polygon_solid_angle(
    const std::vector<BlochVectorT<Scalar>>& vertices) {
  if (vertices.size() < 3)
    throw InvalidInputError("solid angle needs at least three vertices");
  for (const auto& v : vertices)
    if (std::abs(v.norm() - Scalar(1)) > kUnitNormTol)
      throw InvalidInputError("polygon vertices must be unit vectors");
  const BlochVectorT<Scalar>& r1 = vertices.front();
  Scalar area(0);
  for (std::size_t i = 1; i + 1 < vertices.size(); ++i) {
    const BlochVectorT<Scalar>& r2 = vertices[i];
    const BlochVectorT<Scalar>& r3 = vertices[i + 1];
    // spherical-triangle area via the half-angle tangent formula
    const Scalar num = r1.dot(r2.cross(r3));
    const Scalar den = 1 + r1.dot(r2) + r2.dot(r3) + r3.dot(r1);
    area += 2 * std::atan2(num, den);
  }
  return -area;
}

// Haar-distributed pure state: normalized vector of standard complex
// Gaussians. Consumes exactly 2*dim raw draws from the generator.
PureState random_pure_state(Eigen::Index dim, std::mt19937_64& rng);

// Random full-rank density matrix, G G^dagger normalized to unit trace with
// G a dim x rank standard complex Gaussian matrix.
MixedState random_mixed_state(Eigen::Index dim, Eigen::Index rank,
                              std::mt19937_64& rng);

}  // namespace cyclophase
