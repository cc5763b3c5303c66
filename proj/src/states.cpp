#include "cyclophase/states.hpp"

namespace cyclophase {

// Anchor the double instantiations here so template errors surface when the
// library itself is built.
template class PureStateT<double>;
template class MixedStateT<double>;
template class GeometricFactorT<double>;

PureState random_pure_state(Eigen::Index dim, std::mt19937_64& rng) {
  if (dim < 1) throw InvalidInputError("random pure state: dim must be >= 1");
  Eigen::VectorXcd v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v[i] = complex_gaussian(rng);
  const double norm = v.norm();
  if (norm == 0.0) {
    // practically unreachable, but keeps the contract total
    v.setZero();
    v[0] = 1.0;
    return PureState(std::move(v));
  }
  return PureState(Eigen::VectorXcd(v / norm));
}

MixedState random_mixed_state(Eigen::Index dim, Eigen::Index rank,
                              std::mt19937_64& rng) {
  if (dim < 1 || rank < 1 || rank > dim)
    throw InvalidInputError("random mixed state: need 1 <= rank <= dim");
  Eigen::MatrixXcd g(dim, rank);
  for (Eigen::Index i = 0; i < dim; ++i)
    for (Eigen::Index j = 0; j < rank; ++j) g(i, j) = complex_gaussian(rng);
  Eigen::MatrixXcd rho = g * g.adjoint();
  rho /= rho.trace().real();
  // exact symmetrization shields the constructor checks from rounding
  rho = ((rho + rho.adjoint()) / 2.0).eval();
  return MixedState(std::move(rho));
}

}  // namespace cyclophase
