#pragma once

#include <cmath>
#include <random>

#include "cursorqc/machine.hpp"
#include "cursorqc/types.hpp"

namespace cursorqc {

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal folded back into Q.
template <class Rng>
CMatrix random_unitary(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const auto n = static_cast<Eigen::Index>(dim);
  CMatrix z(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) z(i, j) = cplx(normal(rng), normal(rng));
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

template <class Rng>
CVector random_unit_vector(std::size_t dim, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = cplx(normal(rng), normal(rng));
  return v / v.norm();
}

template <class Rng>
UnitaryProgram random_program(std::size_t dim, std::size_t steps, Rng& rng) {
  std::vector<CMatrix> us;
  us.reserve(steps);
  for (std::size_t i = 0; i < steps; ++i) us.push_back(random_unitary(dim, rng));
  return make_program(dim, std::move(us));
}

}  // namespace cursorqc
