#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <memory>

#include "orbent/basis.hpp"
#include "orbent/error.hpp"

namespace orbent {

using BasisPtr = std::shared_ptr<const DeterminantBasis>;

/// Real, unit-norm coefficient vector over a determinant basis.
class CIVector {
 public:
  /// Normalizes @p coefficients; throws on a length mismatch or a zero vector.
  CIVector(BasisPtr basis, Eigen::VectorXd coefficients)
      : basis_(std::move(basis)), c_(std::move(coefficients)) {
    if (!basis_) throw Error("CIVector requires a basis");
    if (static_cast<std::size_t>(c_.size()) != basis_->size())
      throw DimensionError("coefficient count " + std::to_string(c_.size()) +
                           " differs from basis dimension " +
                           std::to_string(basis_->size()));
    const double norm = c_.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) throw Error("CIVector has zero norm");
    c_ /= norm;
  }

  const DeterminantBasis& basis() const noexcept { return *basis_; }
  const BasisPtr& basis_ptr() const noexcept { return basis_; }
  const Eigen::VectorXd& coefficients() const noexcept { return c_; }
  double operator[](std::size_t k) const { return c_(static_cast<Eigen::Index>(k)); }
  std::size_t size() const noexcept { return static_cast<std::size_t>(c_.size()); }

 private:
  BasisPtr basis_;
  Eigen::VectorXd c_;
};

}  // namespace orbent
