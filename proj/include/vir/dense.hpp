#pragma once

#include <Eigen/Dense>

#include "vir/graded.hpp"

namespace vir {

// Matrix of an operator in the orthonormal frame: entry (r,c) scaled by sqrt(N_r/N_c).
Eigen::MatrixXcd orthonormal_dense(const TruncatedOperator<Complex>& op);

// Leading block on levels <= level (rows and columns).
Eigen::MatrixXcd level_block(const Eigen::MatrixXcd& m, const GradedSpace& space, int level);

double operator_norm(const Eigen::MatrixXcd& m);

// Spectral calculus for a Hermitian matrix. The input is symmetrized, so
// round-off below `hermiticity_tol` (relative) is absorbed; larger defects throw.
class HermitianExponential {
 public:
  explicit HermitianExponential(const Eigen::MatrixXcd& h, double hermiticity_tol = 1e-10);

  // exp(z·H), so z = i·t gives an exactly unitary result up to rounding.
  Eigen::MatrixXcd exp(Complex z) const;
  Eigen::VectorXcd apply(Complex z, const Eigen::VectorXcd& v) const;

  const Eigen::VectorXd& eigenvalues() const { return values_; }

 private:
  Eigen::MatrixXcd vectors_;
  Eigen::VectorXd values_;
};

}  // namespace vir
