#include "vir/dense.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace vir {

Eigen::MatrixXcd orthonormal_dense(const TruncatedOperator<Complex>& op) {
  const auto& sp = *op.space;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(sp.dim(), sp.dim());
  for (int c = 0; c < op.matrix.cols(); ++c)
    for (const auto& [r, v] : op.matrix.column(c)) m(r, c) = v * std::sqrt(sp.norm_sq_d[r] / sp.norm_sq_d[c]);
  return m;
}

Eigen::MatrixXcd level_block(const Eigen::MatrixXcd& m, const GradedSpace& space, int level) {
  int n = space.dim_through(level);
  return m.topLeftCorner(n, n);
}

double operator_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

HermitianExponential::HermitianExponential(const Eigen::MatrixXcd& h, double hermiticity_tol) {
  if (h.rows() != h.cols()) throw std::invalid_argument("generator is not square");
  double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
  double defect = h.size() ? (h - h.adjoint()).cwiseAbs().maxCoeff() : 0.0;
  if (defect > hermiticity_tol * scale) throw std::invalid_argument("generator is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (h + h.adjoint()));
  if (es.info() != Eigen::Success) throw std::runtime_error("eigendecomposition failed");
  vectors_ = es.eigenvectors();
  values_ = es.eigenvalues();
}

Eigen::MatrixXcd HermitianExponential::exp(Complex z) const {
  if (z == Complex(0)) return Eigen::MatrixXcd::Identity(vectors_.rows(), vectors_.cols());
  Eigen::VectorXcd e = (z * values_.cast<Complex>()).array().exp();
  return vectors_ * e.asDiagonal() * vectors_.adjoint();
}

Eigen::VectorXcd HermitianExponential::apply(Complex z, const Eigen::VectorXcd& v) const {
  if (z == Complex(0)) return v;
  Eigen::VectorXcd e = (z * values_.cast<Complex>()).array().exp();
  return vectors_ * (e.asDiagonal() * (vectors_.adjoint() * v));
}

}  // namespace vir
