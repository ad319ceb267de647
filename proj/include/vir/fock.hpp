#pragma once

#include <memory>
#include <vector>

#include "vir/graded.hpp"
#include "vir/partition.hpp"

namespace vir {

// Vacuum module of the current algebra up to level `cutoff`. Basis vector λ
// is J_{-λ1}...J_{-λk}Ω; the basis is orthogonal, not normalized.
class FockBasis {
 public:
  explicit FockBasis(int cutoff);

  int cutoff() const { return table_.cutoff(); }
  int dim() const { return table_.size(); }
  const PartitionTable& partitions() const { return table_; }
  const SpacePtr& space() const { return space_; }
  const Rational& norm_sq(int i) const { return space_->norm_sq[i]; }

 private:
  PartitionTable table_;
  SpacePtr space_;
};

using BasisPtr = std::shared_ptr<const FockBasis>;
BasisPtr make_fock_basis(int cutoff);

template <class S>
struct FockVector {
  BasisPtr basis;
  std::vector<S> coeffs;  // coefficients on the unnormalized basis

  static FockVector vacuum(const BasisPtr& b);
  S coefficient(const Partition& p) const;
  void set(const Partition& p, const S& v);
};

template <class S>
FockVector<S> FockVector<S>::vacuum(const BasisPtr& b) {
  FockVector v{b, std::vector<S>(b->dim())};
  v.coeffs[0] = S(1);
  return v;
}

// |n| <= cutoff, else std::out_of_range.
template <class S>
TruncatedOperator<S> matrix_of_J(int n, const FockBasis& basis);

template <class S>
FockVector<S> act(const TruncatedOperator<S>& op, const FockVector<S>& v);

// Sesquilinear in the first slot.
template <class S>
S inner_product(const FockVector<S>& u, const FockVector<S>& v);

// The adjoint with respect to the weighted inner product, N^{-1} A^H N.
template <class S>
SparseMatrix<S> weighted_adjoint(const SparseMatrix<S>& a, const GradedSpace& space);

}  // namespace vir
