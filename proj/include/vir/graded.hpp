#pragma once

#include <memory>
#include <stdexcept>
#include <vector>

#include "vir/scalar.hpp"
#include "vir/sparse_matrix.hpp"

namespace vir {

// Level-graded index set. Basis vectors are orthogonal with the stored
// squared norms (all 1 for an orthonormal frame).
struct GradedSpace {
  int cutoff = 0;
  std::vector<int> offsets;  // offsets[k] = first index at level k, offsets[cutoff+1] = dim
  std::vector<Rational> norm_sq;
  std::vector<double> norm_sq_d;
  std::vector<int> level;

  GradedSpace(int cutoff, std::vector<int> offsets, std::vector<Rational> norm_sq);

  int dim() const { return offsets.back(); }
  // Number of basis vectors at levels <= k (clamped to the cutoff).
  int dim_through(int k) const;
  int level_dim(int k) const { return offsets[k + 1] - offsets[k]; }
};

using SpacePtr = std::shared_ptr<const GradedSpace>;

// Finite shadow of an unbounded graded operator. `shift` bounds the change
// of level; columns at levels <= exact_zone() hold exact matrix elements.
template <class S>
struct TruncatedOperator {
  SpacePtr space;
  SparseMatrix<S> matrix;
  int shift = 0;

  int cutoff() const { return space->cutoff; }
  int exact_zone() const { return space->cutoff - shift; }

  // Largest |level(row) - level(col)| - shift over nonzeros (<= 0 when the band holds).
  int band_excess() const;
};

template <class S>
int TruncatedOperator<S>::band_excess() const {
  int worst = -shift;
  for (int c = 0; c < matrix.cols(); ++c)
    for (const auto& [r, v] : matrix.column(c)) {
      int d = space->level[r] - space->level[c];
      if (d < 0) d = -d;
      worst = std::max(worst, d - shift);
    }
  return worst;
}

template <class S>
TruncatedOperator<S> operator+(const TruncatedOperator<S>& a, const TruncatedOperator<S>& b) {
  if (a.space != b.space) throw std::invalid_argument("operators on different spaces");
  return {a.space, a.matrix + b.matrix, std::max(a.shift, b.shift)};
}

template <class S>
TruncatedOperator<S> operator-(const TruncatedOperator<S>& a, const TruncatedOperator<S>& b) {
  if (a.space != b.space) throw std::invalid_argument("operators on different spaces");
  return {a.space, a.matrix - b.matrix, std::max(a.shift, b.shift)};
}

template <class S>
TruncatedOperator<S> operator*(const TruncatedOperator<S>& a, const TruncatedOperator<S>& b) {
  if (a.space != b.space) throw std::invalid_argument("operators on different spaces");
  return {a.space, a.matrix * b.matrix, a.shift + b.shift};
}

template <class S>
TruncatedOperator<S> scaled(const TruncatedOperator<S>& a, const S& s) {
  return {a.space, a.matrix.scaled(s), a.shift};
}

template <class S>
TruncatedOperator<S> identity_operator(const SpacePtr& space, const S& value = S(1)) {
  return {space, SparseMatrix<S>::identity(space->dim(), value), 0};
}

// Commutator evaluated only on columns at levels <= zone_level.
template <class S>
SparseMatrix<S> commutator_on_zone(const TruncatedOperator<S>& a, const TruncatedOperator<S>& b, int zone_level) {
  int ncols = a.space->dim_through(zone_level);
  return SparseMatrix<S>::product(a.matrix, b.matrix, ncols) - SparseMatrix<S>::product(b.matrix, a.matrix, ncols);
}

// Size of residual matrices on an exact zone, measured in the orthonormal
// frame (entry (r,c) weighted by sqrt(N_r / N_c)).
struct ResidualReport {
  double max_abs = 0.0;   // largest weighted entry
  bool exact = false;     // exact arithmetic was used
  bool exactly_zero = true;
  int zone_level = 0;     // columns at levels <= zone_level were inspected

  void merge(const ResidualReport& o) {
    max_abs = std::max(max_abs, o.max_abs);
    exactly_zero = exactly_zero && o.exactly_zero;
    exact = exact || o.exact;
  }
};

template <class S>
ResidualReport measure_residual(const SparseMatrix<S>& r, const GradedSpace& space, int zone_level) {
  ResidualReport rep;
  rep.exact = ScalarTraits<S>::exact;
  rep.zone_level = zone_level;
  int ncols = space.dim_through(zone_level);
  for (int c = 0; c < ncols; ++c)
    for (const auto& [row, v] : r.column(c)) {
      if (ScalarTraits<S>::is_zero(v)) continue;
      rep.exactly_zero = false;
      double w = std::sqrt(space.norm_sq_d[row] / space.norm_sq_d[c]);
      rep.max_abs = std::max(rep.max_abs, w * ScalarTraits<S>::magnitude(v));
    }
  return rep;
}

}  // namespace vir
