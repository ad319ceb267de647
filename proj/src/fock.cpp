#include "vir/fock.hpp"

#include <stdexcept>

namespace vir {

FockBasis::FockBasis(int cutoff) : table_(cutoff) {
  std::vector<Rational> norms;
  norms.reserve(table_.size());
  for (int i = 0; i < table_.size(); ++i) norms.push_back(basis_norm_sq(table_.at(i)));
  space_ = std::make_shared<GradedSpace>(cutoff, table_.offsets(), std::move(norms));
}

BasisPtr make_fock_basis(int cutoff) { return std::make_shared<const FockBasis>(cutoff); }

template <class S>
S FockVector<S>::coefficient(const Partition& p) const {
  int i = basis->partitions().index_of(p);
  return i < 0 ? S{} : coeffs[i];
}

template <class S>
void FockVector<S>::set(const Partition& p, const S& v) {
  int i = basis->partitions().index_of(p);
  if (i < 0) throw std::out_of_range("partition above cutoff: " + p.to_string());
  coeffs[i] = v;
}

template <class S>
TruncatedOperator<S> matrix_of_J(int n, const FockBasis& basis) {
  int N = basis.cutoff();
  if (n > N || -n > N) throw std::out_of_range("matrix_of_J: |n| exceeds cutoff");
  const auto& tab = basis.partitions();
  SparseMatrix<S> m(tab.size(), tab.size());
  if (n != 0) {
    for (int c = 0; c < tab.size(); ++c) {
      const Partition& lam = tab.at(c);
      if (n < 0) {
        if (lam.weight() - n > N) continue;
        m.set_column(c, {{tab.index_of(lam.with_part(-n)), S(1)}});
      } else {
        int mult = lam.multiplicity(n);
        if (mult == 0) continue;
        m.set_column(c, {{tab.index_of(lam.without_part(n)), S(long(n) * mult)}});
      }
    }
  }
  return {basis.space(), std::move(m), n < 0 ? -n : n};
}

template <class S>
FockVector<S> act(const TruncatedOperator<S>& op, const FockVector<S>& v) {
  if (op.space != v.basis->space()) throw std::invalid_argument("act: operator and vector on different bases");
  return {v.basis, op.matrix.apply(v.coeffs)};
}

template <class S>
S inner_product(const FockVector<S>& u, const FockVector<S>& v) {
  if (u.basis->cutoff() != v.basis->cutoff()) throw std::invalid_argument("inner_product: cutoff mismatch");
  S acc{};
  const auto& sp = *u.basis->space();
  for (std::size_t i = 0; i < u.coeffs.size(); ++i) {
    if (ScalarTraits<S>::is_zero(u.coeffs[i]) || ScalarTraits<S>::is_zero(v.coeffs[i])) continue;
    if constexpr (ScalarTraits<S>::exact)
      acc += ScalarTraits<S>::conj(u.coeffs[i]) * v.coeffs[i] * S(sp.norm_sq[i]);
    else
      acc += ScalarTraits<S>::conj(u.coeffs[i]) * v.coeffs[i] * sp.norm_sq_d[i];
  }
  return acc;
}

template <class S>
SparseMatrix<S> weighted_adjoint(const SparseMatrix<S>& a, const GradedSpace& space) {
  // (A†)_{rc} = conj(A_{cr}) N_c / N_r
  SparseMatrix<S> t = a.conjugate_transpose();
  SparseMatrix<S> out(t.rows(), t.cols());
  for (int c = 0; c < t.cols(); ++c) {
    typename SparseMatrix<S>::Column col;
    for (const auto& [r, v] : t.column(c)) {
      if constexpr (ScalarTraits<S>::exact)
        col.emplace_back(r, v * S(Rational(space.norm_sq[c] / space.norm_sq[r])));
      else
        col.emplace_back(r, v * (space.norm_sq_d[c] / space.norm_sq_d[r]));
    }
    out.set_column(c, std::move(col));
  }
  return out;
}

#define VIR_INSTANTIATE(S)                                                          \
  template struct FockVector<S>;                                                    \
  template TruncatedOperator<S> matrix_of_J<S>(int, const FockBasis&);              \
  template FockVector<S> act<S>(const TruncatedOperator<S>&, const FockVector<S>&); \
  template S inner_product<S>(const FockVector<S>&, const FockVector<S>&);          \
  template SparseMatrix<S> weighted_adjoint<S>(const SparseMatrix<S>&, const GradedSpace&);

VIR_INSTANTIATE(Complex)
VIR_INSTANTIATE(ExactComplex)
#undef VIR_INSTANTIATE

}  // namespace vir
