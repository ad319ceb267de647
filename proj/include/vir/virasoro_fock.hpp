#pragma once

#include <vector>

#include "vir/fock.hpp"

namespace vir {

// Normal-ordered ½:J²:_n on the truncated Fock space. Terms whose factors
// vanish identically below the cutoff are dropped; the result is the exact
// compression of L_n.
template <class S>
TruncatedOperator<S> sugawara_L(int n, const FockBasis& basis);

template <class S>
struct VirasoroFamily {
  using Real = typename ScalarTraits<S>::Real;

  BasisPtr basis;
  Real alpha, beta;
  Real central_charge;  // 1 + 12β²
  Real lowest_energy;   // ½(α² + β²)
  std::vector<TruncatedOperator<S>> L;         // L̃_n at index n + cutoff
  std::vector<TruncatedOperator<S>> sugawara;  // unshifted L_n
  std::vector<TruncatedOperator<S>> J;         // J_n

  int cutoff() const { return basis->cutoff(); }
  const TruncatedOperator<S>& gen(int n) const { return L.at(n + cutoff()); }
  const TruncatedOperator<S>& sugawara_gen(int n) const { return sugawara.at(n + cutoff()); }
  const TruncatedOperator<S>& current(int n) const { return J.at(n + cutoff()); }
};

// L̃_n = L_n + αJ_n + iβnJ_n (n ≠ 0), L̃_0 = L_0 + ½(α²+β²).
template <class S>
VirasoroFamily<S> shifted_family(typename ScalarTraits<S>::Real alpha, typename ScalarTraits<S>::Real beta,
                                 const BasisPtr& basis);

// Max over |n|,|m| <= max_mode of the Virasoro-relation residual on the
// exact zone (levels <= cutoff - |n| - |m|). Requires 2*max_mode <= cutoff.
template <class S>
ResidualReport verify_virasoro(const VirasoroFamily<S>& family, int max_mode);

// [L_n, J_m] + m J_{n+m} for the unshifted generators.
template <class S>
ResidualReport verify_covariance(const VirasoroFamily<S>& family, int max_mode);

// 2(⟨Ω,[L̃_2,L̃_{-2}]Ω⟩ - 4h). Requires cutoff >= 4.
template <class S>
typename ScalarTraits<S>::Real measure_central_charge(const VirasoroFamily<S>& family);

// ⟨L̃_{-λ}Ω, L̃_{-μ}Ω⟩ over partitions of level k, in enumerate_partitions order.
template <class S>
std::vector<std::vector<S>> descendant_gram(const VirasoroFamily<S>& family, int k);

// Numerical rank of {L̃_{-λ}Ω : λ ⊢ k} for k = 0..max_level, relative
// singular-value tolerance `tol`.
std::vector<int> span_dimensions(const VirasoroFamily<Complex>& family, int max_level, double tol = 1e-9);

}  // namespace vir
