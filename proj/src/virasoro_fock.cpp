#include "vir/virasoro_fock.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace vir {

namespace {

template <class S>
S from_rational(const Rational& q) {
  return ScalarTraits<S>::make(q);
}

// Applies L̃_{-λ1}···L̃_{-λk} to Ω.
template <class S>
std::vector<S> descendant(const VirasoroFamily<S>& fam, const Partition& lam) {
  std::vector<S> v(fam.basis->dim());
  v[0] = S(1);
  for (auto it = lam.parts.rbegin(); it != lam.parts.rend(); ++it) v = fam.gen(-*it).matrix.apply(v);
  return v;
}

}  // namespace

template <class S>
TruncatedOperator<S> sugawara_L(int n, const FockBasis& basis) {
  int N = basis.cutoff();
  if (n > N || -n > N) throw std::out_of_range("sugawara_L: |n| exceeds cutoff");
  const auto& space = basis.space();
  SparseMatrix<S> acc(basis.dim(), basis.dim());
  // J_m with |m| > N vanishes on the truncated space, so m runs over
  // |m| <= N and |n - m| <= N; J_0 = 0 removes m = 0 and m = n.
  for (int m = -N; m <= N; ++m) {
    int k = n - m;
    if (m == 0 || k == 0 || k > N || -k > N) continue;
    auto Jm = matrix_of_J<S>(m, basis).matrix;
    auto Jk = matrix_of_J<S>(k, basis).matrix;
    acc = acc + (m < 0 ? Jm * Jk : Jk * Jm);
  }
  return {space, acc.scaled(from_rational<S>(ratio(1, 2))), n < 0 ? -n : n};
}

template <class S>
VirasoroFamily<S> shifted_family(typename ScalarTraits<S>::Real alpha, typename ScalarTraits<S>::Real beta,
                                 const BasisPtr& basis) {
  using Real = typename ScalarTraits<S>::Real;
  VirasoroFamily<S> fam;
  fam.basis = basis;
  fam.alpha = alpha;
  fam.beta = beta;
  fam.central_charge = Real(1) + Real(12) * beta * beta;
  fam.lowest_energy = (alpha * alpha + beta * beta) / Real(2);
  int N = basis->cutoff();
  for (int n = -N; n <= N; ++n) {
    fam.J.push_back(matrix_of_J<S>(n, *basis));
    fam.sugawara.push_back(sugawara_L<S>(n, *basis));
    TruncatedOperator<S> g = fam.sugawara.back();
    if (n == 0) {
      g = g + identity_operator<S>(basis->space(), ScalarTraits<S>::from_real(fam.lowest_energy));
    } else {
      S coef = ScalarTraits<S>::from_parts(alpha, beta * Real(n));
      g.matrix = g.matrix.axpy(coef, fam.J.back().matrix);
    }
    fam.L.push_back(std::move(g));
  }
  return fam;
}

template <class S>
ResidualReport verify_virasoro(const VirasoroFamily<S>& fam, int max_mode) {
  int N = fam.cutoff();
  if (max_mode < 0 || 2 * max_mode > N) throw std::invalid_argument("verify_virasoro: cutoff too small for requested modes");
  const auto& space = *fam.basis->space();
  ResidualReport total;
  total.exact = ScalarTraits<S>::exact;
  total.zone_level = N - 2 * max_mode;
  for (int n = -max_mode; n <= max_mode; ++n)
    for (int m = -max_mode; m <= max_mode; ++m) {
      int zone = N - std::abs(n) - std::abs(m);
      SparseMatrix<S> r = commutator_on_zone(fam.gen(n), fam.gen(m), zone);
      r = r.axpy(S(long(-(n - m))), fam.gen(n + m).matrix);
      if (n + m == 0 && n * n * n - n != 0) {
        S central = ScalarTraits<S>::from_real(fam.central_charge) * S(long(n) * n * n - n) *
                    from_rational<S>(ratio(1, 12));
        r = r.axpy(-central, SparseMatrix<S>::identity(space.dim()));
      }
      total.merge(measure_residual(r, space, zone));
    }
  return total;
}

template <class S>
ResidualReport verify_covariance(const VirasoroFamily<S>& fam, int max_mode) {
  int N = fam.cutoff();
  if (max_mode < 0 || 2 * max_mode > N) throw std::invalid_argument("verify_covariance: cutoff too small for requested modes");
  const auto& space = *fam.basis->space();
  ResidualReport total;
  total.exact = ScalarTraits<S>::exact;
  total.zone_level = N - 2 * max_mode;
  for (int n = -max_mode; n <= max_mode; ++n)
    for (int m = -max_mode; m <= max_mode; ++m) {
      int zone = N - std::abs(n) - std::abs(m);
      SparseMatrix<S> r = commutator_on_zone(fam.sugawara_gen(n), fam.current(m), zone);
      r = r.axpy(S(long(m)), fam.current(n + m).matrix);
      total.merge(measure_residual(r, space, zone));
    }
  return total;
}

template <class S>
typename ScalarTraits<S>::Real measure_central_charge(const VirasoroFamily<S>& fam) {
  using Real = typename ScalarTraits<S>::Real;
  if (fam.cutoff() < 4) throw std::invalid_argument("measure_central_charge: cutoff < 4");
  std::vector<S> omega(fam.basis->dim());
  omega[0] = S(1);
  auto up = fam.gen(2).matrix.apply(fam.gen(-2).matrix.apply(omega));
  auto down = fam.gen(-2).matrix.apply(fam.gen(2).matrix.apply(omega));
  Real vev = ScalarTraits<S>::real_part(up[0] - down[0]);
  return Real(2) * (vev - Real(4) * fam.lowest_energy);
}

template <class S>
std::vector<std::vector<S>> descendant_gram(const VirasoroFamily<S>& fam, int k) {
  if (k > fam.cutoff()) throw std::out_of_range("descendant_gram: level above cutoff");
  auto parts = enumerate_partitions(k);
  std::vector<FockVector<S>> vecs;
  for (const auto& p : parts) vecs.push_back({fam.basis, descendant(fam, p)});
  std::vector<std::vector<S>> g(parts.size(), std::vector<S>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i)
    for (std::size_t j = 0; j < parts.size(); ++j) g[i][j] = inner_product(vecs[i], vecs[j]);
  return g;
}

std::vector<int> span_dimensions(const VirasoroFamily<Complex>& fam, int max_level, double tol) {
  if (max_level > fam.cutoff()) throw std::out_of_range("span_dimensions: level above cutoff");
  const auto& space = *fam.basis->space();
  std::vector<int> dims;
  for (int k = 0; k <= max_level; ++k) {
    auto parts = enumerate_partitions(k);
    int b = space.offsets[k], d = space.level_dim(k);
    Eigen::MatrixXcd M(d, parts.size());
    for (std::size_t j = 0; j < parts.size(); ++j) {
      auto v = descendant(fam, parts[j]);
      for (int i = 0; i < d; ++i) M(i, j) = v[b + i] * std::sqrt(space.norm_sq_d[b + i]);
      double nrm = M.col(j).norm();
      if (nrm > 0) M.col(j) /= nrm;
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
      if (sv(i) > tol * sv(0)) ++rank;
    dims.push_back(rank);
  }
  return dims;
}

#define VIR_INSTANTIATE(S)                                                                          \
  template TruncatedOperator<S> sugawara_L<S>(int, const FockBasis&);                               \
  template VirasoroFamily<S> shifted_family<S>(typename ScalarTraits<S>::Real,                      \
                                               typename ScalarTraits<S>::Real, const BasisPtr&);    \
  template ResidualReport verify_virasoro<S>(const VirasoroFamily<S>&, int);                        \
  template ResidualReport verify_covariance<S>(const VirasoroFamily<S>&, int);                      \
  template typename ScalarTraits<S>::Real measure_central_charge<S>(const VirasoroFamily<S>&);      \
  template std::vector<std::vector<S>> descendant_gram<S>(const VirasoroFamily<S>&, int);

VIR_INSTANTIATE(Complex)
VIR_INSTANTIATE(ExactComplex)
#undef VIR_INSTANTIATE

}  // namespace vir
