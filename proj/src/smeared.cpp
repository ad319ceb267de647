#include "vir/smeared.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

namespace vir {

namespace {

template <class S>
TruncatedOperator<S> zero_operator(const SpacePtr& space) {
  return {space, SparseMatrix<S>(space->dim(), space->dim()), 0};
}

void check_degree(int degree, int cutoff, const char* what) {
  if (degree > cutoff)
    throw std::invalid_argument(std::string(what) + ": function degree " + std::to_string(degree) +
                                " exceeds cutoff " + std::to_string(cutoff));
}

int resolve_safe_level(int safe_level, int cutoff) {
  if (safe_level < 0) safe_level = cutoff / 2;
  if (safe_level > cutoff) throw std::invalid_argument("safe zone beyond the cutoff");
  return safe_level;
}

}  // namespace

template <class S>
std::string SmearedOperator<S>::descriptor() const {
  if (kind == FieldKind::current) return "J(f)";
  if (ScalarTraits<S>::is_zero(ScalarTraits<S>::from_real(alpha)) &&
      ScalarTraits<S>::is_zero(ScalarTraits<S>::from_real(beta)))
    return "T(f)";
  return "T~_{alpha,beta}(f)";
}

template <class S>
SmearedOperator<S> smear_J(const FourierSeries<S>& f, const BasisPtr& basis) {
  check_degree(f.degree(), basis->cutoff(), "smear_J");
  auto op = zero_operator<S>(basis->space());
  for (int n = -f.degree(); n <= f.degree(); ++n) {
    S fn = f.coefficient(n);
    if (n == 0 || ScalarTraits<S>::is_zero(fn)) continue;  // J_0 vanishes on the vacuum sector
    op = op + scaled(matrix_of_J<S>(n, *basis), fn);
  }
  op.shift = f.degree();
  return {std::move(op), FieldKind::current, f, {}, {}};
}

template <class S>
SmearedOperator<S> smear_T(const FourierSeries<S>& f, const VirasoroFamily<S>& family) {
  check_degree(f.degree(), family.cutoff(), "smear_T");
  auto op = zero_operator<S>(family.basis->space());
  for (int n = -f.degree(); n <= f.degree(); ++n) {
    S fn = f.coefficient(n);
    if (ScalarTraits<S>::is_zero(fn)) continue;
    op = op + scaled(family.gen(n), fn);
  }
  op.shift = f.degree();
  return {std::move(op), FieldKind::stress, f, family.alpha, family.beta};
}

template <class S>
SmearedOperator<S> smear_T(const FourierSeries<S>& f, typename ScalarTraits<S>::Real alpha,
                           typename ScalarTraits<S>::Real beta, const BasisPtr& basis) {
  return smear_T(f, shifted_family<S>(alpha, beta, basis));
}

template <class S>
ResidualReport hermiticity_defect(const SmearedOperator<S>& a) {
  const auto& sp = *a.op.space;
  return measure_residual(a.op.matrix - weighted_adjoint(a.op.matrix, sp), sp, sp.cutoff);
}

template <class S>
ResidualReport verify_alg_rel(const FourierSeries<S>& f, const FourierSeries<S>& g, const VirasoroFamily<S>& family) {
  using T = ScalarTraits<S>;
  int zone = family.cutoff() - f.degree() - g.degree();
  if (zone < 0) throw std::invalid_argument("verify_alg_rel: cutoff too small for deg f + deg g");
  auto A = smear_T(f, family), B = smear_T(g, family), C = smear_T(bracket(f, g), family);
  typename T::Real central = family.central_charge / 12 * cocycle(f, g);
  auto r = commutator_on_zone(A.op, B.op, zone) - C.op.matrix.scaled(T::i()) -
           SparseMatrix<S>::identity(family.basis->dim(), T::from_parts(0, central));
  return measure_residual(r, *family.basis->space(), zone);
}

WeylGenerator::WeylGenerator(const TestFunction& g, const BasisPtr& basis)
    : g_(g), basis_(basis), spectral_(orthonormal_dense(smear_J(g, basis).op)) {}

TruncatedOperator<Complex> WeylGenerator::exp(Complex r) const {
  const auto& sp = *basis_->space();
  Eigen::MatrixXcd w = spectral_.exp(r);
  SparseMatrix<Complex> m(sp.dim(), sp.dim());
  for (int c = 0; c < sp.dim(); ++c) {
    SparseMatrix<Complex>::Column col;
    for (int row = 0; row < sp.dim(); ++row)
      if (w(row, c) != Complex(0)) col.emplace_back(row, w(row, c) * std::sqrt(sp.norm_sq_d[c] / sp.norm_sq_d[row]));
    m.set_column(c, std::move(col));
  }
  return {basis_->space(), std::move(m), sp.cutoff};
}

FockVector<Complex> WeylGenerator::on_vacuum(Complex r) const {
  Eigen::VectorXcd omega = Eigen::VectorXcd::Zero(basis_->dim());
  omega(0) = 1;
  return from_orthonormal(spectral_.apply(r, omega), basis_);
}

TruncatedOperator<Complex> weyl(const TestFunction& g, Complex r, const BasisPtr& basis) {
  return WeylGenerator(g, basis).exp(r);
}

EtaVector make_eta(const TestFunction& g, Complex r, const BasisPtr& basis) {
  return {WeylGenerator(g, basis).on_vacuum(r), r, g};
}

Eigen::VectorXcd orthonormal_coordinates(const FockVector<Complex>& v) {
  const auto& sp = *v.basis->space();
  Eigen::VectorXcd x(sp.dim());
  for (int i = 0; i < sp.dim(); ++i) x(i) = v.coeffs[i] * std::sqrt(sp.norm_sq_d[i]);
  return x;
}

FockVector<Complex> from_orthonormal(const Eigen::VectorXcd& x, const BasisPtr& basis) {
  const auto& sp = *basis->space();
  FockVector<Complex> v{basis, std::vector<Complex>(sp.dim())};
  for (int i = 0; i < sp.dim(); ++i) v.coeffs[i] = x(i) / std::sqrt(sp.norm_sq_d[i]);
  return v;
}

namespace {

// ‖W A W† - B - shift·I‖ on the safe block, everything in the orthonormal frame.
double conjugation_defect(const Eigen::MatrixXcd& w, const TruncatedOperator<Complex>& a,
                          const TruncatedOperator<Complex>& b, double shift, const GradedSpace& sp, int safe) {
  Eigen::MatrixXcd r = w * orthonormal_dense(a) * w.adjoint() - orthonormal_dense(b);
  r.diagonal().array() -= shift;
  return operator_norm(level_block(r, sp, safe));
}

}  // namespace

SafeZoneResidual check_trule1(const TestFunction& g, const TestFunction& f, const BasisPtr& basis, int safe_level) {
  int safe = resolve_safe_level(safe_level, basis->cutoff());
  WeylGenerator gen(g, basis);
  auto jf = smear_J(f, basis);
  double shift = pairing(g.derivative(), f);
  double res = conjugation_defect(gen.exp_orthonormal(Complex(0, 1)), jf.op, jf.op, shift, *basis->space(), safe);
  return {res, shift, basis->cutoff(), safe};
}

SafeZoneResidual check_trule2(const TestFunction& g, const TestFunction& f, const BasisPtr& basis, int safe_level) {
  int safe = resolve_safe_level(safe_level, basis->cutoff());
  WeylGenerator gen(g, basis);
  auto dg = g.derivative();
  auto tf = smear_T(f, 0.0, 0.0, basis);
  auto jdgf = smear_J(dg * f, basis);
  double shift = 0.5 * pairing(dg * dg, f);
  auto rhs = tf.op + jdgf.op;
  double res = conjugation_defect(gen.exp_orthonormal(Complex(0, 1)), tf.op, rhs, shift, *basis->space(), safe);
  return {res, shift, basis->cutoff(), safe};
}

ConjugationReport check_conjugation_identity(double alpha, double beta, const BumpReport& f, const BumpReport& g,
                                             const BasisPtr& basis, int safe_level) {
  if (g.profile != BumpProfile::derivative_one)
    throw std::invalid_argument("conjugation: g needs a derivative-one certificate");
  if (f.profile != BumpProfile::plateau) throw std::invalid_argument("conjugation: f needs a support certificate");
  if (std::abs(f.interval.start() - g.interval.start()) > 1e-12 ||
      std::abs(f.interval.length() - g.interval.length()) > 1e-12)
    throw std::invalid_argument("conjugation: certificates refer to different intervals");
  int safe = resolve_safe_level(safe_level, basis->cutoff());

  WeylGenerator gen(g.function, basis);
  auto lhs = smear_T(f.function, 0.0, beta, basis);
  auto rhs = smear_T(f.function, alpha, beta, basis);
  ConjugationReport rep;
  rep.alpha = alpha;
  rep.beta = beta;
  rep.cutoff = basis->cutoff();
  rep.safe_level = safe;
  rep.residual = conjugation_defect(gen.exp_orthonormal(Complex(0, alpha)), lhs.op, rhs.op, 0.0, *basis->space(), safe);
  rep.g_constraint = g.constraint_residual;
  rep.f_leakage = f.constraint_residual;
  rep.f_tail = f.tail_sup;
  double cert = rep.g_constraint + rep.f_leakage + rep.f_tail;
  rep.empirical_constant = cert > 0 ? rep.residual / cert : INFINITY;
  return rep;
}

std::vector<ConjugationReport> check_conjugation_identities(double alpha, double beta,
                                                            const std::vector<ConjugationCase>& cases,
                                                            const BasisPtr& basis, int threads) {
  std::vector<ConjugationReport> out(cases.size());
  if (threads <= 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<int>(threads, std::max<std::size_t>(1, cases.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(cases.size());
  auto work = [&] {
    for (std::size_t i; (i = next++) < cases.size();) {
      try {
        out[i] = check_conjugation_identity(alpha, beta, cases[i].f, cases[i].g, basis);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

SpectralFloorReport spectral_floor(const TestFunction& f, double alpha, double beta, const std::vector<int>& cutoffs,
                                   double nonnegativity_slack) {
  SpectralFloorReport rep;
  rep.certified_min = f.is_zero() ? 0.0 : certified_min(f);
  if (rep.certified_min < -nonnegativity_slack)
    throw std::domain_error("spectral_floor: nonnegativity certificate failed (certified min " +
                            std::to_string(rep.certified_min) + ")");
  for (int n : cutoffs) {
    auto basis = make_fock_basis(n);
    HermitianExponential eig(orthonormal_dense(smear_T(f, alpha, beta, basis).op));
    rep.floors.push_back({n, eig.eigenvalues()(0)});
  }
  return rep;
}

#define VIR_INSTANTIATE(S)                                                                                     \
  template struct SmearedOperator<S>;                                                                          \
  template SmearedOperator<S> smear_J(const FourierSeries<S>&, const BasisPtr&);                               \
  template SmearedOperator<S> smear_T(const FourierSeries<S>&, const VirasoroFamily<S>&);                      \
  template SmearedOperator<S> smear_T(const FourierSeries<S>&, ScalarTraits<S>::Real, ScalarTraits<S>::Real,  \
                                      const BasisPtr&);                                                        \
  template ResidualReport hermiticity_defect(const SmearedOperator<S>&);                                       \
  template ResidualReport verify_alg_rel(const FourierSeries<S>&, const FourierSeries<S>&, const VirasoroFamily<S>&);

VIR_INSTANTIATE(Complex)
VIR_INSTANTIATE(ExactComplex)

}  // namespace vir
