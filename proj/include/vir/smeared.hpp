#pragma once

#include <string>
#include <vector>

#include "vir/bump.hpp"
#include "vir/dense.hpp"
#include "vir/test_function.hpp"
#include "vir/virasoro_fock.hpp"

namespace vir {

enum class FieldKind { current, stress };

template <class S>
struct SmearedOperator {
  using Real = typename ScalarTraits<S>::Real;
  TruncatedOperator<S> op;
  FieldKind kind = FieldKind::current;
  FourierSeries<S> function;
  Real alpha{}, beta{};  // shift parameters of a stress field; zero for currents

  int exact_zone() const { return op.exact_zone(); }
  std::string descriptor() const;
};

// Σ_{|n|<=d} f̂_n J_n. Throws std::invalid_argument when d > cutoff.
template <class S>
SmearedOperator<S> smear_J(const FourierSeries<S>& f, const BasisPtr& basis);

// Σ f̂_n L̃_n for the given family, i.e. T(f) + αJ(f) + βJ(f') + h f̂_0.
template <class S>
SmearedOperator<S> smear_T(const FourierSeries<S>& f, const VirasoroFamily<S>& family);
template <class S>
SmearedOperator<S> smear_T(const FourierSeries<S>& f, typename ScalarTraits<S>::Real alpha,
                           typename ScalarTraits<S>::Real beta, const BasisPtr& basis);

// A - A† over the whole truncated space (compressions of symmetric fields are symmetric).
template <class S>
ResidualReport hermiticity_defect(const SmearedOperator<S>& a);

// [T(f),T(g)] - iT([f,g]) - (ic/12)(f,g) on levels <= cutoff - deg f - deg g.
template <class S>
ResidualReport verify_alg_rel(const FourierSeries<S>& f, const FourierSeries<S>& g, const VirasoroFamily<S>& family);

// Spectral data of J(g) in the orthonormal frame, reused for every exponent.
class WeylGenerator {
 public:
  WeylGenerator(const TestFunction& g, const BasisPtr& basis);

  Eigen::MatrixXcd exp_orthonormal(Complex r) const { return spectral_.exp(r); }
  // e^{rJ(g)} on the truncated space, back in the Fock basis.
  TruncatedOperator<Complex> exp(Complex r) const;
  FockVector<Complex> on_vacuum(Complex r) const;

  const TestFunction& function() const { return g_; }
  const BasisPtr& basis() const { return basis_; }

 private:
  TestFunction g_;
  BasisPtr basis_;
  HermitianExponential spectral_;
};

// Exponential of the truncated matrix r·J(g).
TruncatedOperator<Complex> weyl(const TestFunction& g, Complex r, const BasisPtr& basis);

struct EtaVector {
  FockVector<Complex> vector;
  Complex r;
  TestFunction g;
};

// e^{rJ(g)}Ω at the basis cutoff.
EtaVector make_eta(const TestFunction& g, Complex r, const BasisPtr& basis);

// Orthonormal-frame vector <-> Fock coefficients.
Eigen::VectorXcd orthonormal_coordinates(const FockVector<Complex>& v);
FockVector<Complex> from_orthonormal(const Eigen::VectorXcd& x, const BasisPtr& basis);

struct SafeZoneResidual {
  double residual = 0;      // operator 2-norm on levels <= safe_level
  double scalar_shift = 0;  // the predicted multiple of the identity
  int cutoff = 0;
  int safe_level = 0;
};

// e^{iJ(g)}J(f)e^{-iJ(g)} - J(f) - (1/2π)∮g'f. safe_level < 0 selects cutoff/2.
SafeZoneResidual check_trule1(const TestFunction& g, const TestFunction& f, const BasisPtr& basis, int safe_level = -1);
// e^{iJ(g)}T(f)e^{-iJ(g)} - T(f) - J(g'f) - (1/2π)∮½g'²f, Sugawara T.
SafeZoneResidual check_trule2(const TestFunction& g, const TestFunction& f, const BasisPtr& basis, int safe_level = -1);

struct ConjugationReport {
  double residual = 0;
  double alpha = 0, beta = 0;
  int cutoff = 0, safe_level = 0;
  double g_constraint = 0;  // sup_I |g' - 1|
  double f_leakage = 0;     // sup off I of |f|
  double f_tail = 0;
  // residual / (g_constraint + f_leakage + f_tail); infinite when the certificates are all 0.
  double empirical_constant = 0;
};

// e^{iαJ(g)}T̃_{0,β}(f)e^{-iαJ(g)} - T̃_{α,β}(f) on the safe zone. g must carry a
// derivative-one certificate and f a plateau/support certificate for the same interval.
ConjugationReport check_conjugation_identity(double alpha, double beta, const BumpReport& f, const BumpReport& g,
                                             const BasisPtr& basis, int safe_level = -1);

struct ConjugationCase {
  BumpReport f, g;
};
// Independent cases run on up to `threads` workers; results keep input order.
std::vector<ConjugationReport> check_conjugation_identities(double alpha, double beta,
                                                            const std::vector<ConjugationCase>& cases,
                                                            const BasisPtr& basis, int threads = 0);

struct SpectralFloor {
  int cutoff = 0;
  double lowest = 0;
};
struct SpectralFloorReport {
  double certified_min = 0;  // certificate for f >= -slack
  std::vector<SpectralFloor> floors;
};

// Lowest eigenvalue of T̃_{α,β}(f) per cutoff. Diagnostic only. Throws
// std::domain_error when f is not certified >= -nonnegativity_slack.
SpectralFloorReport spectral_floor(const TestFunction& f, double alpha, double beta, const std::vector<int>& cutoffs,
                                   double nonnegativity_slack = 1e-6);

}  // namespace vir
