#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vir/bump.hpp"
#include "vir/dense.hpp"

namespace vir {

enum class Pipeline { verma, fock, continued };
std::string to_string(Pipeline p);
Pipeline parse_pipeline(const std::string& name);

struct ExpectationReport {
  Complex value;
  Pipeline pipeline = Pipeline::verma;
  int cutoff = 0;
  // |F at cutoff - F at cutoff-1|; NaN when not computed (or a degree does not fit).
  double error_estimate = 0;
  double c = 0, h = 0;
  double alpha = 0, beta = 0;  // fock, continued
  double s = 0;                // continued
  double g_constraint = 0;     // continued: sup_I |g' - 1|
  double f_leakage = 0;        // continued: worst support leakage among the functions
};

// Product of exponentials exp(z_1 H_1) ... exp(z_n H_n), applied right to left.
// Adjacent factors with the same generator are merged and zero exponents are
// dropped, so cancelling pairs disappear exactly.
class ExponentialChain {
 public:
  using Generator = std::shared_ptr<const HermitianExponential>;
  void push(const Generator& g, Complex z);
  Eigen::VectorXcd apply(const Eigen::VectorXcd& v) const;
  std::size_t size() const { return factors_.size(); }

 private:
  std::vector<std::pair<Generator, Complex>> factors_;
};

// ⟨Ψ, e^{itT(f_1)}...e^{itT(f_n)}Ψ⟩ on the orthonormalized Verma module.
// Refuses points outside {c >= 1, h > 0} (GramNotPositiveDefinite propagates
// from degenerate modules such as c = 1, h = n²/4).
ExpectationReport F_verma(double t, double c, double h, const std::vector<TestFunction>& functions, int cutoff,
                          bool error_estimate = true);

// ⟨Ω, e^{itT̃_{α,β}(f_1)}...Ω⟩ in the Fock space.
ExpectationReport F_fock(double t, double alpha, double beta, const std::vector<TestFunction>& functions, int cutoff,
                         bool error_estimate = true);

// ⟨η_{-s}, e^{itT̃_{0,β}(f_1)}...η_s⟩ with η_r = e^{rJ(g)}Ω, β = √((c-1)/12),
// s = √(2(h_c - h)), h_c = (c-1)/24. Requires c > 1 and 0 < h <= h_c (s = 0 at
// the upper end), a derivative-one g and plateau/support certificates for every
// f_j on the interval of g.
ExpectationReport F_continued(double t, double c, double h, const std::vector<BumpReport>& functions,
                              const BumpReport& g, int cutoff, bool error_estimate = true);

// (α, β) with c = 1 + 12β², h = ½(α² + β²), β = √((c-1)/12). Requires h >= h_c.
std::pair<double, double> fock_parameters(double c, double h);

// fock when c >= 1 and h >= h_c, verma when c > 1 and 0 < h < h_c.
Pipeline select_pipeline(double c, double h);

// Evaluates F(t, c, h) by the selected pipeline (fock via fock_parameters).
// The continued pipeline needs certificates and is not reachable from here.
ExpectationReport evaluate_point(double t, double c, double h, const std::vector<TestFunction>& functions, int cutoff,
                                 Pipeline pipeline, bool error_estimate = true);

struct FactorizationReport {
  ExpectationReport left, right, combined;
  double residual = 0;  // |F_left F_right - F_combined|
};

// F(t,c,h) F(t,c',h') against F(t,c+c',h+h'), each point by `pipeline` or by
// select_pipeline when absent.
FactorizationReport check_tensor_factorization(double t, double c1, double h1, double c2, double h2,
                                               const std::vector<TestFunction>& functions, int cutoff,
                                               std::optional<Pipeline> pipeline = std::nullopt);

struct SmoothnessProbe {
  std::vector<double> h;
  std::vector<Complex> values;
  std::vector<double> error_estimates;
  int fit_degree = 0;
  double fit_residual = 0;  // max |F(h) - p(h)| over the probe points
};

// F_fock along h >= h_c at fixed β (α = √(2h - β²)), least-squares fitted by a
// complex polynomial in h. A fit-quality check only.
SmoothnessProbe smoothness_probe(double t, double beta, const std::vector<TestFunction>& functions,
                                 const std::vector<double>& h_values, int cutoff, int fit_degree);

}  // namespace vir
