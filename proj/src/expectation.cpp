#include "vir/expectation.hpp"

#include <cmath>
#include <limits>

#include "vir/smeared.hpp"
#include "vir/verma.hpp"

namespace vir {

std::string to_string(Pipeline p) {
  switch (p) {
    case Pipeline::verma: return "verma";
    case Pipeline::fock: return "fock";
    case Pipeline::continued: return "continued";
  }
  return "?";
}

Pipeline parse_pipeline(const std::string& name) {
  if (name == "verma") return Pipeline::verma;
  if (name == "fock") return Pipeline::fock;
  if (name == "continued") return Pipeline::continued;
  throw std::invalid_argument("unknown pipeline '" + name + "'");
}

void ExponentialChain::push(const Generator& g, Complex z) {
  if (!factors_.empty() && factors_.back().first == g) {
    z += factors_.back().second;
    factors_.pop_back();
  }
  if (z != Complex(0)) factors_.emplace_back(g, z);
}

Eigen::VectorXcd ExponentialChain::apply(const Eigen::VectorXcd& v) const {
  Eigen::VectorXcd x = v;
  for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) x = it->first->apply(it->second, x);
  return x;
}

namespace {

using Generator = ExponentialChain::Generator;
const double kNaN = std::numeric_limits<double>::quiet_NaN();

// One generator per distinct function so that repeats merge in the chain. Nothing
// is diagonalized at t = 0, where every factor drops out anyway.
template <class Build>
std::vector<Generator> generators(const std::vector<TestFunction>& fs, double t, Build build) {
  std::vector<Generator> out(fs.size());
  if (t == 0) return out;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    for (std::size_t j = 0; j < i && !out[i]; ++j)
      if (fs[j] == fs[i]) out[i] = out[j];
    if (!out[i]) out[i] = std::make_shared<const HermitianExponential>(build(fs[i]));
  }
  return out;
}

Complex ground_value(const ExponentialChain& chain, int dim) {
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(dim);
  psi(0) = 1;
  return chain.apply(psi)(0);
}

void push_fields(ExponentialChain& chain, const std::vector<Generator>& gens, double t) {
  for (const auto& g : gens)
    if (g) chain.push(g, Complex(0, t));
}

int max_degree(const std::vector<TestFunction>& fs) {
  int d = 0;
  for (const auto& f : fs) d = std::max(d, f.degree());
  return d;
}

void check_fits(const std::vector<TestFunction>& fs, int cutoff) {
  if (max_degree(fs) > cutoff) throw std::invalid_argument("function degree exceeds cutoff");
}

std::vector<TestFunction> functions_of(const std::vector<BumpReport>& reports) {
  std::vector<TestFunction> fs;
  for (const auto& r : reports) fs.push_back(r.function);
  return fs;
}

void refuse_verma(double c, double h) {
  std::string at = "(c, h) = (" + std::to_string(c) + ", " + std::to_string(h) + ")";
  if (c == 1 && h == 0) throw std::domain_error("verma pipeline cannot represent " + at + "; use the fock pipeline with alpha = beta = 0");
  if (h == 0) throw std::domain_error("verma pipeline cannot represent the degenerate vacuum module at " + at);
  auto a = classify(c, h);
  if (a.kind == Admissibility::discrete_series)
    throw std::domain_error("verma pipeline cannot represent discrete-series point " + at + " (null vectors)");
  throw std::domain_error("verma pipeline: " + at + " is not a unitary highest weight");
}

}  // namespace

ExpectationReport F_verma(double t, double c, double h, const std::vector<TestFunction>& functions, int cutoff,
                          bool error_estimate) {
  if (!(c >= 1 && h > 0)) refuse_verma(c, h);
  check_fits(functions, cutoff);
  ExpectationReport rep;
  rep.pipeline = Pipeline::verma;
  rep.cutoff = cutoff;
  rep.c = c;
  rep.h = h;
  auto realization = orthonormal_L_matrices(c, h, cutoff);
  auto gens = generators(functions, t, [&](const TestFunction& f) {
    TruncatedOperator<Complex> op{realization.space, SparseMatrix<Complex>(realization.space->dim(), realization.space->dim()), 0};
    for (int n = -f.degree(); n <= f.degree(); ++n)
      if (f.coefficient(n) != Complex(0)) op = op + scaled(realization.gen(n), f.coefficient(n));
    return HermitianExponential(orthonormal_dense(op));
  });
  ExponentialChain chain;
  push_fields(chain, gens, t);
  rep.value = ground_value(chain, realization.space->dim());
  rep.error_estimate = kNaN;
  if (error_estimate && cutoff > 0 && max_degree(functions) <= cutoff - 1)
    rep.error_estimate = std::abs(rep.value - F_verma(t, c, h, functions, cutoff - 1, false).value);
  return rep;
}

ExpectationReport F_fock(double t, double alpha, double beta, const std::vector<TestFunction>& functions, int cutoff,
                         bool error_estimate) {
  check_fits(functions, cutoff);
  auto basis = make_fock_basis(cutoff);
  auto family = shifted_family<Complex>(alpha, beta, basis);
  ExpectationReport rep;
  rep.pipeline = Pipeline::fock;
  rep.cutoff = cutoff;
  rep.alpha = alpha;
  rep.beta = beta;
  rep.c = family.central_charge;
  rep.h = family.lowest_energy;
  auto gens = generators(functions, t, [&](const TestFunction& f) {
    return HermitianExponential(orthonormal_dense(smear_T(f, family).op));
  });
  ExponentialChain chain;
  push_fields(chain, gens, t);
  rep.value = ground_value(chain, basis->dim());
  rep.error_estimate = kNaN;
  if (error_estimate && cutoff > 0 && max_degree(functions) <= cutoff - 1)
    rep.error_estimate = std::abs(rep.value - F_fock(t, alpha, beta, functions, cutoff - 1, false).value);
  return rep;
}

ExpectationReport F_continued(double t, double c, double h, const std::vector<BumpReport>& functions,
                              const BumpReport& g, int cutoff, bool error_estimate) {
  double hc = (c - 1) / 24;
  if (!(c > 1)) throw std::domain_error("continued pipeline needs c > 1; use fock or verma");
  if (!(h > 0 && h <= hc))
    throw std::domain_error("continued pipeline needs 0 < h <= (c-1)/24 = " + std::to_string(hc) +
                            "; use fock or verma for this point");
  if (g.profile != BumpProfile::derivative_one)
    throw std::invalid_argument("continued pipeline: g needs a derivative-one certificate");
  ExpectationReport rep;
  for (const auto& f : functions) {
    if (f.profile != BumpProfile::plateau) throw std::invalid_argument("continued pipeline: f needs a support certificate");
    if (std::abs(f.interval.start() - g.interval.start()) > 1e-12 ||
        std::abs(f.interval.length() - g.interval.length()) > 1e-12)
      throw std::invalid_argument("continued pipeline: certificates refer to different intervals");
    rep.f_leakage = std::max(rep.f_leakage, f.constraint_residual);
  }
  auto fs = functions_of(functions);
  check_fits(fs, cutoff);
  if (g.function.degree() > cutoff) throw std::invalid_argument("degree of g exceeds cutoff");

  rep.pipeline = Pipeline::continued;
  rep.cutoff = cutoff;
  rep.c = c;
  rep.h = h;
  rep.beta = std::sqrt((c - 1) / 12);
  rep.s = std::sqrt(2 * (hc - h));
  rep.g_constraint = g.constraint_residual;

  auto basis = make_fock_basis(cutoff);
  auto family = shifted_family<Complex>(0.0, rep.beta, basis);
  auto gens = generators(fs, t, [&](const TestFunction& f) {
    return HermitianExponential(orthonormal_dense(smear_T(f, family).op));
  });
  auto jg = std::make_shared<const HermitianExponential>(orthonormal_dense(smear_J(g.function, basis).op));
  ExponentialChain chain;
  chain.push(jg, -rep.s);
  push_fields(chain, gens, t);
  chain.push(jg, rep.s);
  rep.value = ground_value(chain, basis->dim());
  rep.error_estimate = kNaN;
  if (error_estimate && cutoff > 0 && std::max(max_degree(fs), g.function.degree()) <= cutoff - 1)
    rep.error_estimate = std::abs(rep.value - F_continued(t, c, h, functions, g, cutoff - 1, false).value);
  return rep;
}

std::pair<double, double> fock_parameters(double c, double h) {
  if (c < 1) throw std::domain_error("fock pipeline needs c >= 1");
  double beta = std::sqrt((c - 1) / 12);
  double a2 = 2 * h - beta * beta;
  if (a2 < -1e-14) throw std::domain_error("fock pipeline needs h >= (c-1)/24");
  return {std::sqrt(std::max(0.0, a2)), beta};
}

Pipeline select_pipeline(double c, double h) {
  if (c >= 1 && h >= (c - 1) / 24) return Pipeline::fock;
  if (c > 1 && h > 0) return Pipeline::verma;
  throw std::domain_error("no pipeline represents (c, h) = (" + std::to_string(c) + ", " + std::to_string(h) + ")");
}

ExpectationReport evaluate_point(double t, double c, double h, const std::vector<TestFunction>& functions, int cutoff,
                                 Pipeline pipeline, bool error_estimate) {
  switch (pipeline) {
    case Pipeline::verma: return F_verma(t, c, h, functions, cutoff, error_estimate);
    case Pipeline::fock: {
      auto [alpha, beta] = fock_parameters(c, h);
      auto rep = F_fock(t, alpha, beta, functions, cutoff, error_estimate);
      rep.c = c;
      rep.h = h;
      return rep;
    }
    case Pipeline::continued: break;
  }
  throw std::invalid_argument("the continued pipeline needs certified functions and g");
}

FactorizationReport check_tensor_factorization(double t, double c1, double h1, double c2, double h2,
                                               const std::vector<TestFunction>& functions, int cutoff,
                                               std::optional<Pipeline> pipeline) {
  auto at = [&](double c, double h) {
    return evaluate_point(t, c, h, functions, cutoff, pipeline ? *pipeline : select_pipeline(c, h));
  };
  FactorizationReport rep{at(c1, h1), at(c2, h2), at(c1 + c2, h1 + h2), 0.0};
  rep.residual = std::abs(rep.left.value * rep.right.value - rep.combined.value);
  return rep;
}

SmoothnessProbe smoothness_probe(double t, double beta, const std::vector<TestFunction>& functions,
                                 const std::vector<double>& h_values, int cutoff, int fit_degree) {
  if (fit_degree < 0 || std::size_t(fit_degree) >= h_values.size())
    throw std::invalid_argument("smoothness probe needs more points than the fit degree");
  SmoothnessProbe p;
  p.fit_degree = fit_degree;
  double lo = h_values.front(), hi = h_values.front();
  for (double h : h_values) {
    double a2 = 2 * h - beta * beta;
    if (a2 < 0) throw std::domain_error("smoothness probe: h below (c-1)/24");
    auto rep = F_fock(t, std::sqrt(a2), beta, functions, cutoff, true);
    p.h.push_back(h);
    p.values.push_back(rep.value);
    p.error_estimates.push_back(rep.error_estimate);
    lo = std::min(lo, h);
    hi = std::max(hi, h);
  }
  double mid = (lo + hi) / 2, half = hi > lo ? (hi - lo) / 2 : 1.0;
  int m = int(h_values.size());
  Eigen::MatrixXcd V(m, fit_degree + 1);
  Eigen::VectorXcd y(m);
  for (int i = 0; i < m; ++i) {
    double x = (p.h[i] - mid) / half;
    for (int k = 0; k <= fit_degree; ++k) V(i, k) = std::pow(x, k);
    y(i) = p.values[i];
  }
  Eigen::VectorXcd coef = V.colPivHouseholderQr().solve(y);
  p.fit_residual = (V * coef - y).cwiseAbs().maxCoeff();
  return p;
}

}  // namespace vir
