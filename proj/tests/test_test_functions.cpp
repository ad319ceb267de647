#include "doctest.h"

#include <numbers>
#include <random>

#include "vir/bump.hpp"
#include "vir/test_function.hpp"
#include "random_functions.hpp"

using namespace vir;

namespace {

const double kPi = std::numbers::pi;

// Oracle: midpoint quadrature of the defining integral on a fine grid.
double cocycle_quadrature(const TestFunction& f, const TestFunction& g) {
  auto d1 = f.derivative(), d3 = f.derivative().derivative().derivative();
  const int M = 4096;
  double s = 0;
  for (int j = 0; j < M; ++j) {
    double t = 2 * kPi * j / M;
    s += (d1.evaluate(t) + d3.evaluate(t)) * g.evaluate(t);
  }
  return s / M;
}

}  // namespace

TEST_CASE("derivative") {
  CHECK(TestFunction::constant(1.0).derivative().is_zero());
  auto d = TestFunction::cosine(1).derivative();
  CHECK(d == TestFunction::sine(1, -1.0));
  auto f = TestFunction::from_map(2, {{2, 1.0}, {-2, 1.0}});
  auto g = f.derivative();
  CHECK(g.coefficient(2) == Complex(0, 2));
  CHECK(g.coefficient(-2) == Complex(0, -2));
}

TEST_CASE("reality constraint") {
  CHECK_THROWS_AS(TestFunction::from_map(1, {{1, Complex(1, 0)}}), std::invalid_argument);
  CHECK_THROWS_AS(ExactTestFunction::from_map(1, {{1, ExactComplex(1, 1)}, {-1, ExactComplex(1, 1)}}), std::invalid_argument);
  CHECK_NOTHROW(TestFunction::from_map(1, {{1, Complex(1, 0)}, {-1, Complex(1, 1e-14)}}));
  CHECK_THROWS_AS(TestFunction(2, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("bracket") {
  auto c1 = ExactTestFunction::cosine(1), s1 = ExactTestFunction::sine(1);
  auto c2h = ExactTestFunction::cosine(2, ratio(1, 2)), s2 = ExactTestFunction::sine(2);
  CHECK(bracket(c1, s1) == ExactTestFunction::constant(1));
  CHECK(bracket(c2h, s2) == ExactTestFunction::constant(1));
  CHECK(bracket(c1, c1).is_zero());
  CHECK(bracket(c1, s1).degree() == 2);

  std::mt19937 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = testing_support::random_exact_function(rng, 1 + trial % 4), g = testing_support::random_exact_function(rng, 1 + (trial + 1) % 4), h = testing_support::random_exact_function(rng, 1 + (trial + 2) % 4);
    CHECK(bracket(f, g) == bracket(g, f).scaled(-1));
    CHECK(bracket(f, g + h) == bracket(f, g) + bracket(f, h));
    auto jac = bracket(f, bracket(g, h)) + bracket(g, bracket(h, f)) + bracket(h, bracket(f, g));
    CHECK(jac.is_zero());
    // pointwise f g' - g f'
    CHECK(bracket(f, g) == f * g.derivative() - g * f.derivative());
  }
}

TEST_CASE("cocycle") {
  for (int n = 1; n <= 3; ++n)
    CHECK(cocycle(ExactTestFunction::cosine(n), ExactTestFunction::sine(n)) == ratio(n * n * n - n, 2));
  CHECK(cocycle(ExactTestFunction::cosine(2), ExactTestFunction::sine(2)) == 3);
  CHECK(cocycle(ExactTestFunction::cosine(1), ExactTestFunction::sine(1)) == 0);

  std::mt19937 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto f = testing_support::random_exact_function(rng, 3), g = testing_support::random_exact_function(rng, 4);
    CHECK(cocycle(f, f) == 0);
    CHECK(cocycle(f, g) == -cocycle(g, f));
    auto ff = to_floating(f), gf = to_floating(g);
    CHECK(std::abs(cocycle(ff, gf) + cocycle(gf, ff)) <= 1e-12);
    CHECK(std::abs(cocycle(ff, gf) - cocycle_quadrature(ff, gf)) <= 1e-9);
  }
}

TEST_CASE("witness quadruple") {
  auto f1 = ExactTestFunction::cosine(1), g1 = ExactTestFunction::sine(1);
  auto f2 = ExactTestFunction::cosine(2, ratio(1, 2)), g2 = ExactTestFunction::sine(2);
  CHECK(bracket(f1, g1) == ExactTestFunction::constant(1));
  CHECK(bracket(f2, g2) == ExactTestFunction::constant(1));
  CHECK(cocycle(f1, g1) == 0);
  CHECK(cocycle(f2, g2) == ratio(3, 2));  // half amplitude halves the cocycle
  CHECK(cocycle(ExactTestFunction::cosine(2), g2) == 3);
}

TEST_CASE("fourier_of_samples") {
  auto one = fourier_of_samples(std::vector<double>(16, 1.0), 3);
  CHECK(one.coefficient(0) == Complex(1.0));
  for (int n = 1; n <= 3; ++n) CHECK(std::abs(one.coefficient(n)) <= 1e-15);

  std::vector<double> s(64);
  for (int j = 0; j < 64; ++j) s[j] = std::cos(3 * 2 * kPi * j / 64);
  auto f = fourier_of_samples(s, 8);
  for (int n = -8; n <= 8; ++n) {
    Complex expect = (n == 3 || n == -3) ? Complex(0.5) : Complex(0.0);
    CHECK(std::abs(f.coefficient(n) - expect) <= 1e-12);
  }
  CHECK_THROWS_AS(fourier_of_samples(std::vector<double>(16, 0.0), 8), std::invalid_argument);
}

TEST_CASE("interval") {
  Interval I(-kPi / 4, kPi / 4);
  CHECK(I.contains(0.0));
  CHECK_FALSE(I.contains(kPi / 4));
  CHECK(I.contains(2 * kPi + 0.1));
  CHECK_FALSE(I.contains(kPi));
  Interval J(3.0, 4.0);  // wraps through π
  CHECK(J.contains(-2.5));
  CHECK_THROWS(Interval(0, 0));
  CHECK_THROWS(Interval(0, 2 * kPi));
}

TEST_CASE("certified sup bounds the true sup") {
  auto q = TestFunction::cosine(5) + TestFunction::sine(2, 0.3);
  auto b = certified_sup(q, Arc{0.0, 2 * kPi});
  double m = 0;
  for (double v : sample(q, 20000)) m = std::max(m, std::abs(v));
  CHECK(b.bound >= m);
  CHECK(b.bound <= m * 1.02);
  CHECK(certified_min(q) <= -m * 0.99);
}

TEST_CASE("make_bump plateau") {
  Interval I(-kPi / 2, kPi / 2);
  auto r = make_bump(I, 64, BumpProfile::plateau, 1e-6);
  CHECK(r.tail_sup <= 1e-6);
  CHECK(r.constraint_residual <= 1e-6);
  CHECK(r.function.degree() == 64);
  // Re-check on a 10x finer grid than the certificate.
  int fine = 10 * r.certification_grid;
  auto vals = sample(r.function, fine);
  double worst_out = 0, peak = 0, lowest = 1;
  for (int j = 0; j < fine; ++j) {
    double t = 2 * kPi * j / fine;
    if (!I.contains(t)) worst_out = std::max(worst_out, std::abs(vals[j]));
    peak = std::max(peak, vals[j]);
    lowest = std::min(lowest, vals[j]);
  }
  CHECK(worst_out <= r.constraint_residual);
  CHECK(lowest >= -r.tail_sup - r.constraint_residual);
  CHECK(peak == doctest::Approx(1.0).epsilon(1e-3));

  CHECK_THROWS_AS(make_bump(I, 4, BumpProfile::plateau, 1e-8), std::domain_error);
  auto s = r.scaled(0.1);
  CHECK(s.constraint_residual == doctest::Approx(0.1 * r.constraint_residual));
}

TEST_CASE("make_bump derivative-one") {
  Interval I(-kPi / 4, kPi / 4);
  auto r = make_bump(I, 14, BumpProfile::derivative_one, 1e-3);
  CHECK(r.constraint_residual <= 1e-3);
  auto dg = r.function.derivative();
  CHECK(dg.coefficient(0) == Complex(0.0));  // ∮∂θg = 0 always
  int fine = 10 * r.certification_grid;
  auto vals = sample(dg, fine);
  double worst = 0;
  for (int j = 0; j < fine; ++j)
    if (I.contains(2 * kPi * j / fine)) worst = std::max(worst, std::abs(vals[j] - 1));
  CHECK(worst <= r.constraint_residual);
  CHECK_THROWS_AS(make_bump(I, 4, BumpProfile::derivative_one, 1e-8), std::domain_error);
  CHECK_THROWS_AS(r.scaled(2.0), std::logic_error);
}

TEST_CASE("support certificate of an unsupported function") {
  auto r = certify_support(TestFunction::cosine(1), Interval(-kPi / 4, kPi / 4));
  CHECK(r.constraint_residual >= 1.0);
}
