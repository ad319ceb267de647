#include "doctest.h"

#include "oracles.hpp"
#include "vir/virasoro_fock.hpp"

using namespace vir;

TEST_CASE("Sugawara against the untruncated polynomial model") {
  const int N = 8;
  auto basis = make_fock_basis(N);
  const auto& tab = basis->partitions();
  for (int n = -N; n <= N; ++n) {
    auto L = sugawara_L<ExactComplex>(n, *basis);
    CHECK(L.shift == std::abs(n));
    CHECK(L.band_excess() <= 0);
    for (int c = 0; c < tab.size(); ++c) {
      oracle::Poly v{{oracle::monomial_of(tab.at(c).parts), mpq_class(1)}};
      auto w = oracle::apply_sugawara(n, v);
      std::map<int, mpq_class> expected;
      for (const auto& [mono, coef] : w) {
        if (oracle::poly_level(mono) > N) continue;
        std::vector<int> parts;
        for (int k = static_cast<int>(mono.size()); k >= 1; --k)
          for (int e = 0; e < mono[k - 1]; ++e) parts.push_back(k);
        expected[tab.index_of(Partition{parts})] = coef;
      }
      // The truncated matrix is the exact compression on every column.
      REQUIRE(L.matrix.column(c).size() == expected.size());
      for (const auto& [r, val] : L.matrix.column(c)) CHECK(val == ExactComplex(expected[r]));
    }
  }
}

TEST_CASE("Sugawara examples") {
  auto basis = make_fock_basis(6);
  auto fam = shifted_family<Complex>(0.0, 0.0, basis);
  auto v = act(fam.current(-1), FockVector<Complex>::vacuum(basis));
  auto w = act(fam.gen(0), v);
  for (int i = 0; i < basis->dim(); ++i) CHECK(std::abs(w.coeffs[i] - v.coeffs[i]) == 0.0);
  CHECK(fam.gen(1).matrix.column(0).empty());
  auto omega = FockVector<Complex>::vacuum(basis);
  auto x = act(fam.gen(2), act(fam.gen(-2), omega));
  CHECK(2.0 * x.coeffs[0].real() == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(fam.central_charge == 1.0);
  CHECK(fam.lowest_energy == 0.0);
}

TEST_CASE("shifted family parameters") {
  auto basis = make_fock_basis(6);
  CHECK(shifted_family<Complex>(0.0, 1.0, basis).central_charge == 13.0);
  auto f = shifted_family<Complex>(1.0, 0.0, basis);
  CHECK(f.lowest_energy == 0.5);
  auto col = f.gen(0).matrix.column(0);
  REQUIRE(col.size() == 1);
  CHECK(col[0].first == 0);
  CHECK(col[0].second == Complex(0.5));
  for (int n = 1; n <= 6; ++n) CHECK(f.gen(n).matrix.column(0).empty());
}

TEST_CASE("Virasoro relations, exact arithmetic") {
  auto basis = make_fock_basis(10);
  const std::vector<std::pair<Rational, Rational>> params{
      {0, 0}, {1, 0}, {0, ratio(1, 2)}, {1, ratio(1, 2)}, {ratio(-2, 3), ratio(5, 7)}};
  for (const auto& [a, b] : params) {
    auto fam = shifted_family<ExactComplex>(a, b, basis);
    CHECK(fam.central_charge == 1 + 12 * b * b);
    auto r = verify_virasoro(fam, 3);
    CHECK(r.exact);
    CHECK(r.exactly_zero);
    CHECK(r.zone_level == 4);
    CHECK(measure_central_charge(fam) == fam.central_charge);
    // Adjointness on exact zones
    for (int n = 0; n <= 5; ++n) {
      auto adj = weighted_adjoint(fam.gen(n).matrix, *basis->space());
      CHECK(measure_residual(adj - fam.gen(-n).matrix, *basis->space(), 10 - n).exactly_zero);
    }
  }
}

TEST_CASE("Virasoro relations, floating") {
  auto basis = make_fock_basis(10);
  auto fam = shifted_family<Complex>(0.5, 0.5, basis);
  auto r = verify_virasoro(fam, 3);
  CHECK_FALSE(r.exact);
  CHECK(r.max_abs <= 1e-9);
  // n = m contributes exactly nothing
  auto self = commutator_on_zone(fam.gen(2), fam.gen(2), 6);
  CHECK(measure_residual(self, *basis->space(), 6).exactly_zero);
  CHECK_THROWS_AS(verify_virasoro(fam, 6), std::invalid_argument);
}

TEST_CASE("covariance") {
  auto basis = make_fock_basis(10);
  auto fam = shifted_family<ExactComplex>(Rational(1), ratio(1, 2), basis);
  auto r = verify_covariance(fam, 3);
  CHECK(r.exactly_zero);
  // [L_0, J_{-1}] = J_{-1}
  auto c = commutator_on_zone(fam.sugawara_gen(0), fam.current(-1), 9);
  CHECK(measure_residual(c - fam.current(-1).matrix, *basis->space(), 9).exactly_zero);
  // [L_1, J_{-1}]Ω = 0
  auto d = commutator_on_zone(fam.sugawara_gen(1), fam.current(-1), 8);
  CHECK(d.column(0).empty());
}

TEST_CASE("central charge and weight on a parameter grid") {
  auto basis = make_fock_basis(8);
  for (double a : {0.0, 0.5, 1.3})
    for (double b : {0.0, 0.5, 1.0}) {
      auto fam = shifted_family<Complex>(a, b, basis);
      CHECK(std::abs(measure_central_charge(fam) - (1 + 12 * b * b)) <= 1e-9);
      CHECK(fam.gen(0).matrix.column(0).size() <= 1);
      CHECK(std::abs(fam.gen(0).matrix.at(0, 0) - Complex(0.5 * (a * a + b * b))) <= 1e-12);
    }
  auto small = make_fock_basis(3);
  CHECK_THROWS(measure_central_charge(shifted_family<Complex>(0.0, 0.0, small)));
}

TEST_CASE("descendant span dimensions") {
  auto basis = make_fock_basis(8);
  auto fam = shifted_family<Complex>(1.0, 0.5, basis);
  auto dims = span_dimensions(fam, 8);
  std::vector<int> p{1, 1, 2, 3, 5, 7, 11, 15, 22};
  CHECK(dims == p);
  // At c = 1, h = 0 the vacuum is killed by L_{-1}: the span is degenerate.
  auto deg = span_dimensions(shifted_family<Complex>(0.0, 0.0, basis), 3);
  CHECK(deg[1] == 0);
}
