#include "doctest.h"

#include <Eigen/Dense>

#include "vir/verma.hpp"
#include "vir/virasoro_fock.hpp"

using namespace vir;

namespace {

Polynomial2 det(std::vector<std::vector<Polynomial2>> a) {
  // Laplace expansion; only used on tiny matrices.
  std::size_t n = a.size();
  if (n == 0) return Polynomial2(1);
  if (n == 1) return a[0][0];
  Polynomial2 acc;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<Polynomial2>> minor;
    for (std::size_t i = 1; i < n; ++i) {
      std::vector<Polynomial2> row;
      for (std::size_t k = 0; k < n; ++k)
        if (k != j) row.push_back(a[i][k]);
      minor.push_back(row);
    }
    Polynomial2 term = a[0][j] * det(minor);
    if (j % 2) acc -= term; else acc += term;
  }
  return acc;
}

Rational det_exact(std::vector<std::vector<Rational>> a) {
  std::size_t n = a.size();
  Rational d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) { std::swap(a[p], a[c]); d = -d; }
    d *= a[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      Rational f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
    }
  }
  return d;
}

const Polynomial2 C = Polynomial2::c(), H = Polynomial2::h();

}  // namespace

TEST_CASE("classify") {
  CHECK(classify(1.2, 0.3).kind == Admissibility::continuum);
  auto d = classify(0.5, 0.5);
  CHECK(d.kind == Admissibility::discrete_series);
  CHECK(d.m == 3);
  CHECK(d.p == 2);
  CHECK(d.q == 1);
  CHECK(classify(0.5, 0.3).kind == Admissibility::not_admissible);
  CHECK(classify(0.5, 0.5 + 1e-10).kind == Admissibility::discrete_series);
  CHECK(classify(0.5, 0.5 + 1e-7).kind == Admissibility::not_admissible);
  CHECK(classify(1.0, -0.1).kind == Admissibility::not_admissible);
  // 1/10 at c = 7/10 needs 5p - 4q = ±3, which has no solution with q < p.
  CHECK(classify(0.7, 0.1).kind == Admissibility::not_admissible);
  CHECK(classify(0.7, 0.4375).kind == Admissibility::discrete_series);
  auto ex = classify_exact(ratio(1, 2), ratio(1, 2));
  CHECK(ex.kind == Admissibility::discrete_series);
  CHECK(ex.m == 3);
  CHECK(classify_exact(ratio(1, 2), ratio(1, 2) + ratio(1, 1000000000)).kind ==
        Admissibility::not_admissible);
  CHECK(classify_exact(ratio(7, 10), ratio(3, 5)).kind == Admissibility::discrete_series);
  // The formula as stated misses the vacuum weight at c = 1/2.
  CHECK(classify_exact(ratio(1, 2), Rational(0)).kind == Admissibility::not_admissible);
  CHECK(classify_exact(ratio(1, 2), ratio(1, 16)).kind == Admissibility::not_admissible);
}

TEST_CASE("discrete-series members reproduce the formula exactly") {
  for (int m = 3; m <= 9; ++m)
    for (int p = 1; p <= m + 1; ++p)
      for (int q = 1; q < p; ++q) {
        Rational c = 1 - ratio(6, m * (m + 1));
        Rational r = (m + 1) * p - m * q;
        Rational h = (r * r - 1) / (4 * m * (m + 1));
        auto a = classify_exact(c, h);
        REQUIRE(a.kind == Admissibility::discrete_series);
        CHECK(a.m == m);
        Rational r2 = (m + 1) * a.p - m * a.q;
        CHECK((r2 * r2 - 1) / (4 * m * (m + 1)) == h);
        auto f = classify(c.get_d(), h.get_d());
        CHECK(f.kind == Admissibility::discrete_series);
      }
}

TEST_CASE("Gram matrices, symbolic") {
  auto g0 = gram_matrix(C, H, 0);
  CHECK(g0.entries[0][0] == Polynomial2(1));
  auto g1 = gram_matrix(C, H, 1);
  CHECK(g1.entries[0][0] == Polynomial2(2) * H);
  auto g2 = gram_matrix(C, H, 2);
  CHECK(g2.entries[0][0] == Polynomial2(4) * H + Polynomial2(ratio(1, 2)) * C);
  CHECK(g2.entries[0][1] == Polynomial2(6) * H);
  CHECK(g2.entries[1][1] == Polynomial2(8) * H * H + Polynomial2(4) * H);
  // Level-2 Kac determinant 2h(16h² + 2(c-5)h + c)
  Polynomial2 k2 = Polynomial2(2) * H * (Polynomial2(16) * H * H + Polynomial2(2) * (C - Polynomial2(5)) * H + C);
  CHECK(det(g2.entries) == k2);
  // Level 3 factors as 48h²(16h² + 2(c-5)h + c)(3h² + (c-7)h + c + 2).
  auto g3 = gram_matrix(C, H, 3);
  Polynomial2 k3 = Polynomial2(48) * H * H * (Polynomial2(16) * H * H + Polynomial2(2) * (C - Polynomial2(5)) * H + C) *
                   (Polynomial2(3) * H * H + (C - Polynomial2(7)) * H + C + Polynomial2(2));
  CHECK(det(g3.entries) == k3);

  for (int k = 0; k <= 6; ++k) {
    auto a = gram_matrix(C, H, k);
    auto b = gram_matrix_by_words(C, H, k);
    CHECK(a.entries == b.entries);
    for (std::size_t i = 0; i < a.entries.size(); ++i)
      for (std::size_t j = 0; j < a.entries.size(); ++j) CHECK(a.entries[i][j] == a.entries[j][i]);
  }
}

TEST_CASE("two reducers agree exactly on a (c,h) grid") {
  const std::vector<std::pair<Rational, Rational>> grid{
      {ratio(3, 2), ratio(1, 10)}, {ratio(1, 2), ratio(1, 2)}, {ratio(1, 2), ratio(3, 10)},
      {Rational(25), ratio(7, 3)}, {Rational(-2), ratio(-1, 5)}};
  for (const auto& [c, h] : grid)
    for (int k = 0; k <= 6; ++k) CHECK(gram_matrix(c, h, k).entries == gram_matrix_by_words(c, h, k).entries);
}

TEST_CASE("Gram determinants positive in the open continuum") {
  for (Rational c : {ratio(11, 10), ratio(3, 2), Rational(2), Rational(5), Rational(26)})
    for (Rational h : {ratio(1, 100), ratio(1, 10), ratio(1, 2), Rational(1), Rational(3)}) {
      VermaModule<Rational> mod(c, h, 6);
      for (int k = 0; k <= 6; ++k) CHECK(det_exact(mod.gram(k)) > 0);
    }
}

TEST_CASE("positivity scan") {
  auto a = positivity_scan(1.5, 0.1, 6);
  CHECK(a.positive_definite);
  CHECK_FALSE(a.first_failing_level);
  for (const auto& l : a.levels) CHECK(l.min_eigenvalue > 0);

  auto b = positivity_scan(0.5, 0.5, 6);
  CHECK_FALSE(b.positive_definite);
  CHECK(b.positive_semidefinite);

  auto d = positivity_scan(0.5, 0.3, 6);
  CHECK_FALSE(d.positive_semidefinite);
  REQUIRE(d.first_failing_level);
  CHECK(*d.first_failing_level == 2);  // 1.45·1.92 - 1.8² < 0 at level 2
  CHECK(d.levels[2].inertia.negative == 1);
  CHECK(d.levels[2].min_eigenvalue < 0);
}

TEST_CASE("exact inertia") {
  std::vector<std::vector<Rational>> z{{0, 1}, {1, 0}};
  auto i = exact_inertia(z);
  CHECK(i.positive == 1);
  CHECK(i.negative == 1);
  std::vector<std::vector<Rational>> s{{1, 2, 0}, {2, 4, 0}, {0, 0, -3}};
  auto j = exact_inertia(s);
  CHECK(j.positive == 1);
  CHECK(j.negative == 1);
  CHECK(j.zero == 1);
}

TEST_CASE("Fock descendant Gram equals the Verma Gram") {
  auto basis = make_fock_basis(7);
  for (auto [a, b] : std::vector<std::pair<Rational, Rational>>{{1, ratio(1, 2)}, {ratio(1, 3), 2}}) {
    auto fam = shifted_family<ExactComplex>(a, b, basis);
    for (int k = 0; k <= 6; ++k) {
      auto fg = descendant_gram(fam, k);
      auto vg = gram_matrix(fam.central_charge, fam.lowest_energy, k);
      for (std::size_t i = 0; i < fg.size(); ++i)
        for (std::size_t j = 0; j < fg.size(); ++j) CHECK(fg[i][j] == ExactComplex(vg.entries[i][j]));
    }
  }
}

TEST_CASE("orthonormal L matrices") {
  const int N = 8;
  auto v = orthonormal_L_matrices(2.0, 0.5, N);
  CHECK(v.space->dim() == 67);
  for (int k = 0; k <= N; ++k) CHECK(v.space->level_dim(k) == static_cast<int>(enumerate_partitions(k).size()));
  for (int i = 0; i < v.space->dim(); ++i) {
    CHECK(v.gen(0).matrix.column(i).size() == 1);
    CHECK(std::abs(v.gen(0).matrix.at(i, i) - Complex(0.5 + v.space->level[i])) <= 1e-12);
  }
  std::vector<Complex> psi(v.space->dim());
  psi[0] = 1;
  auto w = v.gen(2).matrix.apply(v.gen(-2).matrix.apply(psi));
  CHECK(std::abs(w[0] - Complex(4 * 0.5 + 1.0)) <= 1e-12);
  double worst = 0;
  for (int n = 0; n <= N; ++n) {
    auto d = v.gen(n).matrix.conjugate_transpose() - v.gen(-n).matrix;
    worst = std::max(worst, measure_residual(d, *v.space, N - n).max_abs);
  }
  CHECK(worst <= 1e-12);
  // Virasoro relations in the orthonormal frame
  double r = 0;
  for (int n = -3; n <= 3; ++n)
    for (int m = -3; m <= 3; ++m) {
      int zone = N - std::abs(n) - std::abs(m);
      auto com = commutator_on_zone(v.gen(n), v.gen(m), zone).axpy(Complex(-(n - m)), v.gen(n + m).matrix);
      if (n + m == 0) com = com.axpy(Complex(-2.0 * (n * n * n - n) / 12.0), SparseMatrix<Complex>::identity(v.space->dim()));
      r = std::max(r, measure_residual(com, *v.space, zone).max_abs);
    }
  CHECK(r <= 1e-9);

  CHECK_THROWS_AS(orthonormal_L_matrices(0.5, 0.3, 4), GramNotPositiveDefinite);
  try {
    orthonormal_L_matrices(0.5, 0.5, 4);
  } catch (const GramNotPositiveDefinite& e) {
    CHECK(e.level == 2);
  }
}
