#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vir/graded.hpp"
#include "vir/partition.hpp"
#include "vir/polynomial.hpp"

namespace vir {

template <class R>
struct Ring;

template <>
struct Ring<double> {
  static double from_rational(const Rational& q) { return q.get_d(); }
  static bool is_zero(double x) { return x == 0.0; }
};
template <>
struct Ring<long double> {
  static long double from_rational(const Rational& q) {
    return static_cast<long double>(q.get_num().get_d()) / static_cast<long double>(q.get_den().get_d());
  }
  static bool is_zero(long double x) { return x == 0.0L; }
};
template <>
struct Ring<Rational> {
  static Rational from_rational(const Rational& q) { return q; }
  static bool is_zero(const Rational& x) { return sgn(x) == 0; }
};
template <>
struct Ring<Polynomial2> {
  static Polynomial2 from_rational(const Rational& q) { return Polynomial2(q); }
  static bool is_zero(const Polynomial2& x) { return x.is_zero(); }
};

enum class Admissibility { continuum, discrete_series, not_admissible };
std::string to_string(Admissibility a);

struct AdmissiblePair {
  double c = 0, h = 0;
  Admissibility kind = Admissibility::not_admissible;
  int m = 0, p = 0, q = 0;  // discrete series only
  double critical_weight = 0;  // h_c = (c-1)/24
};

// Continuum if c >= 1 and h >= 0; otherwise the discrete-series formula over
// m >= 3, p,q in {1..m+1}, q < p (taken as stated; the list contains
// non-unitary weights and misses h = 0). Floating inputs match within 1e-9.
AdmissiblePair classify(double c, double h);
AdmissiblePair classify_exact(const Rational& c, const Rational& h);

// Highest-weight module of weight (c,h) up to `max_level`, in the PBW basis
// L_{-λ1}...L_{-λk}Ψ indexed like the Fock basis. Memoizes L_n on basis vectors.
// Not thread-safe; instances are cheap and meant to be local.
template <class R>
class VermaModule {
 public:
  using Vec = std::vector<std::pair<int, R>>;

  VermaModule(R c, R h, int max_level);

  const PartitionTable& partitions() const { return table_; }
  int max_level() const { return table_.cutoff(); }
  // L_n v_index, expanded in the PBW basis. The result level must stay <= max_level.
  const Vec& act(int n, int index);
  // Shapovalov matrix at level k.
  const std::vector<std::vector<R>>& gram(int k);

 private:
  Vec compute(int n, int index);

  R c_, h_;
  PartitionTable table_;
  std::map<std::pair<int, int>, Vec> memo_;
  std::map<int, std::vector<std::vector<R>>> grams_;
};

// Second reducer: ⟨Ψ, L_{w1}...L_{wk} Ψ⟩ by commuting the rightmost
// raising letter one step right at a time.
template <class R>
class WordReducer {
 public:
  WordReducer(R c, R h) : c_(std::move(c)), h_(std::move(h)) {}
  R vev(const std::vector<int>& word);

 private:
  R c_, h_;
  std::map<std::vector<int>, R> memo_;
};

template <class R>
struct GramMatrix {
  int level = 0;
  std::vector<Partition> basis;
  std::vector<std::vector<R>> entries;
};

template <class R>
GramMatrix<R> gram_matrix(const R& c, const R& h, int level);
template <class R>
GramMatrix<R> gram_matrix_by_words(const R& c, const R& h, int level);

struct Inertia {
  int positive = 0, negative = 0, zero = 0;
};
// Sylvester inertia by exact symmetric elimination.
Inertia exact_inertia(std::vector<std::vector<Rational>> a);

struct LevelPositivity {
  int level = 0, dim = 0;
  Inertia inertia;
  double min_eigenvalue = 0;
};

struct PositivityReport {
  std::vector<LevelPositivity> levels;
  std::optional<int> first_failing_level;  // first level with a negative direction
  bool positive_definite = true;
  bool positive_semidefinite = true;
};

// Inertia is exact (floating inputs are converted to their exact binary value).
PositivityReport positivity_scan(const Rational& c, const Rational& h, int max_level);
PositivityReport positivity_scan(double c, double h, int max_level);

class GramNotPositiveDefinite : public std::runtime_error {
 public:
  GramNotPositiveDefinite(int level, double min_eig);
  int level;
  double min_eigenvalue;
};

// L_n (|n| <= cutoff) in an orthonormal frame built level by level from an
// equilibrated Cholesky factor of the Gram matrix. Ψ is basis element 0.
struct VermaRealization {
  double c = 0, h = 0;
  SpacePtr space;
  std::vector<TruncatedOperator<Complex>> L;  // index n + cutoff

  int cutoff() const { return space->cutoff; }
  const TruncatedOperator<Complex>& gen(int n) const { return L.at(n + cutoff()); }
};

// Refuses (GramNotPositiveDefinite) when the equilibrated Gram at some level
// has an eigenvalue below `pivot_tol`.
VermaRealization orthonormal_L_matrices(double c, double h, int cutoff, double pivot_tol = 1e-12);

}  // namespace vir
