#include "vir/verma.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

namespace vir {

std::string to_string(Admissibility a) {
  switch (a) {
    case Admissibility::continuum: return "continuum";
    case Admissibility::discrete_series: return "discrete-series";
    case Admissibility::not_admissible: return "not-admissible";
  }
  return "?";
}

namespace {

constexpr double kClassifyTol = 1e-9;

double discrete_h(int m, int p, int q) {
  double r = double(m + 1) * p - double(m) * q;
  return (r * r - 1) / (4.0 * m * (m + 1));
}

}  // namespace

AdmissiblePair classify(double c, double h) {
  AdmissiblePair out;
  out.c = c;
  out.h = h;
  out.critical_weight = (c - 1) / 24;
  if (c >= 1 && h >= 0) {
    out.kind = Admissibility::continuum;
    return out;
  }
  if (!(c < 1) || !std::isfinite(c) || !std::isfinite(h)) return out;
  // c = 1 - 6/(m(m+1)) pins m to one or two integers.
  double m0 = (-1 + std::sqrt(1 + 24 / (1 - c))) / 2;
  long lo = std::max(3L, static_cast<long>(std::floor(m0)) - 1);
  long hi = static_cast<long>(std::ceil(m0)) + 1;
  for (long m = lo; m <= hi; ++m) {
    double cm = 1 - 6.0 / (double(m) * (m + 1));
    if (std::abs(cm - c) > kClassifyTol) continue;
    double rr = 4.0 * m * (m + 1) * h + 1;
    if (rr < -kClassifyTol) continue;
    double r = std::sqrt(std::max(0.0, rr));
    for (long p = 1; p <= m + 1; ++p) {
      long cands[2] = {std::lround((double(m + 1) * p - r) / m), std::lround((double(m + 1) * p + r) / m)};
      if (cands[0] > cands[1]) std::swap(cands[0], cands[1]);
      for (long q : cands) {
        if (q < 1 || q >= p) continue;
        if (std::abs(discrete_h(m, p, q) - h) <= kClassifyTol) {
          out.kind = Admissibility::discrete_series;
          out.m = m;
          out.p = p;
          out.q = q;
          return out;
        }
      }
    }
  }
  return out;
}

AdmissiblePair classify_exact(const Rational& c, const Rational& h) {
  AdmissiblePair out;
  out.c = c.get_d();
  out.h = h.get_d();
  out.critical_weight = Rational((c - 1) / 24).get_d();
  if (c >= 1 && h >= 0) {
    out.kind = Admissibility::continuum;
    return out;
  }
  if (c >= 1) return out;
  Rational x = 6 / (1 - c);
  if (x.get_den() != 1) return out;
  mpz_class mm = (sqrt(1 + 4 * x.get_num()) - 1) / 2;
  if (mm * (mm + 1) != x.get_num() || mm < 3 || !mm.fits_slong_p()) return out;
  long m = mm.get_si();
  Rational rr = 4 * Rational(x) * h + 1;
  if (rr.get_den() != 1 || sgn(rr) < 0) return out;
  mpz_class r = sqrt(rr.get_num());
  if (r * r != rr.get_num()) return out;
  for (long p = 1; p <= m + 1; ++p) {
    for (int sign : {-1, 1}) {
      mpz_class num = mpz_class(m + 1) * p - sign * r;
      if (num % m != 0) continue;
      mpz_class q = num / m;
      if (q >= 1 && q < p) {
        out.kind = Admissibility::discrete_series;
        out.m = m;
        out.p = p;
        out.q = q.get_si();
        return out;
      }
    }
  }
  return out;
}

template <class R>
VermaModule<R>::VermaModule(R c, R h, int max_level) : c_(std::move(c)), h_(std::move(h)), table_(max_level) {}

template <class R>
const typename VermaModule<R>::Vec& VermaModule<R>::act(int n, int index) {
  auto key = std::make_pair(n, index);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  Vec v = compute(n, index);
  return memo_.emplace(key, std::move(v)).first->second;
}

template <class R>
typename VermaModule<R>::Vec VermaModule<R>::compute(int n, int index) {
  const Partition& mu = table_.at(index);
  int target = mu.weight() - n;
  if (target < 0) return {};
  if (target > max_level()) throw std::out_of_range("VermaModule::act: result above max level");
  if (mu.parts.empty()) {
    if (n > 0) return {};
    if (n == 0) return Ring<R>::is_zero(h_) ? Vec{} : Vec{{0, h_}};
    return {{table_.index_of(Partition{{-n}}), R(1)}};
  }
  int k = mu.parts.front();
  if (n < 0 && -n >= k) {
    Partition p = mu;
    p.parts.insert(p.parts.begin(), -n);
    return {{table_.index_of(p), R(1)}};
  }
  // L_n L_{-k} w = L_{-k} L_n w + (n+k) L_{n-k} w + (c/12)(n³-n) δ_{n,k} w
  Partition rest{std::vector<int>(mu.parts.begin() + 1, mu.parts.end())};
  int ridx = table_.index_of(rest);
  std::map<int, R> acc;
  Vec inner = act(n, ridx);
  for (const auto& [j, a] : inner)
    for (const auto& [i, b] : act(-k, j)) acc[i] += a * b;
  if (n + k != 0)
    for (const auto& [i, b] : act(n - k, ridx)) acc[i] += R(n + k) * b;
  if (n == k) acc[ridx] += c_ * Ring<R>::from_rational(ratio(long(n) * n * n - n, 12));
  Vec out;
  for (auto& [i, v] : acc)
    if (!Ring<R>::is_zero(v)) out.emplace_back(i, std::move(v));
  return out;
}

template <class R>
const std::vector<std::vector<R>>& VermaModule<R>::gram(int k) {
  auto it = grams_.find(k);
  if (it != grams_.end()) return it->second;
  if (k < 0 || k > max_level()) throw std::out_of_range("VermaModule::gram: level out of range");
  int b = table_.level_begin(k), d = table_.level_dim(k);
  std::vector<std::vector<R>> g(d, std::vector<R>(d, R(0)));
  if (k == 0) {
    g[0][0] = R(1);
  } else {
    // ⟨L_{-λ1} v_λ', v_μ⟩ = ⟨v_λ', L_{λ1} v_μ⟩
    for (int i = 0; i < d; ++i) {
      const Partition& lam = table_.at(b + i);
      int top = lam.parts.front();
      Partition rest{std::vector<int>(lam.parts.begin() + 1, lam.parts.end())};
      int lower = k - top;
      const auto& gl = gram(lower);
      int ri = table_.index_of(rest) - table_.level_begin(lower);
      for (int j = 0; j < d; ++j) {
        R e(0);
        for (const auto& [idx, a] : act(top, b + j)) e += a * gl[ri][idx - table_.level_begin(lower)];
        g[i][j] = e;
      }
    }
  }
  return grams_.emplace(k, std::move(g)).first->second;
}

template <class R>
R WordReducer<R>::vev(const std::vector<int>& w) {
  if (w.empty()) return R(1);
  long total = 0;
  for (int x : w) total += x;
  if (total != 0 || w.front() < 0 || w.back() > 0) return R(0);
  if (w.back() == 0) return h_ * vev(std::vector<int>(w.begin(), w.end() - 1));
  if (w.front() == 0) return h_ * vev(std::vector<int>(w.begin() + 1, w.end()));
  auto it = memo_.find(w);
  if (it != memo_.end()) return it->second;

  std::size_t i = w.size() - 1;
  while (w[i] <= 0) --i;
  int a = w[i], b = w[i + 1];
  std::vector<int> swapped = w;
  std::swap(swapped[i], swapped[i + 1]);
  R result = vev(swapped);
  std::vector<int> merged(w.begin(), w.begin() + i);
  merged.push_back(a + b);
  merged.insert(merged.end(), w.begin() + i + 2, w.end());
  result += R(a - b) * vev(merged);
  if (a == -b) {
    std::vector<int> removed(w.begin(), w.begin() + i);
    removed.insert(removed.end(), w.begin() + i + 2, w.end());
    result += c_ * Ring<R>::from_rational(ratio(long(a) * a * a - a, 12)) * vev(removed);
  }
  memo_.emplace(w, result);
  return result;
}

template <class R>
GramMatrix<R> gram_matrix(const R& c, const R& h, int level) {
  if (level < 0) throw std::invalid_argument("gram_matrix: negative level");
  VermaModule<R> mod(c, h, level);
  GramMatrix<R> g;
  g.level = level;
  g.basis = enumerate_partitions(level);
  g.entries = mod.gram(level);
  return g;
}

template <class R>
GramMatrix<R> gram_matrix_by_words(const R& c, const R& h, int level) {
  if (level < 0) throw std::invalid_argument("gram_matrix_by_words: negative level");
  WordReducer<R> red(c, h);
  GramMatrix<R> g;
  g.level = level;
  g.basis = enumerate_partitions(level);
  std::size_t d = g.basis.size();
  g.entries.assign(d, std::vector<R>(d, R(0)));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      // ⟨v_λ, v_μ⟩ = ⟨Ψ, L_{λk}..L_{λ1} L_{-μ1}..L_{-μl} Ψ⟩
      std::vector<int> w;
      const auto& lp = g.basis[i].parts;
      for (auto it = lp.rbegin(); it != lp.rend(); ++it) w.push_back(*it);
      for (int p : g.basis[j].parts) w.push_back(-p);
      g.entries[i][j] = red.vev(w);
    }
  return g;
}

Inertia exact_inertia(std::vector<std::vector<Rational>> a) {
  Inertia out;
  std::size_t n = a.size();
  std::vector<bool> done(n, false);
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t piv = n;
    for (std::size_t i = 0; i < n; ++i)
      if (!done[i] && sgn(a[i][i]) != 0) { piv = i; break; }
    if (piv == n) {
      // Zero diagonal: a_ii + 2a_ij + a_jj = 2a_ij after adding row/col j to i.
      std::size_t pi = n, pj = n;
      for (std::size_t i = 0; i < n && pi == n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (!done[i] && !done[j] && i != j && sgn(a[i][j]) != 0) { pi = i; pj = j; break; }
      if (pi == n) break;  // remaining block is zero
      for (std::size_t k = 0; k < n; ++k) a[pi][k] += a[pj][k];
      for (std::size_t k = 0; k < n; ++k) a[k][pi] += a[k][pj];
      piv = pi;
    }
    const Rational d = a[piv][piv];
    (sgn(d) > 0 ? out.positive : out.negative) += 1;
    done[piv] = true;
    for (std::size_t i = 0; i < n; ++i) {
      if (done[i] || sgn(a[i][piv]) == 0) continue;
      Rational f = a[i][piv] / d;
      for (std::size_t j = 0; j < n; ++j)
        if (!done[j]) a[i][j] -= f * a[piv][j];
    }
    for (std::size_t i = 0; i < n; ++i) {
      a[i][piv] = 0;
      a[piv][i] = 0;
    }
  }
  out.zero = static_cast<int>(n) - out.positive - out.negative;
  return out;
}

PositivityReport positivity_scan(const Rational& c, const Rational& h, int max_level) {
  if (max_level < 0 || max_level > 12) throw std::invalid_argument("positivity_scan: max_level must be in [0, 12]");
  VermaModule<Rational> mod(c, h, max_level);
  PositivityReport rep;
  for (int k = 0; k <= max_level; ++k) {
    const auto& g = mod.gram(k);
    LevelPositivity lp;
    lp.level = k;
    lp.dim = static_cast<int>(g.size());
    lp.inertia = exact_inertia(g);
    Eigen::MatrixXd m(lp.dim, lp.dim);
    for (int i = 0; i < lp.dim; ++i)
      for (int j = 0; j < lp.dim; ++j) m(i, j) = g[i][j].get_d();
    lp.min_eigenvalue = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
    if (lp.inertia.negative > 0) {
      rep.positive_semidefinite = false;
      if (!rep.first_failing_level) rep.first_failing_level = k;
    }
    if (lp.inertia.negative > 0 || lp.inertia.zero > 0) rep.positive_definite = false;
    rep.levels.push_back(lp);
  }
  return rep;
}

PositivityReport positivity_scan(double c, double h, int max_level) {
  return positivity_scan(exact_rational(c), exact_rational(h), max_level);
}

GramNotPositiveDefinite::GramNotPositiveDefinite(int lvl, double eig)
    : std::runtime_error([&] {
        std::ostringstream os;
        os << "Gram matrix not positive definite at level " << lvl << " (equilibrated min eigenvalue " << eig << ")";
        return os.str();
      }()),
      level(lvl),
      min_eigenvalue(eig) {}

VermaRealization orthonormal_L_matrices(double c, double h, int cutoff, double pivot_tol) {
  using Real = long double;
  using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
  if (cutoff < 0) throw std::invalid_argument("orthonormal_L_matrices: negative cutoff");
  VermaModule<Real> mod(c, h, cutoff);
  const auto& tab = mod.partitions();

  // G = Rᵀ R per level with R = L̃ᵀ D^{1/2}, G̃ = D^{-1/2} G D^{-1/2} = L̃ L̃ᵀ.
  std::vector<Mat> R(cutoff + 1);
  for (int k = 0; k <= cutoff; ++k) {
    const auto& g = mod.gram(k);
    int d = static_cast<int>(g.size());
    Eigen::Matrix<Real, Eigen::Dynamic, 1> dsq(d);
    for (int i = 0; i < d; ++i) {
      if (!(g[i][i] > 0)) throw GramNotPositiveDefinite(k, static_cast<double>(g[i][i]));
      dsq(i) = std::sqrt(g[i][i]);
    }
    Mat eq(d, d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) eq(i, j) = g[i][j] / (dsq(i) * dsq(j));
    Real mineig = Eigen::SelfAdjointEigenSolver<Mat>(eq, Eigen::EigenvaluesOnly).eigenvalues()(0);
    if (mineig < pivot_tol) throw GramNotPositiveDefinite(k, static_cast<double>(mineig));
    Eigen::LLT<Mat> llt(eq);
    if (llt.info() != Eigen::Success) throw GramNotPositiveDefinite(k, static_cast<double>(mineig));
    Mat Lt = llt.matrixL().transpose();
    R[k] = Lt * dsq.asDiagonal();
  }

  std::vector<Rational> ones(tab.size(), Rational(1));
  VermaRealization out;
  out.c = c;
  out.h = h;
  out.space = std::make_shared<GradedSpace>(cutoff, tab.offsets(), std::move(ones));
  for (int n = -cutoff; n <= cutoff; ++n) {
    SparseMatrix<Complex> m(tab.size(), tab.size());
    for (int k = 0; k <= cutoff; ++k) {
      int t = k - n;
      if (t < 0 || t > cutoff) continue;
      int bk = tab.level_begin(k), dk = tab.level_dim(k);
      int bt = tab.level_begin(t), dt = tab.level_dim(t);
      if (n == 0) {
        // (h + k)·I in any frame
        for (int j = 0; j < dk; ++j) m.set_column(bk + j, {{bk + j, Complex(h + k, 0.0)}});
        continue;
      }
      Mat A = Mat::Zero(dt, dk);
      for (int j = 0; j < dk; ++j)
        for (const auto& [i, v] : mod.act(n, bk + j)) A(i - bt, j) = v;
      // Â = R_t A R_k^{-1}
      Mat B = R[t] * A;
      Mat Ahat = R[k].transpose().template triangularView<Eigen::Lower>().solve(B.transpose()).transpose();
      for (int j = 0; j < dk; ++j) {
        auto col = m.column(bk + j);
        for (int i = 0; i < dt; ++i) {
          double v = static_cast<double>(Ahat(i, j));
          if (v != 0.0) col.emplace_back(bt + i, Complex(v, 0.0));
        }
        m.set_column(bk + j, std::move(col));
      }
    }
    out.L.push_back({out.space, std::move(m), n < 0 ? -n : n});
  }
  return out;
}

#define VIR_INSTANTIATE(R)                                               \
  template class VermaModule<R>;                                         \
  template class WordReducer<R>;                                         \
  template GramMatrix<R> gram_matrix<R>(const R&, const R&, int);        \
  template GramMatrix<R> gram_matrix_by_words<R>(const R&, const R&, int);

VIR_INSTANTIATE(double)
VIR_INSTANTIATE(long double)
VIR_INSTANTIATE(Rational)
VIR_INSTANTIATE(Polynomial2)
#undef VIR_INSTANTIATE

}  // namespace vir
