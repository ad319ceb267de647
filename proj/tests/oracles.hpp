#pragma once

// Independent reference computations used by the tests. Nothing here shares
// code with the library's constructions.

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include <gmpxx.h>

namespace oracle {

// Coin-change recurrence.
inline std::vector<std::uint64_t> partition_counts_dp(int kmax) {
  std::vector<std::uint64_t> p(kmax + 1, 0);
  p[0] = 1;
  for (int part = 1; part <= kmax; ++part)
    for (int n = part; n <= kmax; ++n) p[n] += p[n - part];
  return p;
}

// Euler's pentagonal number recurrence.
inline std::vector<std::int64_t> partition_counts_pentagonal(int kmax) {
  std::vector<std::int64_t> p(kmax + 1, 0);
  p[0] = 1;
  for (int n = 1; n <= kmax; ++n) {
    std::int64_t s = 0;
    for (int k = 1;; ++k) {
      int g1 = k * (3 * k - 1) / 2, g2 = k * (3 * k + 1) / 2;
      if (g1 > n) break;
      int sign = (k % 2) ? 1 : -1;
      s += sign * p[n - g1];
      if (g2 <= n) s += sign * p[n - g2];
    }
    p[n] = s;
  }
  return p;
}

// ⟨Ω, J_{w1} J_{w2} ... Ω⟩ by moving annihilators right with [J_a,J_b] = a δ_{a,-b}.
inline mpq_class heisenberg_vev(std::vector<int> w) {
  if (w.empty()) return 1;
  if (w.back() >= 0 || w.front() <= 0) return 0;
  int total = 0;
  for (int x : w) total += x;
  if (total != 0) return 0;
  std::size_t i = w.size() - 1;
  while (w[i] <= 0) --i;  // rightmost annihilator, followed by a creator
  int a = w[i], b = w[i + 1];
  std::vector<int> swapped = w;
  std::swap(swapped[i], swapped[i + 1]);
  mpq_class r = heisenberg_vev(swapped);
  if (a == -b) {
    std::vector<int> removed;
    for (std::size_t j = 0; j < w.size(); ++j)
      if (j != i && j != i + 1) removed.push_back(w[j]);
    r += a * heisenberg_vev(removed);
  }
  return r;
}

// Bosonic polynomial model: J_{-k} = x_k, J_k = k ∂/∂x_k, J_0 = 0. A state
// is a map from exponent vectors (index k-1 holds the power of x_k) to
// rational coefficients. No cutoff is applied anywhere.
using Monomial = std::vector<int>;
using Poly = std::map<Monomial, mpq_class>;

inline void trim(Monomial& m) {
  while (!m.empty() && m.back() == 0) m.pop_back();
}

inline Poly apply_J(int n, const Poly& v) {
  Poly out;
  if (n == 0) return out;
  for (const auto& [mono, c] : v) {
    Monomial m = mono;
    int k = n < 0 ? -n : n;
    if (static_cast<int>(m.size()) < k) m.resize(k, 0);
    if (n < 0) {
      m[k - 1] += 1;
      trim(m);
      out[m] += c;
    } else {
      int e = m[k - 1];
      if (e == 0) continue;
      m[k - 1] -= 1;
      trim(m);
      out[m] += c * k * e;
    }
  }
  for (auto it = out.begin(); it != out.end();) it = (it->second == 0) ? out.erase(it) : std::next(it);
  return out;
}

inline int poly_level(const Monomial& m) {
  int l = 0;
  for (std::size_t i = 0; i < m.size(); ++i) l += static_cast<int>(i + 1) * m[i];
  return l;
}

// Untruncated ½:J²:_n on a state of bounded level.
inline Poly apply_sugawara(int n, const Poly& v) {
  int maxlevel = 0;
  for (const auto& [m, c] : v) maxlevel = std::max(maxlevel, poly_level(m));
  Poly out;
  int range = maxlevel + std::abs(n) + 1;
  for (int m = -range; m <= range; ++m) {
    Poly t = m < 0 ? apply_J(m, apply_J(n - m, v)) : apply_J(n - m, apply_J(m, v));
    for (const auto& [mono, c] : t) out[mono] += c / 2;
  }
  for (auto it = out.begin(); it != out.end();) it = (it->second == 0) ? out.erase(it) : std::next(it);
  return out;
}

// Exponent vector of J_{-λ1}...J_{-λk}Ω.
inline Monomial monomial_of(const std::vector<int>& parts) {
  Monomial m;
  for (int p : parts) {
    if (static_cast<int>(m.size()) < p) m.resize(p, 0);
    m[p - 1] += 1;
  }
  return m;
}

}  // namespace oracle
