#pragma once

#include <string>

#include "vir/test_function.hpp"

namespace vir {

enum class BumpProfile { plateau, derivative_one };
std::string to_string(BumpProfile p);

struct BumpReport {
  TestFunction function;
  Interval interval;
  BumpProfile profile = BumpProfile::plateau;
  // Certified sup of the dropped Fourier tail |f - f_d|.
  double tail_sup = 0;
  // plateau: sup of |f_d| off I. derivative-one: sup over I of |∂θg - 1|.
  double constraint_residual = 0;
  double kernel_width = 0;  // Gaussian σ (radians)
  double margin = 0;        // distance kept from the endpoints of I
  int certification_grid = 0;
  double target = 0;

  // Multiplies a plateau by `a` (bounds scale with |a|). Not defined for derivative-one.
  BumpReport scaled(double a) const;
};

// Plateau: a Gaussian-smoothed indicator of I shrunk by the margin, unit peak.
// Among (σ, margin) on a fixed grid whose certified max(tail, leakage off I) is
// <= target, the one with the largest mean is chosen.
// Derivative-one: ∂θg = 1 - b/b̂_0 with b a Gaussian-smoothed indicator of the
// complement of I shrunk by the margin, ĝ_0 = 0. Among candidates with certified
// sup_I |∂θg - 1| <= target, the one with the smallest ∫(∂θg)² is chosen.
// Throws std::domain_error("... degree too small ...") when nothing qualifies.
BumpReport make_bump(const Interval& interval, int degree, BumpProfile profile, double target = 1e-6);

// Support/leakage certificate for an arbitrary function with respect to I:
// constraint_residual = certified sup of |f| off I, tail_sup = 0.
BumpReport certify_support(const TestFunction& f, const Interval& interval);

}  // namespace vir
