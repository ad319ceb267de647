#include "vir/bump.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <sstream>

namespace vir {

std::string to_string(BumpProfile p) { return p == BumpProfile::plateau ? "plateau" : "derivative-one"; }

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kSigmas = 32;
constexpr int kMargins = 40;

// Coefficients of the indicator of [a, a+len], times e^{-σ²n²/2}.
Complex smoothed_indicator(int n, double a, double len, double sigma) {
  double damp = std::exp(-0.5 * sigma * sigma * double(n) * n);
  if (n == 0) return {len / (2 * kPi), 0.0};
  Complex num = std::polar(1.0, -n * a) - std::polar(1.0, -n * (a + len));
  return num / Complex(0.0, 2 * kPi * n) * damp;
}

// Σ_{|n|>d} |ind_n| e^{-σ²n²/2} / n^p, exact up to K then a geometric bound.
double tail_bound(int d, double a, double len, double sigma, int p) {
  int K = d + 1 + static_cast<int>(std::ceil(12.0 / sigma));
  double s = 0;
  for (int n = d + 1; n <= K; ++n) s += 2 * std::abs(smoothed_indicator(n, a, len, sigma)) / std::pow(double(n), p);
  double x = sigma * sigma;
  double first = std::exp(-0.5 * x * double(K + 1) * (K + 1));
  s += 2 * (1 / (kPi * (K + 1))) * first / (1 - std::exp(-x * (K + 1)));
  return s;
}

std::vector<double> geometric(double lo, double hi, int n) {
  std::vector<double> v;
  for (int i = 0; i < n; ++i) v.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
  return v;
}

[[noreturn]] void too_small(int degree, double target, BumpProfile p) {
  std::ostringstream os;
  os << "make_bump: degree " << degree << " too small for " << to_string(p) << " residual target " << target;
  throw std::domain_error(os.str());
}

}  // namespace

BumpReport BumpReport::scaled(double a) const {
  if (profile != BumpProfile::plateau) throw std::logic_error("BumpReport::scaled: only plateau profiles scale");
  BumpReport r = *this;
  r.function = function.scaled(a);
  r.tail_sup *= std::abs(a);
  r.constraint_residual *= std::abs(a);
  r.target *= std::abs(a);
  return r;
}

BumpReport make_bump(const Interval& I, int d, BumpProfile profile, double target) {
  if (d < 1) too_small(d, target, profile);
  if (!(target > 0)) throw std::invalid_argument("make_bump: target must be positive");
  const double L = I.length();
  const double ref = std::min(L, 2 * kPi - L);
  auto sigmas = geometric(ref / 300, std::max(1.0, ref / 2), kSigmas);
  // The margin spans [0, half the shrunk arc): I for plateaus, its complement otherwise.
  const double span = profile == BumpProfile::plateau ? L : 2 * kPi - L;

  std::optional<BumpReport> best;
  double best_score = 0;
  bool found = false;

  for (double sigma : sigmas) {
    for (int mi = 0; mi < kMargins; ++mi) {
      double m = 0.5 * span * mi / kMargins;
      std::vector<Complex> c(2 * d + 1);
      if (profile == BumpProfile::plateau) {
        double a = I.start() + m, len = L - 2 * m;
        for (int n = -d; n <= d; ++n) c[n + d] = smoothed_indicator(n, a, len, sigma);
        TestFunction f(d, c);
        double peak = f.evaluate(I.center());
        for (double v : sample(f, 16 * d)) peak = std::max(peak, v);
        double tail = tail_bound(d, a, len, sigma, 0) / peak;
        if (tail > target) continue;
        f = f.scaled(1 / peak);
        double mass = f.mean();
        if (found && mass <= best_score) continue;
        auto leak = certified_sup(f, Arc{I.end(), 2 * kPi - L}, 0.01 * target);
        if (leak.bound > target) continue;
        best = BumpReport{f, I, profile, tail, leak.bound, sigma, m, leak.grid, target};
        best_score = mass;
        found = true;
      } else {
        double a = I.end() + m, len = 2 * kPi - L - 2 * m;
        for (int n = -d; n <= d; ++n) c[n + d] = smoothed_indicator(n, a, len, sigma);
        double b0 = c[d].real();
        // ĝ_n = -b_n / (b_0 · in)
        std::vector<Complex> gc(2 * d + 1), dgc(2 * d + 1);
        double energy = 0;
        for (int n = -d; n <= d; ++n) {
          if (n == 0) continue;
          dgc[n + d] = -c[n + d] / b0;
          gc[n + d] = dgc[n + d] / Complex(0.0, double(n));
          energy += std::norm(dgc[n + d]);
        }
        if (found && energy >= best_score) continue;
        TestFunction b(d, c);
        auto res = certified_sup(b.scaled(1 / b0), Arc{I.start(), L}, 0.01 * target);
        if (res.bound > target) continue;
        double tail = tail_bound(d, a, len, sigma, 1) / b0;
        best = BumpReport{TestFunction(d, gc), I, profile, tail, res.bound, sigma, m, res.grid, target};
        best_score = energy;
        found = true;
      }
    }
  }
  if (!found) too_small(d, target, profile);
  return *best;
}

BumpReport certify_support(const TestFunction& f, const Interval& I) {
  auto leak = certified_sup(f, Arc{I.end(), 2 * kPi - I.length()});
  BumpReport r{f, I, BumpProfile::plateau, 0.0, leak.bound, 0.0, 0.0, leak.grid, 0.0};
  return r;
}

}  // namespace vir
