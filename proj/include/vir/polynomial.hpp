#pragma once

#include <map>
#include <ostream>
#include <utility>

#include "vir/scalar.hpp"

namespace vir {

// Polynomial in (c, h) with rational coefficients; exponent pair -> coefficient.
class Polynomial2 {
 public:
  using Key = std::pair<int, int>;

  Polynomial2() = default;
  Polynomial2(const Rational& constant) { if (sgn(constant) != 0) terms_[{0, 0}] = constant; }
  Polynomial2(long constant) : Polynomial2(Rational(constant)) {}
  Polynomial2(int constant) : Polynomial2(Rational(constant)) {}

  static Polynomial2 c() { return monomial(1, 0); }
  static Polynomial2 h() { return monomial(0, 1); }
  static Polynomial2 monomial(int ec, int eh, const Rational& coef = 1);

  const std::map<Key, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Rational coefficient(int ec, int eh) const;
  Rational evaluate(const Rational& c, const Rational& h) const;
  double evaluate(double c, double h) const;

  Polynomial2& operator+=(const Polynomial2& o);
  Polynomial2& operator-=(const Polynomial2& o);
  Polynomial2& operator*=(const Polynomial2& o);
  friend Polynomial2 operator+(Polynomial2 a, const Polynomial2& b) { return a += b; }
  friend Polynomial2 operator-(Polynomial2 a, const Polynomial2& b) { return a -= b; }
  friend Polynomial2 operator*(Polynomial2 a, const Polynomial2& b) { return a *= b; }
  friend Polynomial2 operator-(const Polynomial2& a) { return Polynomial2() - a; }
  friend bool operator==(const Polynomial2& a, const Polynomial2& b) { return a.terms_ == b.terms_; }
  friend bool operator!=(const Polynomial2& a, const Polynomial2& b) { return !(a == b); }
  friend std::ostream& operator<<(std::ostream& os, const Polynomial2& p);

 private:
  std::map<Key, Rational> terms_;
};

}  // namespace vir
