#pragma once

#include <complex>
#include <cmath>
#include <ostream>
#include <string>

#include <gmpxx.h>

namespace vir {

using Rational = mpq_class;
using Complex = std::complex<double>;

// Gaussian rationals. Enough arithmetic for operator assembly and
// commutator checks; no division by non-real numbers is ever needed.
struct ExactComplex {
  Rational re, im;

  ExactComplex() = default;
  ExactComplex(const Rational& r) : re(r), im(0) {}
  ExactComplex(long r) : re(r), im(0) {}
  ExactComplex(int r) : re(r), im(0) {}
  ExactComplex(const Rational& r, const Rational& i) : re(r), im(i) {}

  ExactComplex& operator+=(const ExactComplex& o) { re += o.re; im += o.im; return *this; }
  ExactComplex& operator-=(const ExactComplex& o) { re -= o.re; im -= o.im; return *this; }
  ExactComplex& operator*=(const ExactComplex& o) {
    Rational r = re * o.re - im * o.im;
    im = re * o.im + im * o.re;
    re = r;
    return *this;
  }
  ExactComplex& operator/=(const Rational& r) { re /= r; im /= r; return *this; }

  friend ExactComplex operator+(ExactComplex a, const ExactComplex& b) { return a += b; }
  friend ExactComplex operator-(ExactComplex a, const ExactComplex& b) { return a -= b; }
  friend ExactComplex operator*(ExactComplex a, const ExactComplex& b) { return a *= b; }
  friend ExactComplex operator-(const ExactComplex& a) { return {-a.re, -a.im}; }
  friend bool operator==(const ExactComplex& a, const ExactComplex& b) { return a.re == b.re && a.im == b.im; }
  friend bool operator!=(const ExactComplex& a, const ExactComplex& b) { return !(a == b); }
  friend std::ostream& operator<<(std::ostream& os, const ExactComplex& z) {
    return os << '(' << z.re << ',' << z.im << ')';
  }
};

inline ExactComplex conj(const ExactComplex& z) { return {z.re, -z.im}; }

template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Complex> {
  using Real = double;
  static constexpr bool exact = false;
  static Complex make(const Rational& re, const Rational& im = 0) { return {re.get_d(), im.get_d()}; }
  static Complex from_real(double r) { return {r, 0.0}; }
  static Complex from_parts(double re, double im) { return {re, im}; }
  static Complex i() { return {0.0, 1.0}; }
  static Complex conj(const Complex& z) { return std::conj(z); }
  static bool is_zero(const Complex& z) { return z == Complex{}; }
  static double magnitude(const Complex& z) { return std::abs(z); }
  static Complex to_complex(const Complex& z) { return z; }
  static double real_part(const Complex& z) { return z.real(); }
  static double imag_part(const Complex& z) { return z.imag(); }
  static double sqrt(double x) { return std::sqrt(x); }
};

template <>
struct ScalarTraits<ExactComplex> {
  using Real = Rational;
  static constexpr bool exact = true;
  static ExactComplex make(const Rational& re, const Rational& im = 0) { return {re, im}; }
  static ExactComplex from_real(const Rational& r) { return {r, 0}; }
  static ExactComplex from_parts(const Rational& re, const Rational& im) { return {re, im}; }
  static ExactComplex i() { return {0, 1}; }
  static ExactComplex conj(const ExactComplex& z) { return vir::conj(z); }
  static bool is_zero(const ExactComplex& z) { return sgn(z.re) == 0 && sgn(z.im) == 0; }
  // Only used for reporting; exact checks compare against zero.
  static double magnitude(const ExactComplex& z) { return std::hypot(z.re.get_d(), z.im.get_d()); }
  static Complex to_complex(const ExactComplex& z) { return {z.re.get_d(), z.im.get_d()}; }
  static Rational real_part(const ExactComplex& z) { return z.re; }
  static Rational imag_part(const ExactComplex& z) { return z.im; }
};

// mpq_class(n, d) does not reduce; everything built from integer pairs goes through here.
inline Rational ratio(long num, long den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.get_d(); }

// Exact binary value of a double; used when exact checks are fed floating inputs.
inline Rational exact_rational(double x) { return Rational(x); }

// Parses "3", "-7/12", "0.25" into an exact rational.
Rational parse_rational(const std::string& text);

}  // namespace vir
