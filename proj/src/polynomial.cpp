#include "vir/polynomial.hpp"

#include <cmath>

namespace vir {

Polynomial2 Polynomial2::monomial(int ec, int eh, const Rational& coef) {
  Polynomial2 p;
  if (sgn(coef) != 0) p.terms_[{ec, eh}] = coef;
  return p;
}

Rational Polynomial2::coefficient(int ec, int eh) const {
  auto it = terms_.find({ec, eh});
  return it == terms_.end() ? Rational(0) : it->second;
}

Polynomial2& Polynomial2::operator+=(const Polynomial2& o) {
  for (const auto& [k, v] : o.terms_) {
    Rational& slot = terms_[k];
    slot += v;
    if (sgn(slot) == 0) terms_.erase(k);
  }
  return *this;
}

Polynomial2& Polynomial2::operator-=(const Polynomial2& o) {
  for (const auto& [k, v] : o.terms_) {
    Rational& slot = terms_[k];
    slot -= v;
    if (sgn(slot) == 0) terms_.erase(k);
  }
  return *this;
}

Polynomial2& Polynomial2::operator*=(const Polynomial2& o) {
  std::map<Key, Rational> out;
  for (const auto& [ka, va] : terms_)
    for (const auto& [kb, vb] : o.terms_) out[{ka.first + kb.first, ka.second + kb.second}] += va * vb;
  terms_.clear();
  for (auto& [k, v] : out)
    if (sgn(v) != 0) terms_.emplace(k, v);
  return *this;
}

Rational Polynomial2::evaluate(const Rational& c, const Rational& h) const {
  Rational acc = 0;
  for (const auto& [k, v] : terms_) {
    Rational t = v;
    for (int i = 0; i < k.first; ++i) t *= c;
    for (int i = 0; i < k.second; ++i) t *= h;
    acc += t;
  }
  return acc;
}

double Polynomial2::evaluate(double c, double h) const {
  double acc = 0;
  for (const auto& [k, v] : terms_) acc += v.get_d() * std::pow(c, k.first) * std::pow(h, k.second);
  return acc;
}

std::ostream& operator<<(std::ostream& os, const Polynomial2& p) {
  if (p.terms_.empty()) return os << '0';
  bool first = true;
  for (const auto& [k, v] : p.terms_) {
    os << (first ? "" : " + ") << v;
    if (k.first) os << "*c^" << k.first;
    if (k.second) os << "*h^" << k.second;
    first = false;
  }
  return os;
}

}  // namespace vir
