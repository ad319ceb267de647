#include "vir/partition.hpp"

#include <algorithm>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace vir {

int Partition::weight() const {
  int w = 0;
  for (int p : parts) w += p;
  return w;
}

int Partition::multiplicity(int j) const {
  return static_cast<int>(std::count(parts.begin(), parts.end(), j));
}

bool Partition::valid() const {
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (parts[i] <= 0) return false;
    if (i > 0 && parts[i] > parts[i - 1]) return false;
  }
  return true;
}

std::string Partition::to_string() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t i = 0; i < parts.size(); ++i) os << (i ? "," : "") << parts[i];
  os << ')';
  return os.str();
}

Partition Partition::with_part(int k) const {
  Partition out = *this;
  auto it = std::find_if(out.parts.begin(), out.parts.end(), [k](int p) { return p < k; });
  out.parts.insert(it, k);
  return out;
}

Partition Partition::without_part(int k) const {
  Partition out = *this;
  auto it = std::find(out.parts.begin(), out.parts.end(), k);
  if (it == out.parts.end()) throw std::invalid_argument("partition does not contain part");
  out.parts.erase(it);
  return out;
}

std::vector<Partition> enumerate_partitions(int k) {
  if (k < 0) throw std::invalid_argument("enumerate_partitions: negative level");
  std::vector<Partition> out;
  std::vector<int> cur;
  // Largest first part first gives reverse-lexicographic order.
  std::function<void(int, int)> rec = [&](int remaining, int max_part) {
    if (remaining == 0) {
      out.push_back(Partition{cur});
      return;
    }
    for (int p = std::min(remaining, max_part); p >= 1; --p) {
      cur.push_back(p);
      rec(remaining - p, p);
      cur.pop_back();
    }
  };
  rec(k, k);
  return out;
}

Rational basis_norm_sq(const Partition& lambda) {
  if (!lambda.valid()) throw std::invalid_argument("basis_norm_sq: invalid partition");
  Rational r = 1;
  std::size_t i = 0;
  while (i < lambda.parts.size()) {
    int j = lambda.parts[i];
    int m = 0;
    while (i < lambda.parts.size() && lambda.parts[i] == j) {
      ++m;
      ++i;
      r *= j;
      r *= m;
    }
  }
  return r;
}

PartitionTable::PartitionTable(int cutoff) : cutoff_(cutoff) {
  if (cutoff < 0) throw std::invalid_argument("negative cutoff");
  for (int k = 0; k <= cutoff; ++k) {
    offsets_.push_back(static_cast<int>(all_.size()));
    for (auto& p : enumerate_partitions(k)) {
      index_.emplace(p.parts, static_cast<int>(all_.size()));
      levels_.push_back(k);
      all_.push_back(std::move(p));
    }
  }
  offsets_.push_back(static_cast<int>(all_.size()));
}

int PartitionTable::index_of(const Partition& p) const {
  auto it = index_.find(p.parts);
  return it == index_.end() ? -1 : it->second;
}

Rational parse_rational(const std::string& text) {
  auto dot = text.find('.');
  auto e = text.find_first_of("eE");
  if (dot == std::string::npos && e == std::string::npos) {
    Rational r;
    if (r.set_str(text, 10) != 0) throw std::invalid_argument("not a rational: " + text);
    r.canonicalize();
    if (r.get_den() == 0) throw std::invalid_argument("zero denominator: " + text);
    return r;
  }
  // Decimal literal: interpret the digits exactly, not through a double.
  std::string mant = e == std::string::npos ? text : text.substr(0, e);
  long exp10 = e == std::string::npos ? 0 : std::stol(text.substr(e + 1));
  std::string digits;
  for (char ch : mant) {
    if (ch == '.') continue;
    digits += ch;
  }
  if (dot != std::string::npos) {
    std::size_t frac_end = e == std::string::npos ? text.size() : e;
    exp10 -= static_cast<long>(frac_end - dot - 1);
  }
  mpz_class num;
  if (num.set_str(digits, 10) != 0) throw std::invalid_argument("not a number: " + text);
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exp10 < 0 ? -exp10 : exp10));
  Rational r = exp10 < 0 ? Rational(num, scale) : Rational(num * scale);
  r.canonicalize();
  return r;
}

}  // namespace vir
