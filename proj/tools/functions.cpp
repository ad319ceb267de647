#include "functions.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <numbers>

namespace vir::cli {

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw SchemaError(path + ": " + msg, {path});
}

int as_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) fail(path, "expected an integer");
  return j.get<int>();
}

ExactTestFunction exact_sum(const ExactTestFunction& a, const ExactTestFunction& b) { return a + b; }

ExactTestFunction named_term(const std::string& kind, int n, const Rational& amp) {
  if (kind == "cos") return n == 0 ? ExactTestFunction::constant(amp) : ExactTestFunction::cosine(n, amp);
  return n == 0 ? ExactTestFunction() : ExactTestFunction::sine(n, amp);
}

// Recursive-descent reader for "c1*cos n1 θ + c2 sin(n2) - c3".
class TermParser {
 public:
  TermParser(const std::string& s, const std::string& path) : s_(s), path_(path) {}

  ExactTestFunction parse() {
    ExactTestFunction total;
    skip();
    bool first = true;
    while (pos_ < s_.size()) {
      int sign = 1;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1 : 1;
        ++pos_;
        skip();
      } else if (!first) {
        error("expected '+' or '-'");
      }
      total = total + term().scaled(Rational(sign));
      first = false;
      skip();
    }
    if (first) error("empty function");
    return total;
  }

 private:
  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  [[noreturn]] void error(const std::string& msg) const {
    fail(path_, msg + " at position " + std::to_string(pos_) + " in \"" + s_ + "\"");
  }
  bool starts(const std::string& w) const { return s_.compare(pos_, w.size(), w) == 0; }

  std::optional<Rational> number() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && (std::isdigit(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '.' || s_[pos_] == '/'))
      ++pos_;
    if (pos_ == start) return std::nullopt;
    std::string text = s_.substr(start, pos_ - start);
    try {
      return parse_rational(text);
    } catch (const std::exception&) {
      error("bad number '" + text + "'");
    }
  }

  void skip_theta() {
    skip();
    if (starts("θ")) pos_ += std::string("θ").size();
    else if (starts("theta")) pos_ += 5;
  }

  ExactTestFunction term() {
    auto coef = number();
    skip();
    if (peek() == '*') {
      if (!coef) error("'*' without a coefficient");
      ++pos_;
      skip();
    }
    std::string kind;
    if (starts("cos")) kind = "cos";
    else if (starts("sin")) kind = "sin";
    if (kind.empty()) {
      if (!coef) error("expected a number, cos or sin");
      return ExactTestFunction::constant(*coef);
    }
    pos_ += 3;
    skip();
    bool paren = peek() == '(';
    if (paren) ++pos_;
    skip();
    int n = 1;
    if (std::isdigit(static_cast<unsigned char>(peek()))) {
      std::size_t start = pos_;
      while (std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      n = std::stoi(s_.substr(start, pos_ - start));
    }
    skip_theta();
    if (paren) {
      skip();
      if (peek() != ')') error("expected ')'");
      ++pos_;
    }
    return named_term(kind, n, coef.value_or(Rational(1)));
  }

  std::string s_;
  std::string path_;
  std::size_t pos_ = 0;
};

BumpProfile parse_profile(const json& j, const std::string& path) {
  if (j == "plateau") return BumpProfile::plateau;
  if (j == "derivative-one" || j == "derivative_one") return BumpProfile::derivative_one;
  fail(path, "profile must be \"plateau\" or \"derivative-one\"");
}

void reject_unknown(const json& obj, const std::vector<std::string>& allowed, const std::string& path) {
  std::vector<std::string> bad;
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) bad.push_back(path + "/" + it.key());
  if (!bad.empty()) {
    std::string msg = "unknown keys:";
    for (const auto& b : bad) msg += " " + b;
    throw SchemaError(msg, bad);
  }
}

FunctionLiteral from_exact(ExactTestFunction f) {
  FunctionLiteral lit;
  lit.value = to_floating(f);
  lit.exact = std::move(f);
  return lit;
}

FunctionLiteral parse_bump(const json& obj, const std::string& path) {
  if (!obj.is_object()) fail(path, "bump needs an object");
  reject_unknown(obj, {"interval", "degree", "profile", "target", "amplitude"}, path);
  if (!obj.contains("interval") || !obj["interval"].is_array() || obj["interval"].size() != 2)
    fail(path + "/interval", "expected [start, end]");
  if (!obj.contains("degree")) fail(path + "/degree", "required");
  double a = parse_angle(obj["interval"][0], path + "/interval/0");
  double b = parse_angle(obj["interval"][1], path + "/interval/1");
  int degree = as_int(obj["degree"], path + "/degree");
  auto profile = obj.contains("profile") ? parse_profile(obj["profile"], path + "/profile") : BumpProfile::plateau;
  double target = 1e-6;
  if (obj.contains("target")) {
    if (!obj["target"].is_number()) fail(path + "/target", "expected a number");
    target = obj["target"].get<double>();
  }
  auto report = make_bump(Interval(a, b), degree, profile, target);
  if (obj.contains("amplitude")) {
    if (!obj["amplitude"].is_number()) fail(path + "/amplitude", "expected a number");
    report = report.scaled(obj["amplitude"].get<double>());
  }
  FunctionLiteral lit;
  lit.value = report.function;
  lit.certificate = report;
  return lit;
}

FunctionLiteral parse_object(const json& j, const std::string& path) {
  if (j.contains("bump")) {
    reject_unknown(j, {"bump"}, path);
    return parse_bump(j["bump"], path + "/bump");
  }
  if (j.contains("sum")) {
    reject_unknown(j, {"sum"}, path);
    return parse_function(j["sum"], path + "/sum");
  }
  for (const char* kind : {"cos", "sin"})
    if (j.contains(kind)) {
      reject_unknown(j, {kind, "amplitude"}, path);
      int n = as_int(j[kind], path + "/" + kind);
      if (n < 0) fail(path + "/" + kind, "mode must be >= 0");
      Rational amp = j.contains("amplitude") ? parse_exact_number(j["amplitude"], path + "/amplitude") : Rational(1);
      return from_exact(named_term(kind, n, amp));
    }
  if (j.contains("const")) {
    reject_unknown(j, {"const"}, path);
    return from_exact(ExactTestFunction::constant(parse_exact_number(j["const"], path + "/const")));
  }
  if (j.contains("coefficients")) {
    reject_unknown(j, {"coefficients"}, path);
    const auto& list = j["coefficients"];
    if (!list.is_array()) fail(path + "/coefficients", "expected [[n, re, im], ...]");
    std::map<int, ExactComplex> c;
    int degree = 0;
    for (std::size_t i = 0; i < list.size(); ++i) {
      std::string p = path + "/coefficients/" + std::to_string(i);
      const auto& e = list[i];
      if (!e.is_array() || e.size() < 2 || e.size() > 3) fail(p, "expected [n, re] or [n, re, im]");
      int n = as_int(e[0], p + "/0");
      ExactComplex z(parse_exact_number(e[1], p + "/1"), e.size() == 3 ? parse_exact_number(e[2], p + "/2") : Rational(0));
      if (c.count(n)) fail(p, "duplicate mode " + std::to_string(n));
      c[n] = z;
      degree = std::max(degree, std::abs(n));
    }
    for (auto [n, z] : std::map<int, ExactComplex>(c))
      if (!c.count(-n)) c[-n] = conj(z);
    try {
      return from_exact(ExactTestFunction::from_map(degree, c));
    } catch (const std::invalid_argument& e) {
      fail(path + "/coefficients", e.what());
    }
  }
  fail(path, "unrecognized function literal");
}

}  // namespace

FunctionLiteral parse_function(const json& j, const std::string& path) {
  if (j.is_number()) return from_exact(ExactTestFunction::constant(parse_exact_number(j, path)));
  if (j.is_string()) return from_exact(TermParser(j.get<std::string>(), path).parse());
  if (j.is_object()) return parse_object(j, path);
  if (j.is_array()) {
    if (j.empty()) return from_exact(ExactTestFunction());
    FunctionLiteral total = parse_function(j[0], path + "/0");
    for (std::size_t i = 1; i < j.size(); ++i) {
      auto next = parse_function(j[i], path + "/" + std::to_string(i));
      total.value = total.value + next.value;
      if (total.exact && next.exact) total.exact = exact_sum(*total.exact, *next.exact);
      else total.exact.reset();
      total.certificate.reset();
    }
    if (j.size() == 1) return parse_function(j[0], path + "/0");
    return total;
  }
  fail(path, "unrecognized function literal");
}

double parse_angle(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) fail(path, "expected an angle");
  std::string s = j.get<std::string>();
  std::string compact;
  for (char ch : s)
    if (!std::isspace(static_cast<unsigned char>(ch))) compact += ch;
  auto pi = compact.find("pi");
  try {
    if (pi == std::string::npos) return std::stod(compact);
    double sign = 1;
    std::string head = compact.substr(0, pi);
    if (!head.empty() && (head[0] == '-' || head[0] == '+')) {
      sign = head[0] == '-' ? -1 : 1;
      head = head.substr(1);
    }
    if (!head.empty() && head.back() == '*') head.pop_back();
    double coef = head.empty() ? 1.0 : std::stod(head);
    std::string tail = compact.substr(pi + 2);
    double den = 1;
    if (!tail.empty()) {
      if (tail[0] != '/') fail(path, "bad angle \"" + s + "\"");
      den = std::stod(tail.substr(1));
    }
    return sign * coef * std::numbers::pi / den;
  } catch (const std::logic_error&) {
    fail(path, "bad angle \"" + s + "\"");
  }
}

Rational parse_exact_number(const json& j, const std::string& path) {
  try {
    if (j.is_number_integer()) return Rational(j.get<long>());
    if (j.is_number()) return parse_rational(j.dump());
    if (j.is_string()) return parse_rational(j.get<std::string>());
  } catch (const std::invalid_argument&) {
    fail(path, "not a rational number");
  }
  fail(path, "expected a number");
}

}  // namespace vir::cli
