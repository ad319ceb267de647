#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "vir/bump.hpp"

namespace vir::cli {

using json = nlohmann::json;

// Invalid configuration; `paths` are JSON pointers to the offending values.
class SchemaError : public std::invalid_argument {
 public:
  SchemaError(const std::string& what, std::vector<std::string> paths)
      : std::invalid_argument(what), paths(std::move(paths)) {}
  std::vector<std::string> paths;
};

struct FunctionLiteral {
  TestFunction value;
  std::optional<ExactTestFunction> exact;  // absent for bumps
  std::optional<BumpReport> certificate;   // bumps carry their own
};

// Function literals:
//   0.5                                  constant
//   "cos2θ", "0.3*sin(1) - 1/2*cos 3"    sums of named terms (θ/theta optional)
//   {"cos": 2, "amplitude": 0.5}, {"sin": 1}, {"const": 0.2}
//   {"coefficients": [[n, re, im], ...]} missing -n entries are filled by reality
//   {"bump": {"interval": [a, b], "degree": d, "profile": "plateau" | "derivative-one",
//             "target": 1e-3, "amplitude": 1}}
//   [literal, ...]                       sum
FunctionLiteral parse_function(const json& j, const std::string& path);

// A number, or a string such as "-pi/4", "0.5pi", "3*pi/8".
double parse_angle(const json& j, const std::string& path);

// JSON number or string ("1/3", "0.25") to an exact rational; numbers go through
// their shortest decimal form, so 0.1 means 1/10.
Rational parse_exact_number(const json& j, const std::string& path);

}  // namespace vir::cli
