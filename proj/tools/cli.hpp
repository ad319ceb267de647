#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "functions.hpp"

namespace vir::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kToolVersion = "1.0.0";

const std::vector<std::string>& command_names();

struct RunOptions {
  bool exact = false;  // --exact: overrides arithmetic_mode
  int threads = 0;     // 0: VIR_THREADS, else available parallelism
  std::optional<std::string> csv_dir;
};

int resolve_threads(int requested);

// Reads a parameter object, echoing every value it hands out (defaults
// included) and rejecting keys nobody asked for.
class Params {
 public:
  Params(const json& obj, std::string path);

  bool has(const std::string& key) const;
  const json& raw(const std::string& key);
  std::string path_of(const std::string& key) const { return path_ + "/" + key; }

  double number(const std::string& key, std::optional<double> def = std::nullopt);
  int integer(const std::string& key, std::optional<int> def = std::nullopt);
  bool boolean(const std::string& key, bool def);
  std::string string(const std::string& key, std::optional<std::string> def = std::nullopt);
  Rational rational(const std::string& key, std::optional<Rational> def = std::nullopt);
  std::vector<int> integers(const std::string& key, std::optional<std::vector<int>> def = std::nullopt);
  FunctionLiteral function(const std::string& key);

  // Throws SchemaError naming every unread key.
  void finish() const;
  const json& echo() const { return echo_; }

 private:
  const json& fetch(const std::string& key);
  json obj_;
  std::string path_;
  std::set<std::string> used_;
  json echo_ = json::object();
};

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;
};

struct RunReport {
  json body;  // deterministic: command, inputs, results, error_estimates, versions
  std::vector<Table> tables;
  double wall_time = 0;

  json to_json(bool with_timing = true) const;
};

// config = {"command": ..., "parameters": {...}}. Throws SchemaError on bad
// configs; library refusals propagate unchanged.
RunReport run(const json& config, const RunOptions& options = {});

void write_csv(const RunReport& report, const std::string& dir);

// {"error": {"type", "message", "paths"}} for an exception thrown by run.
json error_json(const std::exception& e);
int exit_code_for(const std::exception& e);

struct SuiteReport {
  json body;
  bool passed = true;
};

// Suite file: [entry, ...] or {"entries": [...]}. Entry: {"name", "config",
// "expect": [{"key": "/results/x", "value": v, "tolerance": t} | {"key", "at_most"}
// | {"key", "at_least"} | {"key", "equals"}], "expect_error": bool}.
SuiteReport run_suite(const json& suite, const RunOptions& options);
SuiteReport run_suite_file(const std::string& path, const RunOptions& options);

}  // namespace vir::cli
