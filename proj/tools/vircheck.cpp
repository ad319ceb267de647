// vircheck <command> [--config file.json] [--out file.json] [--csv dir] [--threads N] [--exact]
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"

using namespace vir::cli;

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(path + " is not JSON: " + e.what(), {"/"});
  }
}

void emit(const json& j, const std::string& out_path) {
  std::string text = j.dump(2) + "\n";
  std::cout << text;
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << text;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-truncation checks for Virasoro representations"};
  app.require_subcommand(1, 1);
  std::string config_path, out_path, csv_dir;
  int threads = 0;
  bool exact = false, no_timing = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON config (a RunConfig or just its parameters)");
    sub->add_option("--out", out_path, "also write the report here");
    sub->add_option("--threads", threads, "worker threads (default: VIR_THREADS or all cores)");
  };
  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name);
    add_common(sub);
    sub->add_option("--csv", csv_dir, "directory for per-level CSV tables");
    sub->add_flag("--exact", exact, "rational arithmetic where supported");
    sub->add_flag("--no-timing", no_timing, "omit wall_time for byte-stable output");
  }
  auto* suite = app.add_subcommand("suite", "run a list of configs against expectations");
  add_common(suite);

  CLI11_PARSE(app, argc, argv);
  auto* chosen = app.get_subcommands().front();
  std::string command = chosen->get_name();

  RunOptions options;
  options.exact = exact;
  options.threads = threads;
  if (!csv_dir.empty()) options.csv_dir = csv_dir;

  try {
    if (command == "suite") {
      if (config_path.empty()) throw SchemaError("suite needs --config", {"/"});
      auto rep = run_suite_file(config_path, options);
      emit(rep.body, out_path);
      return rep.passed ? 0 : 1;
    }
    json config = {{"command", command}, {"parameters", json::object()}};
    if (!config_path.empty()) {
      json file = read_json(config_path);
      if (file.is_object() && file.contains("command")) {
        if (file["command"] != command)
          throw SchemaError("/command: config is for " + file["command"].dump() + ", not " + command, {"/command"});
        config = file;
      } else {
        config["parameters"] = file;
      }
    }
    auto rep = run(config, options);
    emit(rep.to_json(!no_timing), out_path);
    return 0;
  } catch (const std::exception& e) {
    try {
      emit(error_json(e), out_path);
    } catch (const std::exception&) {
      std::cout << error_json(e).dump(2) << "\n";
    }
    return exit_code_for(e);
  }
}
