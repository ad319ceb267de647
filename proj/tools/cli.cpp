#include "cli.hpp"

#include <Eigen/Core>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <thread>

#include "vir/expectation.hpp"
#include "vir/smeared.hpp"
#include "vir/verma.hpp"
#include "vir/virasoro_fock.hpp"

namespace vir::cli {

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{
      "verify-virasoro", "verify-covariance", "measure-c",   "kac-classify",  "gram",
      "positivity-scan", "cocycle",           "alg-rel",     "trule",         "conjugation",
      "expectation",     "factorization",     "continuation-check", "spectral-floor"};
  return names;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("VIR_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// ---- parameters ------------------------------------------------------------

Params::Params(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
  if (obj_.is_null()) obj_ = json::object();
  if (!obj_.is_object()) throw SchemaError((path_.empty() ? "/" : path_) + ": expected an object", {path_});
}

bool Params::has(const std::string& key) const { return obj_.contains(key); }

const json& Params::fetch(const std::string& key) {
  used_.insert(key);
  echo_[key] = obj_.at(key);
  return obj_.at(key);
}

const json& Params::raw(const std::string& key) {
  if (!has(key)) throw SchemaError(path_of(key) + ": required", {path_of(key)});
  return fetch(key);
}

double Params::number(const std::string& key, std::optional<double> def) {
  if (!has(key)) {
    if (!def) throw SchemaError(path_of(key) + ": required", {path_of(key)});
    used_.insert(key);
    echo_[key] = *def;
    return *def;
  }
  const auto& j = fetch(key);
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>()).get_d();
    } catch (const std::exception&) {
    }
  }
  if (!j.is_number()) throw SchemaError(path_of(key) + ": expected a number", {path_of(key)});
  return j.get<double>();
}

int Params::integer(const std::string& key, std::optional<int> def) {
  if (!has(key)) {
    if (!def) throw SchemaError(path_of(key) + ": required", {path_of(key)});
    used_.insert(key);
    echo_[key] = *def;
    return *def;
  }
  const auto& j = fetch(key);
  if (!j.is_number_integer()) throw SchemaError(path_of(key) + ": expected an integer", {path_of(key)});
  return j.get<int>();
}

bool Params::boolean(const std::string& key, bool def) {
  if (!has(key)) {
    used_.insert(key);
    echo_[key] = def;
    return def;
  }
  const auto& j = fetch(key);
  if (!j.is_boolean()) throw SchemaError(path_of(key) + ": expected true or false", {path_of(key)});
  return j.get<bool>();
}

std::string Params::string(const std::string& key, std::optional<std::string> def) {
  if (!has(key)) {
    if (!def) throw SchemaError(path_of(key) + ": required", {path_of(key)});
    used_.insert(key);
    echo_[key] = *def;
    return *def;
  }
  const auto& j = fetch(key);
  if (!j.is_string()) throw SchemaError(path_of(key) + ": expected a string", {path_of(key)});
  return j.get<std::string>();
}

Rational Params::rational(const std::string& key, std::optional<Rational> def) {
  if (!has(key)) {
    if (!def) throw SchemaError(path_of(key) + ": required", {path_of(key)});
    used_.insert(key);
    echo_[key] = def->get_den() == 1 ? json(def->get_num().get_si()) : json(def->get_str());
    return *def;
  }
  return parse_exact_number(fetch(key), path_of(key));
}

std::vector<int> Params::integers(const std::string& key, std::optional<std::vector<int>> def) {
  if (!has(key)) {
    if (!def) throw SchemaError(path_of(key) + ": required", {path_of(key)});
    used_.insert(key);
    echo_[key] = *def;
    return *def;
  }
  const auto& j = fetch(key);
  if (!j.is_array()) throw SchemaError(path_of(key) + ": expected a list of integers", {path_of(key)});
  std::vector<int> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number_integer())
      throw SchemaError(path_of(key) + "/" + std::to_string(i) + ": expected an integer", {path_of(key) + "/" + std::to_string(i)});
    out.push_back(j[i].get<int>());
  }
  return out;
}

FunctionLiteral Params::function(const std::string& key) { return parse_function(raw(key), path_of(key)); }

void Params::finish() const {
  std::vector<std::string> bad;
  for (auto it = obj_.begin(); it != obj_.end(); ++it)
    if (!used_.count(it.key())) bad.push_back(path_of(it.key()));
  if (!bad.empty()) {
    std::string msg = "unknown keys:";
    for (const auto& b : bad) msg += " " + b;
    throw SchemaError(msg, bad);
  }
}

// ---- helpers ---------------------------------------------------------------

namespace {

struct Context {
  bool exact = false;
  int threads = 1;
};

struct CommandResult {
  json results = json::object();
  json error_estimates;
  std::vector<Table> tables;
};

json complex_json(Complex z) { return {{"re", z.real()}, {"im", z.imag()}}; }

json rational_json(const Rational& q) { return q.get_str(); }

json residual_json(const ResidualReport& r) {
  return {{"max_abs", r.max_abs}, {"exactly_zero", r.exactly_zero}, {"exact", r.exact}, {"zone_level", r.zone_level}};
}

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)>& body) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next++) < n;) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  int workers = std::max(1, std::min<int>(threads, int(n)));
  std::vector<std::thread> pool;
  for (int t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void floating_only(const Context& ctx, const std::string& command) {
  if (ctx.exact) throw std::invalid_argument("arithmetic_mode exact is not available for " + command);
}

const ExactTestFunction& exact_of(const FunctionLiteral& f, const std::string& path) {
  if (!f.exact) throw SchemaError(path + ": has no exact form (bump functions are floating only)", {path});
  return *f.exact;
}

std::vector<FunctionLiteral> function_list(Params& p, const std::string& key) {
  const auto& j = p.raw(key);
  if (!j.is_array()) throw SchemaError(p.path_of(key) + ": expected a list of functions", {p.path_of(key)});
  std::vector<FunctionLiteral> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_function(j[i], p.path_of(key) + "/" + std::to_string(i)));
  return out;
}

std::vector<TestFunction> values_of(const std::vector<FunctionLiteral>& fs) {
  std::vector<TestFunction> out;
  for (const auto& f : fs) out.push_back(f.value);
  return out;
}

std::pair<double, double> point(Params& p, const std::string& key) {
  const auto& j = p.raw(key);
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw SchemaError(p.path_of(key) + ": expected [c, h]", {p.path_of(key)});
  return {j[0].get<double>(), j[1].get<double>()};
}

BumpReport derivative_one_certificate(const FunctionLiteral& g, const std::string& path) {
  if (!g.certificate || g.certificate->profile != BumpProfile::derivative_one)
    throw SchemaError(path + ": needs a derivative-one bump literal", {path});
  return *g.certificate;
}

BumpReport support_certificate(const FunctionLiteral& f, const Interval& I) {
  if (f.certificate && f.certificate->profile == BumpProfile::plateau) return *f.certificate;
  return certify_support(f.value, I);
}

json certificate_json(const BumpReport& r) {
  return {{"profile", to_string(r.profile)},
          {"interval", {r.interval.start(), r.interval.end()}},
          {"degree", r.function.degree()},
          {"tail_sup", r.tail_sup},
          {"constraint_residual", r.constraint_residual},
          {"kernel_width", r.kernel_width},
          {"margin", r.margin}};
}

json inertia_json(const Inertia& i) { return {{"positive", i.positive}, {"negative", i.negative}, {"zero", i.zero}}; }

// ---- commands --------------------------------------------------------------

template <class S>
json family_results(const VirasoroFamily<S>& fam) {
  json r;
  if constexpr (ScalarTraits<S>::exact) {
    r["central_charge"] = fam.central_charge.get_d();
    r["central_charge_exact"] = rational_json(fam.central_charge);
    r["lowest_energy"] = fam.lowest_energy.get_d();
    r["lowest_energy_exact"] = rational_json(fam.lowest_energy);
  } else {
    r["central_charge"] = fam.central_charge;
    r["lowest_energy"] = fam.lowest_energy;
  }
  return r;
}

CommandResult cmd_virasoro(Params& p, const Context& ctx, bool covariance) {
  int cutoff = p.integer("cutoff", 10);
  int max_mode = p.integer("max_mode", 3);
  CommandResult out;
  auto basis = make_fock_basis(cutoff);
  if (ctx.exact) {
    auto fam = shifted_family<ExactComplex>(p.rational("alpha", Rational(0)), p.rational("beta", Rational(0)), basis);
    out.results = family_results(fam);
    out.results["residual"] = residual_json(covariance ? verify_covariance(fam, max_mode) : verify_virasoro(fam, max_mode));
  } else {
    auto fam = shifted_family<Complex>(p.number("alpha", 0.0), p.number("beta", 0.0), basis);
    out.results = family_results(fam);
    out.results["residual"] = residual_json(covariance ? verify_covariance(fam, max_mode) : verify_virasoro(fam, max_mode));
  }
  return out;
}

CommandResult cmd_measure_c(Params& p, const Context& ctx) {
  int cutoff = p.integer("cutoff", 8);
  auto basis = make_fock_basis(cutoff);
  CommandResult out;
  if (ctx.exact) {
    auto fam = shifted_family<ExactComplex>(p.rational("alpha", Rational(0)), p.rational("beta", Rational(0)), basis);
    Rational c = measure_central_charge(fam);
    out.results["result"] = c.get_d();
    out.results["result_exact"] = rational_json(c);
    out.results["expected"] = fam.central_charge.get_d();
    out.results["vacuum_energy"] = fam.gen(0).matrix.at(0, 0).re.get_d();
    out.results["expected_vacuum_energy"] = fam.lowest_energy.get_d();
  } else {
    auto fam = shifted_family<Complex>(p.number("alpha", 0.0), p.number("beta", 0.0), basis);
    out.results["result"] = measure_central_charge(fam);
    out.results["expected"] = fam.central_charge;
    out.results["vacuum_energy"] = fam.gen(0).matrix.at(0, 0).real();
    out.results["expected_vacuum_energy"] = fam.lowest_energy;
  }
  return out;
}

CommandResult cmd_kac(Params& p, const Context& ctx) {
  AdmissiblePair a;
  if (ctx.exact) a = classify_exact(p.rational("c"), p.rational("h"));
  else a = classify(p.number("c"), p.number("h"));
  CommandResult out;
  out.results = {{"kind", to_string(a.kind)}, {"critical_weight", a.critical_weight}};
  if (a.kind == Admissibility::discrete_series) {
    out.results["m"] = a.m;
    out.results["p"] = a.p;
    out.results["q"] = a.q;
  }
  return out;
}

CommandResult cmd_gram(Params& p, const Context& ctx) {
  int level = p.integer("level");
  CommandResult out;
  Table table{"gram", {"row", "column", "value"}, {}};
  json matrix = json::array(), basis = json::array();
  Inertia inertia;
  if (ctx.exact) {
    auto g = gram_matrix<Rational>(p.rational("c"), p.rational("h"), level);
    for (const auto& b : g.basis) basis.push_back(b.to_string());
    for (std::size_t i = 0; i < g.entries.size(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < g.entries[i].size(); ++j) {
        row.push_back(rational_json(g.entries[i][j]));
        table.rows.push_back({g.basis[i].to_string(), g.basis[j].to_string(), rational_json(g.entries[i][j])});
      }
      matrix.push_back(row);
    }
    inertia = exact_inertia(g.entries);
  } else {
    double c = p.number("c"), h = p.number("h");
    auto g = gram_matrix<double>(c, h, level);
    for (const auto& b : g.basis) basis.push_back(b.to_string());
    for (std::size_t i = 0; i < g.entries.size(); ++i) {
      json row = json::array();
      for (std::size_t j = 0; j < g.entries[i].size(); ++j) {
        row.push_back(g.entries[i][j]);
        table.rows.push_back({g.basis[i].to_string(), g.basis[j].to_string(), g.entries[i][j]});
      }
      matrix.push_back(row);
    }
    inertia = positivity_scan(c, h, level).levels.back().inertia;
  }
  out.results = {{"level", level}, {"basis", basis}, {"matrix", matrix}, {"inertia", inertia_json(inertia)}};
  out.tables.push_back(std::move(table));
  return out;
}

CommandResult cmd_positivity(Params& p, const Context& ctx) {
  int max_level = p.integer("max_level", 6);
  PositivityReport rep = ctx.exact ? positivity_scan(p.rational("c"), p.rational("h"), max_level)
                                   : positivity_scan(p.number("c"), p.number("h"), max_level);
  CommandResult out;
  Table table{"levels", {"level", "dim", "positive", "zero", "negative", "min_eigenvalue"}, {}};
  json levels = json::array();
  for (const auto& l : rep.levels) {
    levels.push_back({{"level", l.level}, {"dim", l.dim}, {"inertia", inertia_json(l.inertia)}, {"min_eigenvalue", l.min_eigenvalue}});
    table.rows.push_back({l.level, l.dim, l.inertia.positive, l.inertia.zero, l.inertia.negative, l.min_eigenvalue});
  }
  out.results = {{"levels", levels},
                 {"first_failing_level", rep.first_failing_level ? json(*rep.first_failing_level) : json(nullptr)},
                 {"positive_definite", rep.positive_definite},
                 {"positive_semidefinite", rep.positive_semidefinite}};
  out.tables.push_back(std::move(table));
  return out;
}

CommandResult cmd_cocycle(Params& p, const Context& ctx) {
  auto f = p.function("f"), g = p.function("g");
  CommandResult out;
  if (ctx.exact) {
    Rational v = cocycle(exact_of(f, p.path_of("f")), exact_of(g, p.path_of("g")));
    out.results = {{"result", v.get_d()}, {"result_exact", rational_json(v)}};
  } else {
    out.results = {{"result", cocycle(f.value, g.value)}};
  }
  return out;
}

CommandResult cmd_alg_rel(Params& p, const Context& ctx) {
  int cutoff = p.integer("cutoff", 10);
  auto f = p.function("f"), g = p.function("g");
  auto basis = make_fock_basis(cutoff);
  CommandResult out;
  if (ctx.exact) {
    auto fam = shifted_family<ExactComplex>(p.rational("alpha", Rational(0)), p.rational("beta", Rational(0)), basis);
    out.results = family_results(fam);
    out.results["residual"] = residual_json(verify_alg_rel(exact_of(f, p.path_of("f")), exact_of(g, p.path_of("g")), fam));
    out.results["cocycle"] = rational_json(cocycle(*f.exact, *g.exact));
  } else {
    auto fam = shifted_family<Complex>(p.number("alpha", 0.0), p.number("beta", 0.0), basis);
    out.results = family_results(fam);
    out.results["residual"] = residual_json(verify_alg_rel(f.value, g.value, fam));
    out.results["cocycle"] = cocycle(f.value, g.value);
  }
  return out;
}

CommandResult cmd_trule(Params& p, const Context& ctx) {
  floating_only(ctx, "trule");
  auto rules = p.integers("rules", std::vector<int>{1, 2});
  auto f = p.function("f"), g = p.function("g");
  auto cutoffs = p.integers("cutoffs", std::vector<int>{8, 10, 12, 14});
  int safe = p.integer("safe_level", -1);
  for (std::size_t i = 0; i < rules.size(); ++i)
    if (rules[i] != 1 && rules[i] != 2)
      throw SchemaError(p.path_of("rules") + "/" + std::to_string(i) + ": rule must be 1 or 2", {p.path_of("rules") + "/" + std::to_string(i)});
  if (cutoffs.empty()) throw SchemaError(p.path_of("cutoffs") + ": empty", {p.path_of("cutoffs")});

  std::vector<SafeZoneResidual> res(rules.size() * cutoffs.size());
  parallel_for(res.size(), ctx.threads, [&](std::size_t k) {
    int rule = rules[k / cutoffs.size()];
    auto basis = make_fock_basis(cutoffs[k % cutoffs.size()]);
    res[k] = rule == 1 ? check_trule1(g.value, f.value, basis, safe) : check_trule2(g.value, f.value, basis, safe);
  });
  CommandResult out;
  Table table{"trule", {"rule", "cutoff", "safe_level", "residual"}, {}};
  for (std::size_t r = 0; r < rules.size(); ++r) {
    json residuals = json::array();
    bool monotone = true;
    for (std::size_t c = 0; c < cutoffs.size(); ++c) {
      const auto& x = res[r * cutoffs.size() + c];
      residuals.push_back(x.residual);
      if (c > 0 && !(x.residual < res[r * cutoffs.size() + c - 1].residual)) monotone = false;
      table.rows.push_back({rules[r], x.cutoff, x.safe_level, x.residual});
    }
    out.results["trule" + std::to_string(rules[r])] = {{"cutoffs", cutoffs},
                                                       {"residuals", residuals},
                                                       {"scalar_shift", res[r * cutoffs.size()].scalar_shift},
                                                       {"monotone", monotone},
                                                       {"final", residuals.back()}};
  }
  out.tables.push_back(std::move(table));
  return out;
}

CommandResult cmd_conjugation(Params& p, const Context& ctx) {
  floating_only(ctx, "conjugation");
  double alpha = p.number("alpha", 1.0), beta = p.number("beta", 0.29);
  int cutoff = p.integer("cutoff", 14);
  int safe = p.integer("safe_level", -1);
  std::vector<ConjugationCase> cases;
  auto add_case = [&](const json& fj, const json& gj, const std::string& path) {
    auto g = parse_function(gj, path + "/g");
    auto gc = derivative_one_certificate(g, path + "/g");
    auto f = parse_function(fj, path + "/f");
    cases.push_back({support_certificate(f, gc.interval), gc});
  };
  if (p.has("pairs")) {
    const auto& list = p.raw("pairs");
    if (!list.is_array()) throw SchemaError(p.path_of("pairs") + ": expected a list", {p.path_of("pairs")});
    for (std::size_t i = 0; i < list.size(); ++i) {
      std::string path = p.path_of("pairs") + "/" + std::to_string(i);
      Params item(list[i], path);
      add_case(item.raw("f"), item.raw("g"), path);
      item.finish();
    }
  } else {
    const json f = p.raw("f"), g = p.raw("g");
    add_case(f, g, "/parameters");
  }
  auto basis = make_fock_basis(cutoff);
  std::vector<ConjugationReport> reports(cases.size());
  parallel_for(cases.size(), ctx.threads, [&](std::size_t i) {
    reports[i] = check_conjugation_identity(alpha, beta, cases[i].f, cases[i].g, basis, safe);
  });
  CommandResult out;
  json list = json::array();
  double worst = 0;
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    worst = std::max(worst, r.residual);
    list.push_back({{"residual", r.residual},
                    {"safe_level", r.safe_level},
                    {"g_constraint", r.g_constraint},
                    {"f_leakage", r.f_leakage},
                    {"f_tail", r.f_tail},
                    {"empirical_constant", std::isfinite(r.empirical_constant) ? json(r.empirical_constant) : json(nullptr)},
                    {"f_certificate", certificate_json(cases[i].f)},
                    {"g_certificate", certificate_json(cases[i].g)}});
  }
  out.results = {{"cases", list}, {"max_residual", worst}, {"cutoff", cutoff}};
  return out;
}

CommandResult cmd_spectral_floor(Params& p, const Context& ctx) {
  floating_only(ctx, "spectral-floor");
  auto f = p.function("f");
  double alpha = p.number("alpha", 0.0), beta = p.number("beta", 0.0);
  auto cutoffs = p.integers("cutoffs", std::vector<int>{8, 10, 12});
  double def = f.certificate && f.certificate->profile == BumpProfile::plateau
                   ? f.certificate->tail_sup + f.certificate->constraint_residual
                   : 1e-6;
  double slack = p.number("nonnegativity_slack", def);
  auto rep = spectral_floor(f.value, alpha, beta, cutoffs, slack);
  CommandResult out;
  Table table{"floors", {"cutoff", "lowest"}, {}};
  json floors = json::array();
  for (const auto& fl : rep.floors) {
    floors.push_back({{"cutoff", fl.cutoff}, {"lowest", fl.lowest}});
    table.rows.push_back({fl.cutoff, fl.lowest});
  }
  out.results = {{"certified_min", rep.certified_min}, {"floors", floors}};
  out.tables.push_back(std::move(table));
  return out;
}

json expectation_json(const ExpectationReport& r) {
  json j = {{"value", complex_json(r.value)}, {"abs", std::abs(r.value)}, {"pipeline", to_string(r.pipeline)},
            {"cutoff", r.cutoff},            {"c", r.c},                  {"h", r.h}};
  if (r.pipeline != Pipeline::verma) {
    j["alpha"] = r.alpha;
    j["beta"] = r.beta;
  }
  if (r.pipeline == Pipeline::continued) {
    j["s"] = r.s;
    j["g_constraint"] = r.g_constraint;
    j["f_leakage"] = r.f_leakage;
  }
  return j;
}

json estimate_json(double e) { return std::isnan(e) ? json(nullptr) : json(e); }

struct CertifiedInputs {
  std::vector<BumpReport> functions;
  BumpReport g;
};

CertifiedInputs certified_inputs(Params& p) {
  auto g = p.function("g");
  auto gc = derivative_one_certificate(g, p.path_of("g"));
  auto fs = function_list(p, "functions");
  CertifiedInputs in{{}, gc};
  for (const auto& f : fs) in.functions.push_back(support_certificate(f, gc.interval));
  return in;
}

CommandResult cmd_expectation(Params& p, const Context& ctx) {
  floating_only(ctx, "expectation");
  double t = p.number("t");
  auto pipeline_name = p.string("pipeline", std::string("verma"));
  Pipeline pipeline;
  try {
    pipeline = parse_pipeline(pipeline_name);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(p.path_of("pipeline") + ": " + e.what(), {p.path_of("pipeline")});
  }
  int cutoff = p.integer("cutoff", 10);
  bool estimate = p.boolean("error_estimate", true);
  ExpectationReport rep;
  if (pipeline == Pipeline::verma) {
    double c = p.number("c"), h = p.number("h");
    rep = F_verma(t, c, h, values_of(function_list(p, "functions")), cutoff, estimate);
  } else if (pipeline == Pipeline::fock) {
    double alpha = p.number("alpha"), beta = p.number("beta");
    rep = F_fock(t, alpha, beta, values_of(function_list(p, "functions")), cutoff, estimate);
  } else {
    double c = p.number("c"), h = p.number("h");
    auto in = certified_inputs(p);
    rep = F_continued(t, c, h, in.functions, in.g, cutoff, estimate);
  }
  CommandResult out;
  out.results = expectation_json(rep);
  out.error_estimates = {{"value", estimate_json(rep.error_estimate)}};
  return out;
}

CommandResult cmd_factorization(Params& p, const Context& ctx) {
  floating_only(ctx, "factorization");
  double t = p.number("t");
  auto [c1, h1] = point(p, "first");
  auto [c2, h2] = point(p, "second");
  int cutoff = p.integer("cutoff", 12);
  auto name = p.string("pipeline", std::string("auto"));
  std::optional<Pipeline> pipeline;
  if (name != "auto") {
    try {
      pipeline = parse_pipeline(name);
    } catch (const std::invalid_argument& e) {
      throw SchemaError(p.path_of("pipeline") + ": " + e.what(), {p.path_of("pipeline")});
    }
  }
  auto rep = check_tensor_factorization(t, c1, h1, c2, h2, values_of(function_list(p, "functions")), cutoff, pipeline);
  CommandResult out;
  out.results = {{"residual", rep.residual},
                 {"left", expectation_json(rep.left)},
                 {"right", expectation_json(rep.right)},
                 {"combined", expectation_json(rep.combined)}};
  out.error_estimates = {{"left", estimate_json(rep.left.error_estimate)},
                         {"right", estimate_json(rep.right.error_estimate)},
                         {"combined", estimate_json(rep.combined.error_estimate)}};
  return out;
}

CommandResult cmd_continuation(Params& p, const Context& ctx) {
  floating_only(ctx, "continuation-check");
  double t = p.number("t", 0.1);
  const auto& pts = p.raw("points");
  if (!pts.is_array() || pts.empty()) throw SchemaError(p.path_of("points") + ": expected [[c, h], ...]", {p.path_of("points")});
  std::vector<std::pair<double, double>> points;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const auto& q = pts[i];
    if (!q.is_array() || q.size() != 2 || !q[0].is_number() || !q[1].is_number())
      throw SchemaError(p.path_of("points") + "/" + std::to_string(i) + ": expected [c, h]", {p.path_of("points") + "/" + std::to_string(i)});
    points.emplace_back(q[0].get<double>(), q[1].get<double>());
  }
  auto cutoffs = p.integers("cutoffs", std::vector<int>{8, 10, 12});
  if (cutoffs.empty()) throw SchemaError(p.path_of("cutoffs") + ": empty", {p.path_of("cutoffs")});
  auto in = certified_inputs(p);
  auto fs = values_of(std::vector<FunctionLiteral>{});
  for (const auto& f : in.functions) fs.push_back(f.function);

  std::size_t n = points.size() * cutoffs.size();
  std::vector<ExpectationReport> cont(n), verma(n);
  std::vector<double> edge(points.size());
  parallel_for(n + points.size(), ctx.threads, [&](std::size_t k) {
    if (k < n) {
      auto [c, h] = points[k / cutoffs.size()];
      int cutoff = cutoffs[k % cutoffs.size()];
      cont[k] = F_continued(t, c, h, in.functions, in.g, cutoff, false);
      verma[k] = F_verma(t, c, h, fs, cutoff, false);
    } else {
      // s = 0 at h = h_c, where the formula must reproduce the Fock pipeline at α = 0.
      std::size_t i = k - n;
      double c = points[i].first, hc = (c - 1) / 24;
      int cutoff = cutoffs.back();
      auto a = F_continued(t, c, hc, in.functions, in.g, cutoff, false);
      auto b = F_fock(t, 0.0, std::sqrt((c - 1) / 12), fs, cutoff, false);
      edge[i] = std::abs(a.value - b.value);
    }
  });
  CommandResult out;
  Table table{"continuation", {"c", "h", "cutoff", "continued_re", "continued_im", "verma_re", "verma_im", "difference"}, {}};
  json list = json::array();
  double worst_final = 0, worst_edge = 0;
  bool all_decreasing = true;
  for (std::size_t i = 0; i < points.size(); ++i) {
    json diffs = json::array();
    bool decreasing = true;
    double prev = INFINITY;
    for (std::size_t j = 0; j < cutoffs.size(); ++j) {
      std::size_t k = i * cutoffs.size() + j;
      double d = std::abs(cont[k].value - verma[k].value);
      diffs.push_back(d);
      if (!(d < prev)) decreasing = false;
      prev = d;
      table.rows.push_back({points[i].first, points[i].second, cutoffs[j], cont[k].value.real(), cont[k].value.imag(),
                            verma[k].value.real(), verma[k].value.imag(), d});
    }
    std::size_t last = i * cutoffs.size() + cutoffs.size() - 1;
    list.push_back({{"c", points[i].first},
                    {"h", points[i].second},
                    {"s", cont[last].s},
                    {"beta", cont[last].beta},
                    {"cutoffs", cutoffs},
                    {"differences", diffs},
                    {"decreasing", decreasing},
                    {"final", prev},
                    {"continued", complex_json(cont[last].value)},
                    {"verma", complex_json(verma[last].value)},
                    {"edge_difference", edge[i]}});
    worst_final = std::max(worst_final, prev);
    worst_edge = std::max(worst_edge, edge[i]);
    all_decreasing = all_decreasing && decreasing;
  }
  out.results = {{"points", list},
                 {"max_final_difference", worst_final},
                 {"all_decreasing", all_decreasing},
                 {"max_edge_difference", worst_edge},
                 {"g_certificate", certificate_json(in.g)}};
  out.tables.push_back(std::move(table));
  return out;
}

CommandResult dispatch(const std::string& command, Params& p, const Context& ctx) {
  if (command == "verify-virasoro") return cmd_virasoro(p, ctx, false);
  if (command == "verify-covariance") return cmd_virasoro(p, ctx, true);
  if (command == "measure-c") return cmd_measure_c(p, ctx);
  if (command == "kac-classify") return cmd_kac(p, ctx);
  if (command == "gram") return cmd_gram(p, ctx);
  if (command == "positivity-scan") return cmd_positivity(p, ctx);
  if (command == "cocycle") return cmd_cocycle(p, ctx);
  if (command == "alg-rel") return cmd_alg_rel(p, ctx);
  if (command == "trule") return cmd_trule(p, ctx);
  if (command == "conjugation") return cmd_conjugation(p, ctx);
  if (command == "expectation") return cmd_expectation(p, ctx);
  if (command == "factorization") return cmd_factorization(p, ctx);
  if (command == "continuation-check") return cmd_continuation(p, ctx);
  if (command == "spectral-floor") return cmd_spectral_floor(p, ctx);
  throw SchemaError("/command: unknown command '" + command + "'", {"/command"});
}

json versions_json() {
  return {{"schema", kSchemaVersion},
          {"vircheck", kToolVersion},
          {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION)},
          {"gmp", gmp_version}};
}

}  // namespace

// ---- run -------------------------------------------------------------------

json RunReport::to_json(bool with_timing) const {
  json j = body;
  if (with_timing) j["wall_time"] = wall_time;
  return j;
}

RunReport run(const json& config, const RunOptions& options) {
  auto start = std::chrono::steady_clock::now();
  Params top(config, "");
  std::string command = top.string("command");
  if (top.has("schema_version") && top.integer("schema_version") != kSchemaVersion)
    throw SchemaError("/schema_version: unsupported (expected " + std::to_string(kSchemaVersion) + ")", {"/schema_version"});
  json parameters = top.has("parameters") ? top.raw("parameters") : json::object();
  top.finish();

  Params p(parameters, "/parameters");
  Context ctx;
  std::string mode = p.string("arithmetic_mode", std::string(options.exact ? "exact" : "floating"));
  if (mode != "floating" && mode != "exact")
    throw SchemaError("/parameters/arithmetic_mode: expected \"floating\" or \"exact\"", {"/parameters/arithmetic_mode"});
  ctx.exact = options.exact || mode == "exact";
  ctx.threads = resolve_threads(options.threads);
  auto result = dispatch(command, p, ctx);
  p.finish();

  RunReport rep;
  json inputs = p.echo();
  inputs["arithmetic_mode"] = ctx.exact ? "exact" : "floating";
  rep.body = {{"command", command}, {"inputs", inputs}, {"results", result.results}, {"versions", versions_json()}};
  if (!result.error_estimates.is_null()) rep.body["error_estimates"] = result.error_estimates;
  rep.tables = std::move(result.tables);
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (options.csv_dir) write_csv(rep, *options.csv_dir);
  return rep;
}

namespace {

std::string csv_cell(const json& v) {
  if (v.is_string()) {
    std::string s = v.get<std::string>();
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
    return q + "\"";
  }
  return v.dump();
}

}  // namespace

void write_csv(const RunReport& report, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::string command = report.body.at("command").get<std::string>();
  for (const auto& t : report.tables) {
    std::ofstream out(std::filesystem::path(dir) / (command + "_" + t.name + ".csv"));
    if (!out) throw std::runtime_error("cannot write CSV into " + dir);
    for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << t.columns[i];
    out << "\n";
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
      out << "\n";
    }
  }
}

json error_json(const std::exception& e) {
  json err = {{"message", e.what()}};
  if (auto* s = dynamic_cast<const SchemaError*>(&e)) {
    err["type"] = "schema";
    err["paths"] = s->paths;
  } else if (auto* g = dynamic_cast<const GramNotPositiveDefinite*>(&e)) {
    err["type"] = "refusal";
    err["level"] = g->level;
    err["min_eigenvalue"] = g->min_eigenvalue;
  } else if (dynamic_cast<const std::domain_error*>(&e) || dynamic_cast<const std::invalid_argument*>(&e) ||
             dynamic_cast<const std::out_of_range*>(&e)) {
    err["type"] = "refusal";
  } else {
    err["type"] = "internal";
  }
  return {{"error", err}};
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const SchemaError*>(&e)) return 2;
  if (dynamic_cast<const GramNotPositiveDefinite*>(&e) || dynamic_cast<const std::domain_error*>(&e) ||
      dynamic_cast<const std::invalid_argument*>(&e) || dynamic_cast<const std::out_of_range*>(&e))
    return 3;
  return 4;
}

// ---- suites ----------------------------------------------------------------

namespace {

json check_expectation(const json& expect, const json& report, const std::string& path) {
  Params e(expect, path);
  std::string key = e.string("key");
  json out = {{"key", key}};
  const json* actual = nullptr;
  try {
    actual = &report.at(json::json_pointer(key));
  } catch (const json::exception&) {
    actual = nullptr;
  }
  bool ok = actual != nullptr;
  out["actual"] = actual ? *actual : json(nullptr);
  if (e.has("equals")) {
    out["equals"] = e.raw("equals");
    ok = ok && *actual == out["equals"];
  } else if (e.has("value")) {
    double v = e.number("value"), tol = e.number("tolerance", 0.0);
    out["value"] = v;
    out["tolerance"] = tol;
    ok = ok && actual->is_number() && std::abs(actual->get<double>() - v) <= tol;
  } else if (e.has("at_most") || e.has("at_least")) {
    if (e.has("at_most")) {
      double m = e.number("at_most");
      out["at_most"] = m;
      ok = ok && actual->is_number() && actual->get<double>() <= m;
    }
    if (e.has("at_least")) {
      double m = e.number("at_least");
      out["at_least"] = m;
      ok = ok && actual && actual->is_number() && actual->get<double>() >= m;
    }
  } else {
    throw SchemaError(path + ": needs one of equals, value, at_most, at_least", {path});
  }
  e.finish();
  out["passed"] = ok;
  return out;
}

}  // namespace

SuiteReport run_suite(const json& suite, const RunOptions& options) {
  const json* entries = &suite;
  std::string base;
  if (suite.is_object()) {
    Params top(suite, "");
    top.raw("entries");
    if (top.has("name")) top.string("name");
    top.finish();
    entries = &suite.at("entries");
    base = "/entries";
  }
  if (!entries->is_array()) throw SchemaError((base.empty() ? "/" : base) + ": expected a list of entries", {base});

  std::vector<json> results(entries->size());
  RunOptions inner = options;
  inner.threads = 1;  // parallelism is spent across entries
  parallel_for(entries->size(), resolve_threads(options.threads), [&](std::size_t i) {
    std::string path = base + "/" + std::to_string(i);
    const json& entry = (*entries)[i];
    json out;
    try {
      Params e(entry, path);
      std::string name = e.string("name", "entry " + std::to_string(i));
      out["name"] = name;
      json config = e.raw("config");
      bool expect_error = e.boolean("expect_error", false);
      json expects = e.has("expect") ? e.raw("expect") : json::array();
      e.finish();
      if (!expects.is_array()) throw SchemaError(path + "/expect: expected a list", {path + "/expect"});
      json report;
      bool errored = false;
      try {
        report = run(config, inner).body;
      } catch (const std::exception& ex) {
        report = error_json(ex);
        errored = true;
      }
      bool passed = errored == expect_error;
      json checks = json::array();
      for (std::size_t k = 0; k < expects.size(); ++k) {
        auto c = check_expectation(expects[k], report, path + "/expect/" + std::to_string(k));
        passed = passed && c["passed"].get<bool>();
        checks.push_back(c);
      }
      out["passed"] = passed;
      out["checks"] = checks;
      if (errored) out["error"] = report["error"];
      else out["results"] = report["results"];
    } catch (const std::exception& ex) {
      out["passed"] = false;
      out["error"] = error_json(ex)["error"];
    }
    results[i] = out;
  });

  SuiteReport rep;
  json failed = json::array();
  for (const auto& r : results)
    if (!r["passed"].get<bool>()) {
      rep.passed = false;
      failed.push_back(r.value("name", std::string("?")));
    }
  rep.body = {{"entries", results}, {"passed", rep.passed}, {"total", results.size()}, {"failed", failed},
              {"versions", versions_json()}};
  return rep;
}

SuiteReport run_suite_file(const std::string& path, const RunOptions& options) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read suite file " + path);
  json suite;
  try {
    suite = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("suite file is not JSON: ") + e.what(), {"/"});
  }
  return run_suite(suite, options);
}

}  // namespace vir::cli
