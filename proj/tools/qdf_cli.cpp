// qdf command-line front end. Talks to the library only through qdf.h.
//
// Exit codes: 0 ran to completion, 2 input or validation error, 3 numerical failure.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qdf/qdf.h"

using Json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumerical = 3;

struct Failure {
  int code;
  std::string message;
};

int exit_code_for(qdf_status s) {
  return (s == QDF_ERR_NUMERICAL || s == QDF_ERR_INTERNAL) ? kExitNumerical : kExitInput;
}

void check(qdf_status s, const std::string& context) {
  if (s != QDF_OK) throw Failure{exit_code_for(s), context + ": " + qdf_last_error()};
}

struct OperatorDeleter {
  void operator()(qdf_operator* p) const { qdf_operator_free(p); }
};
struct FunctionalDeleter {
  void operator()(qdf_functional* p) const { qdf_functional_free(p); }
};
struct StringDeleter {
  void operator()(char* p) const { qdf_string_free(p); }
};
using OperatorPtr = std::unique_ptr<qdf_operator, OperatorDeleter>;
using FunctionalPtr = std::unique_ptr<qdf_functional, FunctionalDeleter>;
using StringPtr = std::unique_ptr<char, StringDeleter>;

Json take_json(char* raw) {
  StringPtr owned(raw);
  return Json::parse(owned.get());
}

struct RunConfig {
  std::string command;
  std::string state;
  std::string rho = "trace";
  bool rho_given = false;
  int levels = -1;  // unset: per-command default
  int n = 2;
  double tol = 1e-7;
  int max_iterations = 20000;
  std::string relation = "exact";
  std::string grid = "0:0.05:1";
  std::string out;
  std::uint64_t seed = 0;
  bool verify_bridge = false;

  Json to_json() const {
    Json j{{"command", command}, {"rho", rho}, {"levels", levels}, {"tol", tol},
           {"max_iterations", max_iterations}, {"relation", relation}, {"seed", seed},
           {"library_version", qdf_version()}};
    if (!state.empty()) j["state"] = state;
    if (command == "scan-werner") j["grid"] = grid;
    if (command == "boundary") j["verify_bridge"] = verify_bridge;
    if (command == "schur-table") j["n"] = n;
    return j;
  }
};

qdf_solver_options solver_options(const RunConfig& cfg) {
  qdf_solver_options opts;
  qdf_solver_options_default(&opts);
  if (!(cfg.tol > 0.0)) throw Failure{kExitInput, "--tol must be positive"};
  if (cfg.max_iterations < 1) throw Failure{kExitInput, "--max-iter must be at least 1"};
  opts.tol = cfg.tol;
  opts.max_iterations = cfg.max_iterations;
  if (cfg.relation == "exact") {
    opts.relation = QDF_RELATION_EXACT;
  } else if (cfg.relation == "sub") {
    opts.relation = QDF_RELATION_SUB;
  } else {
    throw Failure{kExitInput, "--relation must be exact or sub"};
  }
  return opts;
}

bool is_preset(const std::string& s) {
  return s == "trace" || s == "normalized-trace" || s == "random";
}

FunctionalPtr resolve_rho(const RunConfig& cfg, int n) {
  qdf_functional* rho = nullptr;
  if (is_preset(cfg.rho)) {
    check(qdf_functional_preset(cfg.rho.c_str(), n, cfg.seed, &rho), "--rho");
    return FunctionalPtr(rho);
  }
  qdf_operator* d = nullptr;
  check(qdf_operator_load(cfg.rho.c_str(), &d), "--rho " + cfg.rho);
  OperatorPtr density(d);
  check(qdf_functional_from_operator(density.get(), &rho), "--rho " + cfg.rho);
  return FunctionalPtr(rho);
}

std::vector<int> legs_of(const qdf_operator* op) {
  std::size_t count = 0;
  check(qdf_operator_legs(op, nullptr, 0, &count), "legs");
  std::vector<int> legs(count);
  check(qdf_operator_legs(op, legs.data(), legs.size(), &count), "legs");
  return legs;
}

OperatorPtr load_bipartite(const std::string& path) {
  qdf_operator* raw = nullptr;
  check(qdf_operator_load(path.c_str(), &raw), "--state " + path);
  OperatorPtr op(raw);
  if (legs_of(op.get()).size() != 2) {
    throw Failure{kExitInput, "--state " + path + ": expected a bipartite operator with legs [m, n]"};
  }
  return op;
}

void emit(const RunConfig& cfg, const Json& report, const std::string& summary) {
  if (cfg.out.empty()) {
    std::cout << report.dump(2) << '\n';
    std::cerr << summary << '\n';
    return;
  }
  std::ofstream out(cfg.out);
  if (!out) throw Failure{kExitInput, "cannot write " + cfg.out};
  out << report.dump(2) << '\n';
  std::cout << summary << '\n';
}

const char* verdict_name(qdf_verdict v) {
  switch (v) {
    case QDF_SEPARABLE_EVIDENCE: return "separable_evidence";
    case QDF_ENTANGLED_EVIDENCE: return "entangled_evidence";
    case QDF_UNDETERMINED: return "undetermined";
  }
  return "unknown";
}

void cmd_extend_check(RunConfig& cfg) {
  if (cfg.levels < 0) cfg.levels = 3;
  if (cfg.levels < 2) throw Failure{kExitInput, "--levels must be at least 2"};
  const qdf_solver_options opts = solver_options(cfg);
  OperatorPtr a = load_bipartite(cfg.state);
  FunctionalPtr rho = resolve_rho(cfg, legs_of(a.get())[1]);
  qdf_verdict verdict;
  char* raw = nullptr;
  check(qdf_extend_check(a.get(), rho.get(), cfg.levels, &opts, 1, &verdict, &raw), "extend-check");
  Json report{{"config", cfg.to_json()}, {"result", take_json(raw)}};
  emit(cfg, report,
       std::string("extend-check: ") + verdict_name(verdict) + " (levels 2.." +
           std::to_string(cfg.levels) + ")");
}

std::vector<double> parse_grid(const std::string& spec) {
  double start, step, stop;
  char c1, c2, extra;
  std::istringstream in(spec);
  if (!(in >> start >> c1 >> step >> c2 >> stop) || c1 != ':' || c2 != ':' || (in >> extra)) {
    throw Failure{kExitInput, "--grid must look like start:step:stop"};
  }
  if (!(start >= 0.0 && stop <= 1.0 && start <= stop && step > 0.0)) {
    throw Failure{kExitInput, "--grid needs 0 <= start <= stop <= 1 and step > 0"};
  }
  std::vector<double> out;
  for (int k = 0;; ++k) {
    const double p = std::round((start + k * step) * 1e12) / 1e12;
    if (p > stop + 1e-12) break;
    out.push_back(p);
    if (out.size() > 100000) throw Failure{kExitInput, "--grid has too many points"};
  }
  return out;
}

double werner_ppt(double p) {
  qdf_operator* raw = nullptr;
  check(qdf_werner_state(p, &raw), "werner state");
  OperatorPtr w(raw);
  double v = 0.0;
  check(qdf_ppt_min_eig(w.get(), &v), "ppt");
  return v;
}

void cmd_scan_werner(RunConfig& cfg) {
  if (cfg.levels < 0) cfg.levels = 3;
  if (cfg.levels < 2) throw Failure{kExitInput, "--levels must be at least 2"};
  const qdf_solver_options opts = solver_options(cfg);
  const std::vector<double> grid = parse_grid(cfg.grid);
  FunctionalPtr rho = resolve_rho(cfg, 2);

  Json rows = Json::array();
  int entangled = 0;
  for (double p : grid) {
    qdf_operator* raw = nullptr;
    check(qdf_werner_state(p, &raw), "werner state");
    OperatorPtr w(raw);
    double ppt = 0.0;
    check(qdf_ppt_min_eig(w.get(), &ppt), "ppt");
    qdf_verdict verdict;
    char* report_raw = nullptr;
    check(qdf_extend_check(w.get(), rho.get(), cfg.levels, &opts, 0, &verdict, &report_raw),
          "scan-werner");
    const Json report = take_json(report_raw);
    Json levels = Json::array();
    for (const auto& lr : report["levels"]) {
      levels.push_back({{"level", lr["level"]},
                        {"verdict", lr["verdict"]},
                        {"iterations", lr["iterations"]},
                        {"final_residual", lr["final_residual"]}});
    }
    entangled += verdict == QDF_ENTANGLED_EVIDENCE;
    rows.push_back({{"p", p},
                    {"verdict", verdict_name(verdict)},
                    {"decisive_level", report["decisive_level"]},
                    {"levels", std::move(levels)},
                    {"ppt_min_eig", ppt}});
  }

  // Sign changes of the PPT column and the root between the bracketing points.
  int crossings = 0;
  Json root = nullptr;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    double lo = rows[i - 1]["p"], hi = rows[i]["p"];
    double flo = rows[i - 1]["ppt_min_eig"];
    const double fhi = rows[i]["ppt_min_eig"];
    if ((flo >= 0.0) == (fhi >= 0.0)) continue;
    ++crossings;
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fm = werner_ppt(mid);
      if ((fm >= 0.0) == (flo >= 0.0)) {
        lo = mid;
        flo = fm;
      } else {
        hi = mid;
      }
    }
    if (root.is_null()) root = 0.5 * (lo + hi);
  }
  Json result{{"rows", std::move(rows)}, {"ppt_crossings", crossings}, {"ppt_root", root}};
  Json report{{"config", cfg.to_json()}, {"result", std::move(result)}};
  emit(cfg, report,
       "scan-werner: " + std::to_string(grid.size()) + " points, " + std::to_string(entangled) +
           " entangled_evidence, ppt crossings " + std::to_string(crossings));
}

void cmd_boundary(RunConfig& cfg) {
  if (cfg.levels < 0) cfg.levels = 4;
  if (cfg.levels < 1) throw Failure{kExitInput, "--levels must be at least 1"};
  const qdf_solver_options opts = solver_options(cfg);
  std::ifstream in(cfg.state);
  if (!in) throw Failure{kExitInput, "--state " + cfg.state + ": cannot open"};
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Failure{kExitInput, "--state " + cfg.state + ": malformed JSON: " + e.what()};
  }

  char* raw = nullptr;
  std::string summary;
  if (doc.is_object() && doc.contains("entries")) {
    FunctionalPtr rho;
    if (cfg.rho_given) {
      if (!doc.contains("n") || !doc["n"].is_number_integer()) {
        throw Failure{kExitInput, "--state " + cfg.state + ": bundle lacks integer \"n\""};
      }
      rho = resolve_rho(cfg, doc["n"].get<int>());
    }
    check(qdf_boundary_sequence(text.c_str(), rho.get(), &opts, cfg.verify_bridge ? 1 : 0, &raw),
          "boundary");
    const Json result = take_json(raw);
    const Json& v = result["validation"];
    summary = std::string("boundary: sequence subharmonic=") +
              (result["subharmonic"].get<bool>() ? "true" : "false");
    if (!v["ok"].get<bool>()) {
      summary += ", first violation " + v["condition"].get<std::string>() + " at level " +
                 std::to_string(v["level"].get<int>());
    }
    emit(cfg, Json{{"config", cfg.to_json()}, {"result", result}}, summary);
    return;
  }

  qdf_operator* t_raw = nullptr;
  check(qdf_operator_from_json(text.c_str(), &t_raw), "--state " + cfg.state);
  OperatorPtr t(t_raw);
  const std::vector<int> legs = legs_of(t.get());
  if (legs.size() != 1) throw Failure{kExitInput, "--state: group-like t must have one leg"};
  FunctionalPtr rho = resolve_rho(cfg, legs[0]);
  check(qdf_boundary_grouplike(t.get(), rho.get(), cfg.levels, &opts, cfg.verify_bridge ? 1 : 0,
                               &raw),
        "boundary");
  const Json result = take_json(raw);
  summary = std::string("boundary: exponential=") +
            (result["exponential"]["is_exponential"].get<bool>() ? "true" : "false") +
            ", subharmonic=" + (result["subharmonic"].get<bool>() ? "true" : "false");
  if (!result["e_rho_value"].is_null()) {
    summary += ", rho(t)=" + std::to_string(result["e_rho_value"].get<double>());
  }
  emit(cfg, Json{{"config", cfg.to_json()}, {"result", result}}, summary);
}

void cmd_schur_table(RunConfig& cfg) {
  if (cfg.levels < 0) cfg.levels = 3;
  char* raw = nullptr;
  check(qdf_schur_table(cfg.n, cfg.levels, &raw), "schur-table");
  const Json result = take_json(raw);
  emit(cfg, Json{{"config", cfg.to_json()}, {"result", result}},
       "schur-table: n=" + std::to_string(cfg.n) + " l=" + std::to_string(cfg.levels) + ", " +
           std::to_string(result["blocks"].size()) + " blocks");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Symmetric extension hierarchy and U(n) boundary toolkit"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub, bool solver) {
    sub->add_option("--out", cfg.out, "Write the JSON report here instead of stdout");
    sub->add_option("--levels", cfg.levels, "Highest level l (or truncation L)");
    if (!solver) return;
    sub->add_option("--rho", cfg.rho, "trace | normalized-trace | random | density file");
    sub->add_option("--tol", cfg.tol, "Solver tolerance");
    sub->add_option("--max-iter", cfg.max_iterations, "Solver iteration cap");
    sub->add_option("--relation", cfg.relation, "exact | sub");
    sub->add_option("--seed", cfg.seed, "Seed for the random rho preset");
  };

  auto* extend = app.add_subcommand("extend-check", "Extension hierarchy verdict for a bipartite state");
  extend->add_option("--state", cfg.state, "Matrix JSON with legs [m, n]")->required();
  common(extend, true);

  auto* scan = app.add_subcommand("scan-werner", "Hierarchy and PPT scan over the Werner family");
  scan->add_option("--grid", cfg.grid, "start:step:stop");
  common(scan, true);

  auto* boundary = app.add_subcommand("boundary", "Group-like matrix or sequence bundle report");
  boundary->add_option("--state", cfg.state, "Matrix JSON (t) or sequence bundle")->required();
  boundary->add_flag("--verify-bridge", cfg.verify_bridge,
                     "Also run the sequence validator and require agreement");
  common(boundary, true);

  auto* schur = app.add_subcommand("schur-table", "Schur-Weyl blocks of (C^n)^(x)l");
  schur->add_option("--n", cfg.n, "Dimension n");
  common(schur, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }
  cfg.rho_given = false;
  for (auto* sub : {extend, scan, boundary}) {
    if (sub->parsed() && sub->count("--rho") > 0) cfg.rho_given = true;
  }

  try {
    if (extend->parsed()) {
      cfg.command = "extend-check";
      cmd_extend_check(cfg);
    } else if (scan->parsed()) {
      cfg.command = "scan-werner";
      cmd_scan_werner(cfg);
    } else if (boundary->parsed()) {
      cfg.command = "boundary";
      cmd_boundary(cfg);
    } else {
      cfg.command = "schur-table";
      cmd_schur_table(cfg);
    }
  } catch (const Failure& f) {
    std::cerr << "qdf: " << f.message << '\n';
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "qdf: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitOk;
}
