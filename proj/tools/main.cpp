// Command-line front end: runs a named verification scenario and writes the
// deterministic report. Exit status 0 iff every check passed.

#include <CLI11.hpp>
#include <json.hpp>

#include "symplift/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>

namespace {

using symplift::scenario::ScenarioConfig;

symplift::geo::DiffStrategy parse_diff(const std::string& s) {
  if (s == "analytic") return symplift::geo::DiffStrategy::Analytic;
  if (s == "ad") return symplift::geo::DiffStrategy::ForwardAD;
  if (s == "fd") return symplift::geo::DiffStrategy::CentralDiff;
  throw CLI::ValidationError("--diff", "expected analytic|ad|fd");
}

void apply_config_file(ScenarioConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw symplift::Error("cannot read config: " + path);
  nlohmann::json j;
  in >> j;
  if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("samples")) {
    if (j["samples"].is_number()) {
      cfg.samples_group = cfg.samples_base = cfg.samples_fiber = j["samples"].get<int>();
    } else {
      const auto& s = j["samples"];
      if (s.contains("group")) cfg.samples_group = s["group"].get<int>();
      if (s.contains("base")) cfg.samples_base = s["base"].get<int>();
      if (s.contains("fiber")) cfg.samples_fiber = s["fiber"].get<int>();
    }
  }
  if (j.contains("bounds")) {
    cfg.bound_lo = j["bounds"][0].get<double>();
    cfg.bound_hi = j["bounds"][1].get<double>();
  }
  if (j.contains("diff")) cfg.diff = parse_diff(j["diff"].get<std::string>());
  if (j.contains("step")) cfg.step = j["step"].get<double>();
  if (j.contains("tol")) cfg.tol_override = j["tol"].get<double>();
  if (j.contains("report")) cfg.report_path = j["report"].get<std::string>();
  if (j.contains("action")) cfg.action_name = j["action"].get<std::string>();
  if (j.contains("cochain")) cfg.cochain_name = j["cochain"].get<std::string>();
}

void print_summary(const symplift::scenario::VerificationReport& rep) {
  std::printf("scenario %s: %s (%lld ms)\n", rep.scenario.c_str(), rep.overall ? "PASS" : "FAIL",
              static_cast<long long>(rep.runtime_ms));
  for (const auto& c : rep.checks) {
    if (!c.error.empty())
      std::printf("  [error] %-32s %s\n", c.name.c_str(), c.error.c_str());
    else
      std::printf("  [%s] %-32s residual %.3e  tol %.1e\n", c.pass ? "pass" : "FAIL",
                  c.name.c_str(), c.max_residual, c.tol);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"symplift: numerical verification of symplectic lifts of group actions"};
  app.require_subcommand(1);

  auto* list_cmd = app.add_subcommand("list", "list the available scenarios");

  auto* verify = app.add_subcommand("verify", "run one scenario's verification suite");
  std::string scenario_name, config_path, diff_str, report_path, action_name;
  ScenarioConfig cfg;
  int samples = 0;
  verify->add_option("scenario", scenario_name, "scenario name (see `list`)")->required();
  verify->add_option("--config", config_path, "JSON config file");
  verify->add_option("--seed", cfg.seed, "sampling seed");
  verify->add_option("--samples", samples, "override all sample counts");
  verify->add_option("--tol", cfg.tol_override, "override all check tolerances");
  verify->add_option("--diff", diff_str, "differentiation strategy: analytic|ad|fd");
  verify->add_option("--report", report_path, "report output path");
  verify->add_option("--action", action_name, "built-in action override");
  std::string cochain_name;
  verify->add_option("--cochain", cochain_name, "built-in cochain override (heisenberg scenario)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list_cmd) {
      for (const auto& [name, desc] : symplift::scenario::list_scenarios())
        std::printf("%-16s %s\n", name.c_str(), desc.c_str());
      return 0;
    }

    if (!config_path.empty()) apply_config_file(cfg, config_path);
    // command-line flags win over the config file
    if (verify->count("--diff")) cfg.diff = parse_diff(diff_str);
    if (verify->count("--samples")) cfg.samples_group = cfg.samples_base = cfg.samples_fiber = samples;
    if (verify->count("--report")) cfg.report_path = report_path;
    if (verify->count("--action")) cfg.action_name = action_name;
    if (verify->count("--cochain")) cfg.cochain_name = cochain_name;
    cfg.scenario = scenario_name;

    const auto rep = symplift::scenario::run(cfg);
    print_summary(rep);
    const std::string path =
        cfg.report_path.empty() ? symplift::scenario::default_report_path(cfg.scenario) : cfg.report_path;
    std::printf("report: %s\n", path.c_str());
    return rep.overall ? 0 : 1;
  } catch (const std::exception& ex) {
    std::fprintf(stderr, "error: %s\n", ex.what());
    return 2;
  }
}
