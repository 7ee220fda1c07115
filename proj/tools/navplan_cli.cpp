// Command-line front end: run bundled or file-based scenario configs, audit
// them without exporting, and export planned paths / point clouds as CSV.
//
// Exit codes: 0 pass, 2 audit failure, 3 configuration error.

#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "navplan/scenario.hpp"

namespace {

navplan::ScenarioConfig load_config(const std::string& name_or_path) {
  auto names = navplan::bundled_scenario_names();
  for (const auto& n : names)
    if (n == name_or_path) return navplan::default_config(name_or_path);
  if (std::filesystem::exists(name_or_path)) return navplan::parse_config_file(name_or_path);
  throw navplan::ConfigError("not a bundled scenario or readable config file: " + name_or_path);
}

void apply_overrides(navplan::ScenarioConfig& cfg, const CLI::Option* seed, std::uint64_t seed_v,
                     const CLI::Option* samples, int samples_v, const CLI::Option* out,
                     const std::string& out_v) {
  if (seed->count() > 0) cfg.audits.seed = seed_v;
  if (samples->count() > 0) cfg.audits.coverage_samples = samples_v;
  if (out->count() > 0) cfg.out_dir = out_v;
}

void print_summary(const navplan::ScenarioReport& report) {
  const auto& doc = report.doc;
  std::cout << "scenario: " << doc["scenario"].get<std::string>() << "\n";
  if (doc.contains("planner")) {
    std::cout << "  pieces: " << doc["planner"]["piece_count"].get<int>() << "\n";
  }
  if (doc.contains("bounds")) {
    for (const auto& b : doc["bounds"]) {
      std::cout << "  " << b["label"].get<std::string>() << ": upper bound "
                << b["upper_bound"].get<int>() << " (theorem rhs " << b["theorem_form_rhs"].get<int>()
                << ", holds: " << (b["inequality_holds"].get<bool>() ? "yes" : "no") << ")\n";
    }
  }
  if (report.audits_passed) {
    std::cout << "  audits: pass\n";
  } else {
    std::cout << "  audits: FAIL";
    for (const auto& f : report.failures) std::cout << " [" << f << "]";
    std::cout << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalized motion planners on catalog manifolds"};
  app.require_subcommand(1);

  std::string config_arg;
  std::uint64_t seed_v = 0;
  int samples_v = 0;
  std::string out_v;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_arg, "bundled scenario name or config file path")->required();
    auto* seed = cmd->add_option("--seed", seed_v, "audit RNG seed");
    auto* samples = cmd->add_option("--samples", samples_v, "coverage sample count");
    auto* out = cmd->add_option("--out", out_v, "output directory");
    return std::tuple{seed, samples, out};
  };

  auto* run_cmd = app.add_subcommand("run", "build the planner, run all audits, export report");
  auto [run_seed, run_samples, run_out] = add_common(run_cmd);
  auto* audit_cmd = app.add_subcommand("audit", "run audits without exporting files");
  auto [audit_seed, audit_samples, audit_out] = add_common(audit_cmd);
  auto* export_cmd = app.add_subcommand("export-paths", "export CSV artifacts only");
  auto [export_seed, export_samples, export_out] = add_common(export_cmd);
  auto* list_cmd = app.add_subcommand("list-scenarios", "list bundled scenario names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (list_cmd->parsed()) {
      for (const auto& n : navplan::bundled_scenario_names()) std::cout << n << "\n";
      return 0;
    }
    if (run_cmd->parsed()) {
      navplan::ScenarioConfig cfg = load_config(config_arg);
      apply_overrides(cfg, run_seed, seed_v, run_samples, samples_v, run_out, out_v);
      navplan::ScenarioReport report = navplan::run_scenario(cfg);
      auto manifest = navplan::export_report(report, cfg.out_dir);
      print_summary(report);
      for (const auto& f : manifest) std::cout << "  wrote " << f << "\n";
      return report.audits_passed ? 0 : 2;
    }
    if (audit_cmd->parsed()) {
      navplan::ScenarioConfig cfg = load_config(config_arg);
      apply_overrides(cfg, audit_seed, seed_v, audit_samples, samples_v, audit_out, out_v);
      navplan::ScenarioReport report = navplan::run_scenario(cfg);
      print_summary(report);
      return report.audits_passed ? 0 : 2;
    }
    if (export_cmd->parsed()) {
      navplan::ScenarioConfig cfg = load_config(config_arg);
      apply_overrides(cfg, export_seed, seed_v, export_samples, samples_v, export_out, out_v);
      navplan::ScenarioReport report = navplan::run_scenario(cfg);
      auto manifest = navplan::export_report(report, cfg.out_dir);
      for (const auto& f : manifest) std::cout << "wrote " << f << "\n";
      return 0;
    }
  } catch (const navplan::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "audit failure: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
