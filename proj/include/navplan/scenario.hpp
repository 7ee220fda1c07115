#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "navplan/distance.hpp"

namespace navplan {

struct AuditSettings {
  int coverage_samples = 10000;
  int continuity_pairs = 2000;
  int flow_checks = 200;
  std::uint64_t seed = 7041;
};

struct ScenarioConfig {
  std::string scenario;
  AuditSettings audits;
  GridSpec grid{200};
  std::string out_dir = "out";
  std::optional<std::string> manifold;  // optional declaration, checked against the recipe
};

std::vector<std::string> bundled_scenario_names();
ScenarioConfig default_config(const std::string& name);

// Flat key = value text; unknown keys and malformed values are configuration
// errors raised before any computation.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig parse_config_file(const std::string& path);

struct ScenarioReport {
  nlohmann::ordered_json doc;
  bool audits_passed = false;
  std::vector<std::string> failures;                           // failing invariant names
  std::vector<std::pair<std::string, std::string>> artifacts;  // filename -> contents
};

ScenarioReport run_scenario(const ScenarioConfig& config);

// Writes report.json plus all CSV artifacts; returns the file manifest.
std::vector<std::string> export_report(const ScenarioReport& report, const std::string& out_dir);

// Shared planner recipes (bundled scenarios and tests build on these).
GeneralizedPlanner make_tc_torus_planner(int n);
GeneralizedPlanner make_tc_sphere_pair_planner(bool one_piece_cut_attempt = false);
GeneralizedPlanner make_cat_sphere_planner();

// Pushes a configuration-space planner through the planar two-link forward
// kinematic map; sections become workspace paths from f(x0) to f(x1).
GeneralizedPlanner build_workmap_planner(double l1, double l2,
                                         const GeneralizedPlanner& base_planner);

struct FibrationPlanner {
  GeneralizedPlanner planner;                // on T^2 x S^1, maps (f o pi_X, pi_Y)
  std::function<Path(const Point&)> lift;    // configuration-space path covering the section
};

// Sections come from the base circle planner between f(x) and y; the lift
// moves only the projected coordinate of x along the section.
FibrationPlanner build_fibration_planner(const GeneralizedPlanner& base_planner);

}  // namespace navplan
