#include "navplan/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace navplan {

using json = nlohmann::ordered_json;

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string path_csv(const Path& p) {
  std::ostringstream os;
  os << "t";
  for (size_t i = 0; i < p.samples.front().point.coords.size(); ++i) os << ",c" << i;
  os << "\n";
  for (const auto& s : p.samples) {
    os << fmt(s.t);
    for (double c : s.point.coords) os << "," << fmt(c);
    os << "\n";
  }
  return os.str();
}

std::string cloud_csv(const std::vector<Point>& pts) {
  std::ostringstream os;
  if (!pts.empty()) {
    for (size_t i = 0; i < pts.front().coords.size(); ++i) os << (i ? "," : "") << "c" << i;
    os << "\n";
    for (const auto& p : pts) {
      for (size_t i = 0; i < p.coords.size(); ++i) os << (i ? "," : "") << fmt(p.coords[i]);
      os << "\n";
    }
  }
  return os.str();
}

json coverage_json(const CoverageAudit& a) {
  json j;
  j["samples"] = a.samples;
  j["uncovered"] = a.uncovered;
  j["endpoint_failures"] = a.endpoint_failures;
  j["max_endpoint_error"] = a.max_endpoint_error;
  j["piece_hits"] = a.piece_hits;
  j["pass"] = a.pass;
  return j;
}

json continuity_json(const ContinuityAudit& a) {
  json j;
  j["pairs"] = a.pairs;
  j["delta"] = a.delta;
  j["max_within_piece_k"] = a.max_within_k;
  j["cross_piece_candidates"] = a.cross_piece;
  j["basin_boundary_candidates"] = a.basin_boundary;
  j["skipped"] = a.skipped;
  j["violations"] = static_cast<int>(a.violations.size());
  j["pass"] = a.pass;
  return j;
}

json bound_json(const BoundReport& r, int raw_pieces) {
  json j;
  j["label"] = r.label;
  j["upper_bound"] = r.upper_bound;
  j["raw_piece_count"] = raw_pieces;
  json terms = json::array();
  for (const auto& [value, count] : r.per_level_terms) terms.push_back({{"level", value}, {"pieces", count}});
  j["per_level_terms"] = terms;
  j["theorem_form_rhs"] = r.theorem_form_rhs;
  if (r.reference)
    j["reference"] = {{"value", r.reference->value}, {"provenance", r.reference->provenance}};
  else
    j["reference"] = nullptr;
  j["inequality_holds"] = r.inequality_holds;
  return j;
}

json planner_json(const GeneralizedPlanner& pl) {
  json j;
  switch (pl.provenance) {
    case PlannerProvenance::MorseBott: j["provenance"] = "morse_bott"; break;
    case PlannerProvenance::CutLocus: j["provenance"] = "cut_locus"; break;
    case PlannerProvenance::Direct: j["provenance"] = "direct"; break;
  }
  j["source"] = pl.source.to_string();
  j["target"] = pl.target.to_string();
  j["f"] = pl.f.to_string();
  j["g"] = pl.g.to_string();
  j["piece_count"] = static_cast<int>(pl.pieces.size());
  json pieces = json::array();
  for (const auto& p : pl.pieces)
    pieces.push_back({{"label", p.label}, {"tube_radius", p.tube_radius}});
  j["pieces"] = pieces;
  return j;
}

struct FlowStatsReport {
  int runs = 0;
  int converged = 0;
  int ambiguous = 0;
  int skipped = 0;  // off-domain starts
  double mean_steps = 0.0;
  double max_value_increase = 0.0;
  double max_limit_error = -1.0;  // vs a target point, when given
  double max_arc_excess = -1.0;   // arc length minus distance-to-N, when given
};

FlowStatsReport flow_stats(const NavigationFunction& fn, int runs, std::uint64_t seed,
                           const std::optional<Point>& expected_limit,
                           const SubmanifoldSpec* arc_target) {
  Rng rng(seed);
  FlowStatsReport st;
  st.runs = runs;
  long total_steps = 0;
  for (int k = 0; k < runs; ++k) {
    Point start = uniform_sample(fn.manifold, rng);
    if (fn.domain && !fn.domain(start)) {
      ++st.skipped;
      continue;
    }
    FlowResult r = negative_gradient_flow(fn, start);
    if (!r.converged) continue;
    ++st.converged;
    if (r.ambiguous) ++st.ambiguous;
    total_steps += r.steps;
    double prev = fn.value(r.trajectory.samples.front().point);
    for (const auto& s : r.trajectory.samples) {
      double v = fn.value(s.point);
      st.max_value_increase = std::max(st.max_value_increase, v - prev);
      prev = v;
    }
    if (expected_limit)
      st.max_limit_error =
          std::max(st.max_limit_error, riemannian_distance(r.limit_point, *expected_limit));
    if (arc_target) {
      double arc = path_length(arc_length_reparametrize(r, fn));
      double d = distance_to_submanifold(start, *arc_target).distance;
      st.max_arc_excess = std::max(st.max_arc_excess, arc - d);
    }
  }
  if (st.converged > 0) st.mean_steps = static_cast<double>(total_steps) / st.converged;
  return st;
}

json flow_json(const FlowStatsReport& st) {
  json j;
  j["runs"] = st.runs;
  j["converged"] = st.converged;
  j["ambiguous"] = st.ambiguous;
  j["skipped_off_domain"] = st.skipped;
  j["mean_steps"] = st.mean_steps;
  j["max_value_increase"] = st.max_value_increase;
  if (st.max_limit_error >= 0.0) j["max_limit_error"] = st.max_limit_error;
  if (st.max_arc_excess > -1.0) j["max_arc_excess"] = st.max_arc_excess;
  return j;
}

json navaudit_json(const NavFunctionAudit& a) {
  json j;
  j["max_component_grad"] = a.max_component_grad;
  j["min_offset_grad"] = a.min_offset_grad;
  j["min_random_value"] = a.min_random_value;
  j["minimum_on_lowest_level"] = a.minimum_on_lowest_level;
  j["pass"] = a.pass;
  return j;
}

// One exemplar path per piece, found by seeded sampling with a fallback to
// the piece's own base submanifold (covers measure-zero basins).
void export_exemplar_paths(const GeneralizedPlanner& pl, const std::string& prefix,
                           std::uint64_t seed, ScenarioReport* report) {
  Rng rng(seed ^ 0x9e3779b97f4a7c15ull);
  std::vector<std::optional<Path>> exemplar(pl.pieces.size());
  size_t found = 0;
  for (int tries = 0; tries < 3000 && found < exemplar.size(); ++tries) {
    Point x = uniform_sample(pl.source, rng);
    try {
      PlanResult pr = plan(pl, x);
      if (!exemplar[pr.piece_index]) {
        exemplar[pr.piece_index] = pr.path;
        ++found;
      }
    } catch (const std::exception&) {
    }
  }
  for (size_t i = 0; i < exemplar.size() && found < exemplar.size(); ++i) {
    if (exemplar[i]) continue;
    for (const auto& base : pl.pieces[i].base) {
      if (base.ambient() != pl.source) continue;
      for (int t = 0; t < 50 && !exemplar[i]; ++t) {
        Point x = sample_submanifold(base, rng);
        try {
          PlanResult pr = plan(pl, x);
          if (pr.piece_index == static_cast<int>(i)) {
            exemplar[i] = pr.path;
            ++found;
          }
        } catch (const std::exception&) {
        }
      }
      if (exemplar[i]) break;
    }
  }
  for (size_t i = 0; i < exemplar.size(); ++i) {
    if (!exemplar[i]) continue;
    std::ostringstream name;
    name << prefix << "_piece" << i << "_path.csv";
    report->artifacts.push_back({name.str(), path_csv(*exemplar[i])});
  }
}

void note(ScenarioReport* report, bool ok, const std::string& invariant) {
  if (!ok) report->failures.push_back(invariant);
}

json config_json(const ScenarioConfig& cfg) {
  json j;
  j["scenario"] = cfg.scenario;
  j["seed"] = cfg.audits.seed;
  j["coverage_samples"] = cfg.audits.coverage_samples;
  j["continuity_pairs"] = cfg.audits.continuity_pairs;
  j["flow_checks"] = cfg.audits.flow_checks;
  j["grid_per_dim"] = cfg.grid.per_dim;
  j["out"] = cfg.out_dir;
  return j;
}

void run_planner_audits(const GeneralizedPlanner& pl, const ScenarioConfig& cfg,
                        ScenarioReport* report, json* audits) {
  CoverageAudit cov = coverage_audit(pl, cfg.audits.coverage_samples, cfg.audits.seed + 1);
  ContinuityAudit cont = continuity_audit(pl, cfg.audits.continuity_pairs, cfg.audits.seed + 2);
  (*audits)["coverage"] = coverage_json(cov);
  (*audits)["continuity"] = continuity_json(cont);
  note(report, cov.uncovered == 0, "coverage");
  note(report, cov.endpoint_failures == 0, "endpoint_contract");
  note(report, cont.pass, "continuity");
}

}  // namespace

// ---------------------------------------------------------------------------
// Shared planner recipes

GeneralizedPlanner make_tc_torus_planner(int n) {
  NavigationFunction fn = make_torus_cosine(n);
  MapSpec f = MapSpec::projection_first(fn.manifold);
  MapSpec g = MapSpec::projection_second(fn.manifold);
  std::vector<std::vector<PlannerPiece>> level_pieces;
  for (const auto& level : fn.levels) {
    LocalPlannerContext ctx{fn.manifold, f, g, {}, true};
    for (const auto& comp : level.components) ctx.domain.push_back(comp.set);
    level_pieces.push_back(standard_local_planners(LocalPlannerKind::TranslationHomotopy, ctx));
  }
  return build_morse_bott_planner(fn, level_pieces, f, g);
}

GeneralizedPlanner make_tc_sphere_pair_planner(bool one_piece_cut_attempt) {
  ManifoldSpec sphere = ManifoldSpec::sphere(2);
  ManifoldSpec m = ManifoldSpec::product({sphere, sphere});
  SubmanifoldSpec diag = SubmanifoldSpec::diagonal(m);
  CutLocusDescriptor cut = cut_locus_analytic(m, diag);
  MapSpec f = MapSpec::projection_first(m);
  MapSpec g = MapSpec::projection_second(m);
  LocalPlannerContext n_ctx{m, f, g, {diag}, true};
  auto pieces_on_n = standard_local_planners(LocalPlannerKind::GeodesicHomotopy, n_ctx);
  LocalPlannerContext cut_ctx{m, f, g, cut.pieces, !one_piece_cut_attempt};
  auto pieces_on_cut = standard_local_planners(LocalPlannerKind::AntipodalSpherePieces, cut_ctx);
  if (one_piece_cut_attempt) pieces_on_cut.resize(1);
  return build_cutlocus_planner(m, diag, cut, pieces_on_n, pieces_on_cut, f, g);
}

GeneralizedPlanner make_cat_sphere_planner() {
  ManifoldSpec m = ManifoldSpec::sphere(2);
  Point np = make_point(m, {0.0, 0.0, 1.0});
  SubmanifoldSpec n = SubmanifoldSpec::single_point(np);
  CutLocusDescriptor cut = cut_locus_analytic(m, n);
  MapSpec f = MapSpec::identity(m);
  MapSpec g = MapSpec::constant_at(m, np);
  LocalPlannerContext n_ctx{m, f, g, {n}, true};
  auto pieces_on_n = standard_local_planners(LocalPlannerKind::GeodesicHomotopy, n_ctx);
  LocalPlannerContext cut_ctx{m, f, g, cut.pieces, true};
  auto pieces_on_cut = standard_local_planners(LocalPlannerKind::GeodesicHomotopy, cut_ctx);
  return build_cutlocus_planner(m, n, cut, pieces_on_n, pieces_on_cut, f, g);
}

GeneralizedPlanner build_workmap_planner(double l1, double l2,
                                         const GeneralizedPlanner& base_planner) {
  if (base_planner.source != ManifoldSpec::torus(4) ||
      base_planner.target != ManifoldSpec::torus(2))
    throw ConfigError("work map pushforward needs a TC planner for T^2");
  MapSpec fk = MapSpec::forward_kinematics(l1, l2);
  GeneralizedPlanner out = base_planner;
  out.f = MapSpec::compose(fk, base_planner.f);
  out.g = MapSpec::compose(fk, base_planner.g);
  out.target = fk.target();
  for (size_t i = 0; i < out.pieces.size(); ++i) {
    auto section = base_planner.pieces[i].section;
    out.pieces[i].section = [section, fk](const Point& x) { return fk.map_path(section(x)); };
  }
  return out;
}

FibrationPlanner build_fibration_planner(const GeneralizedPlanner& base_planner) {
  if (base_planner.source != ManifoldSpec::torus(2) ||
      base_planner.target != ManifoldSpec::torus(1))
    throw ConfigError("fibration planner needs a TC planner for S^1");
  ManifoldSpec x_space = ManifoldSpec::torus(2);
  ManifoldSpec y_space = ManifoldSpec::circle();
  ManifoldSpec source = ManifoldSpec::product({x_space, y_space});
  MapSpec pi_x = MapSpec::product_projection(source, 0);
  MapSpec pi_y = MapSpec::product_projection(source, 1);
  MapSpec fib = MapSpec::product_projection(x_space, 0);  // T^2 -> S^1, first coordinate

  // Base planner input (f(x), y) in S^1 x S^1.
  auto to_base = [](const Point& p) {
    return make_point(ManifoldSpec::torus(2), {p.coords[0], p.coords[2]});
  };

  GeneralizedPlanner pl{source, y_space, MapSpec::compose(fib, pi_x), pi_y};
  pl.provenance = base_planner.provenance;
  pl.per_level_counts = base_planner.per_level_counts;
  auto base = std::make_shared<GeneralizedPlanner>(base_planner);
  if (base_planner.limit_map) {
    auto base_limit = base_planner.limit_map;
    pl.limit_map = [base_limit, to_base](const Point& p) { return base_limit(to_base(p)); };
  }
  for (const auto& piece : base_planner.pieces) {
    PlannerPiece lifted;
    lifted.label = "fibration/" + piece.label;
    lifted.flow_routed = piece.flow_routed;
    auto contains = piece.contains;
    lifted.contains = [contains, to_base](const Point& p) { return contains(to_base(p)); };
    auto section = piece.section;
    lifted.section = [section, to_base](const Point& p) { return section(to_base(p)); };
    pl.pieces.push_back(std::move(lifted));
  }

  auto lift = [base, to_base, x_space](const Point& p) {
    PlanResult pr = plan(*base, to_base(p));
    std::vector<PathSample> samples;
    samples.reserve(pr.path.samples.size());
    for (const auto& s : pr.path.samples)
      samples.push_back(
          {s.t, make_point(x_space, {s.point.coords[0], p.coords[1]})});
    return make_path(x_space, std::move(samples));
  };
  return FibrationPlanner{std::move(pl), lift};
}

// ---------------------------------------------------------------------------
// Bundled scenarios

namespace {

ScenarioReport run_tc_torus(const ScenarioConfig& cfg, int n) {
  ScenarioReport report;
  NavigationFunction fn = make_torus_cosine(n);
  GeneralizedPlanner pl = make_tc_torus_planner(n);
  std::string space = n == 1 ? "S^1" : "T^2";

  json doc;
  doc["scenario"] = cfg.scenario;
  doc["config"] = config_json(cfg);
  doc["manifold"] = pl.source.to_string();
  doc["planner"] = planner_json(pl);

  json critical_values = json::array();
  for (const auto& level : fn.levels) critical_values.push_back(level.value);
  doc["critical_values"] = critical_values;

  BoundReport bound =
      check_morse_bott_bound(pl, "TC(" + space + ") critical level decomposition",
                             ReferenceTable::builtin().lookup("TC", space));
  doc["bounds"] = json::array({bound_json(bound, static_cast<int>(pl.pieces.size()))});
  note(&report, bound.inequality_holds, "level_decomposition_arithmetic");
  if (bound.reference)
    note(&report, bound.upper_bound == bound.reference->value, "reference_value_match");

  json audits;
  run_planner_audits(pl, cfg, &report, &audits);
  NavFunctionAudit na = audit_navigation_function(fn, 400, cfg.audits.seed + 3);
  audits["navigation_function"] = navaudit_json(na);
  note(&report, na.pass, "navigation_function_audit");
  FlowStatsReport st = flow_stats(fn, cfg.audits.flow_checks, cfg.audits.seed + 4, std::nullopt, nullptr);
  audits["flow"] = flow_json(st);
  note(&report, st.converged + st.skipped == st.runs, "flow_convergence");
  note(&report, st.max_value_increase <= 1e-10, "flow_monotonicity");
  doc["audits"] = audits;

  export_exemplar_paths(pl, cfg.scenario, cfg.audits.seed, &report);
  report.doc = std::move(doc);
  return report;
}

ScenarioReport run_tc_sphere_pair(const ScenarioConfig& cfg) {
  ScenarioReport report;
  GeneralizedPlanner pl = make_tc_sphere_pair_planner(false);
  ManifoldSpec m = pl.source;
  SubmanifoldSpec diag = SubmanifoldSpec::diagonal(m);
  CutLocusDescriptor cut = cut_locus_analytic(m, diag);
  NavigationFunction fn = squared_distance_function(m, diag, cut);

  json doc;
  doc["scenario"] = cfg.scenario;
  doc["config"] = config_json(cfg);
  doc["manifold"] = m.to_string();
  doc["planner"] = planner_json(pl);

  BoundReport bound = check_cutlocus_bound(pl, "TC(S^2) via diagonal cut decomposition",
                                           ReferenceTable::builtin().lookup("TC", "S^2"));
  doc["bounds"] = json::array({bound_json(bound, static_cast<int>(pl.pieces.size()))});
  note(&report, bound.inequality_holds, "cut_decomposition_arithmetic");
  if (bound.reference)
    note(&report, bound.upper_bound == bound.reference->value, "reference_value_match");

  json audits;
  run_planner_audits(pl, cfg, &report, &audits);
  FlowStatsReport st = flow_stats(fn, cfg.audits.flow_checks, cfg.audits.seed + 4, std::nullopt, &diag);
  audits["flow"] = flow_json(st);
  note(&report, st.converged + st.skipped == st.runs, "flow_convergence");
  note(&report, st.max_value_increase <= 1e-10, "flow_monotonicity");
  note(&report, st.max_arc_excess <= 0.01, "flow_arc_length");

  // A single cut piece cannot choose rotation planes continuously across its
  // excluded axis; the audit must reject that attempt.
  GeneralizedPlanner attempt = make_tc_sphere_pair_planner(true);
  ContinuityAudit attempt_audit =
      continuity_audit(attempt, cfg.audits.continuity_pairs, cfg.audits.seed + 5);
  json aj;
  aj["piece_count"] = static_cast<int>(attempt.pieces.size());
  aj["violations"] = static_cast<int>(attempt_audit.violations.size());
  aj["max_within_piece_k"] = attempt_audit.max_within_k;
  aj["rejected"] = !attempt_audit.pass;
  audits["one_piece_cut_attempt"] = aj;
  note(&report, !attempt_audit.pass, "one_piece_attempt_rejected");
  doc["audits"] = audits;

  export_exemplar_paths(pl, cfg.scenario, cfg.audits.seed, &report);
  report.doc = std::move(doc);
  return report;
}

ScenarioReport run_cat_sphere(const ScenarioConfig& cfg) {
  ScenarioReport report;
  GeneralizedPlanner pl = make_cat_sphere_planner();
  ManifoldSpec m = pl.source;
  Point np = make_point(m, {0.0, 0.0, 1.0});
  SubmanifoldSpec n = SubmanifoldSpec::single_point(np);
  CutLocusDescriptor cut = cut_locus_analytic(m, n);
  NavigationFunction fn = squared_distance_function(m, n, cut);

  json doc;
  doc["scenario"] = cfg.scenario;
  doc["config"] = config_json(cfg);
  doc["manifold"] = m.to_string();
  doc["planner"] = planner_json(pl);

  BoundReport bound = check_cutlocus_bound(pl, "cat(S^2) via point cut decomposition",
                                           ReferenceTable::builtin().lookup("cat", "S^2"));
  doc["bounds"] = json::array({bound_json(bound, static_cast<int>(pl.pieces.size()))});
  note(&report, bound.inequality_holds, "cut_decomposition_arithmetic");
  if (bound.reference)
    note(&report, bound.upper_bound == bound.reference->value, "reference_value_match");

  json audits;
  run_planner_audits(pl, cfg, &report, &audits);
  FlowStatsReport st = flow_stats(fn, cfg.audits.flow_checks, cfg.audits.seed + 4, np, &n);
  audits["flow"] = flow_json(st);
  note(&report, st.converged + st.skipped == st.runs, "flow_convergence");
  note(&report, st.max_value_increase <= 1e-10, "flow_monotonicity");
  note(&report, st.max_limit_error <= 1e-3, "flow_limit_accuracy");
  note(&report, st.max_arc_excess <= 0.01, "flow_arc_length");
  doc["audits"] = audits;

  export_exemplar_paths(pl, cfg.scenario, cfg.audits.seed, &report);
  report.doc = std::move(doc);
  return report;
}

ScenarioReport run_cutlocus_torus_detect(const ScenarioConfig& cfg) {
  ScenarioReport report;
  ManifoldSpec m = ManifoldSpec::torus(2);
  Point p = make_point(m, {kPi, kPi});
  SubmanifoldSpec n = SubmanifoldSpec::single_point(p);
  CutLocusDescriptor cut = cut_locus_analytic(m, n);

  json doc;
  doc["scenario"] = cfg.scenario;
  doc["config"] = config_json(cfg);
  doc["manifold"] = m.to_string();
  json pieces = json::array();
  for (const auto& piece : cut.pieces) pieces.push_back(piece.label());
  doc["analytic_cut_pieces"] = pieces;

  std::vector<Point> detected = detect_separation_points(m, n, cfg.grid);
  double spacing = 2.0 * kPi / cfg.grid.per_dim;
  std::vector<Point> analytic;
  for (const auto& g : sample_grid(m, cfg.grid))
    if (distance_to_cut(g, cut) <= 0.5 * spacing) analytic.push_back(g);
  double hd = hausdorff_distance(detected, analytic);

  // Cross-check the descriptor: every declared cut point splits into >= 2
  // minimizing segments.
  Rng rng(cfg.audits.seed + 6);
  bool pieces_ok = true;
  for (const auto& piece : cut.pieces) {
    for (int k = 0; k < 50; ++k) {
      MinimizingGeodesics segs = n_segments(sample_submanifold(piece, rng), n);
      if (!segs.continuum && segs.segments.size() < 2) pieces_ok = false;
    }
  }

  json audits;
  json det;
  det["grid_per_dim"] = cfg.grid.per_dim;
  det["detected_points"] = static_cast<int>(detected.size());
  det["analytic_points"] = static_cast<int>(analytic.size());
  det["hausdorff_distance"] = hd;
  det["pass"] = hd <= 0.05;
  audits["detection"] = det;
  audits["cut_piece_multiplicity_pass"] = pieces_ok;
  doc["audits"] = audits;
  note(&report, hd <= 0.05, "detection_hausdorff");
  note(&report, pieces_ok, "cut_piece_multiplicity");

  report.artifacts.push_back({cfg.scenario + "_detected_points.csv", cloud_csv(detected)});
  report.artifacts.push_back({cfg.scenario + "_analytic_points.csv", cloud_csv(analytic)});
  report.doc = std::move(doc);
  return report;
}

ScenarioReport run_workmap_arm(const ScenarioConfig& cfg) {
  ScenarioReport report;
  GeneralizedPlanner base = make_tc_torus_planner(2);
  GeneralizedPlanner pl = build_workmap_planner(1.0, 1.0, base);

  json doc;
  doc["scenario"] = cfg.scenario;
  doc["config"] = config_json(cfg);
  doc["manifold"] = pl.source.to_string();
  doc["workspace"] = pl.target.to_string();
  doc["link_lengths"] = json::array({1.0, 1.0});
  doc["planner"] = planner_json(pl);

  BoundReport bound = check_morse_bott_bound(pl, "tc(work map) pushforward decomposition");
  doc["bounds"] = json::array({bound_json(bound, static_cast<int>(pl.pieces.size()))});
  note(&report, pl.pieces.size() == base.pieces.size(), "pushforward_piece_count");

  json audits;
  run_planner_audits(pl, cfg, &report, &audits);
  doc["audits"] = audits;

  export_exemplar_paths(pl, cfg.scenario, cfg.audits.seed, &report);
  report.doc = std::move(doc);
  return report;
}

ScenarioReport run_fibration(const ScenarioConfig& cfg) {
  ScenarioReport report;
  GeneralizedPlanner base = make_tc_torus_planner(1);
  FibrationPlanner fib = build_fibration_planner(base);
  const GeneralizedPlanner& pl = fib.planner;

  json doc;
  doc["scenario"] = cfg.scenario;
  doc["config"] = config_json(cfg);
  doc["manifold"] = pl.source.to_string();
  doc["planner"] = planner_json(pl);

  BoundReport bound = check_morse_bott_bound(pl, "cx(projection fibration) decomposition");
  doc["bounds"] = json::array({bound_json(bound, static_cast<int>(pl.pieces.size()))});
  note(&report, pl.pieces.size() == base.pieces.size(), "lift_piece_count");

  json audits;
  run_planner_audits(pl, cfg, &report, &audits);

  // The lift must cover the section: projecting it recovers the planned
  // circle path sample-for-sample.
  Rng rng(cfg.audits.seed + 7);
  double max_lift_dev = 0.0;
  double max_lift_fixed_dev = 0.0;
  int checks = std::min(cfg.audits.coverage_samples, 10000);
  for (int k = 0; k < checks; ++k) {
    Point p = uniform_sample(pl.source, rng);
    PlanResult pr = plan(pl, p);
    Path lifted = fib.lift(p);
    for (size_t s = 0; s < lifted.samples.size(); ++s) {
      double d = std::fabs(principal_angle(lifted.samples[s].point.coords[0] -
                                           pr.path.samples[s].point.coords[0]));
      max_lift_dev = std::max(max_lift_dev, d);
      double fixed = std::fabs(principal_angle(lifted.samples[s].point.coords[1] - p.coords[1]));
      max_lift_fixed_dev = std::max(max_lift_fixed_dev, fixed);
    }
  }
  json lj;
  lj["checks"] = checks;
  lj["max_projection_deviation"] = max_lift_dev;
  lj["max_fiber_drift"] = max_lift_fixed_dev;
  lj["pass"] = max_lift_dev <= 1e-9 && max_lift_fixed_dev <= 1e-9;
  audits["lift"] = lj;
  note(&report, max_lift_dev <= 1e-9, "lift_projection");
  note(&report, max_lift_fixed_dev <= 1e-9, "lift_fiber_fixed");
  doc["audits"] = audits;

  export_exemplar_paths(pl, cfg.scenario, cfg.audits.seed, &report);
  report.doc = std::move(doc);
  return report;
}

ScenarioReport run_weakcat_circle(const ScenarioConfig& cfg) {
  ScenarioReport report;
  json doc;
  doc["scenario"] = cfg.scenario;
  doc["config"] = config_json(cfg);
  doc["manifold"] = ManifoldSpec::circle().to_string();

  const std::vector<int> degrees{0, 1, 2, -1, 5};
  json entries = json::array();
  bool all_monotone = true;
  bool all_consistent = true;
  for (int degree : degrees) {
    int value = weak_category_circle(degree);
    std::vector<int> seq = weak_category_circle_sequence(degree, 10);
    bool monotone = true;
    for (size_t k = 1; k < seq.size(); ++k)
      if (seq[k] > seq[k - 1]) monotone = false;
    all_monotone = all_monotone && monotone;
    all_consistent = all_consistent && value == seq.back();
    long long w = winding_number(
        [degree](double theta) { return wrap_angle(degree * theta); });
    json e;
    e["degree"] = degree;
    e["winding"] = w;
    e["weak_category"] = value;
    e["per_iterate_bounds"] = seq;
    e["non_increasing"] = monotone;
    entries.push_back(e);
  }
  doc["degrees"] = entries;
  note(&report, all_monotone, "iterate_bounds_non_increasing");
  note(&report, all_consistent, "weak_category_consistency");

  report.doc = std::move(doc);
  return report;
}

}  // namespace

std::vector<std::string> bundled_scenario_names() {
  return {"cat_sphere",  "tc_circle",   "tc_torus2",   "tc_sphere2_cutlocus",
          "cutlocus_torus_detect", "workmap_arm", "fibration_t2_s1", "weakcat_circle"};
}

ScenarioConfig default_config(const std::string& name) {
  auto names = bundled_scenario_names();
  if (std::find(names.begin(), names.end(), name) == names.end())
    throw ConfigError("unknown scenario: " + name);
  ScenarioConfig cfg;
  cfg.scenario = name;
  if (name == "cat_sphere") cfg.audits.flow_checks = 1000;
  return cfg;
}

namespace {

ManifoldSpec parse_manifold_string(const std::string& text) {
  auto colon = text.find(':');
  std::string kind = text.substr(0, colon);
  int dim = 0;
  if (colon != std::string::npos) {
    try {
      dim = std::stoi(text.substr(colon + 1));
    } catch (const std::exception&) {
      throw ConfigError("malformed manifold dimension in '" + text + "'");
    }
  }
  if (kind == "circle") return ManifoldSpec::circle();
  if (kind == "torus") return ManifoldSpec::torus(dim);
  if (kind == "sphere") return ManifoldSpec::sphere(dim);
  if (kind == "rp") return ManifoldSpec::real_projective(dim);
  throw ConfigError("unknown manifold kind: " + kind);
}

std::optional<ManifoldSpec> recipe_source(const std::string& name) {
  if (name == "tc_circle") return ManifoldSpec::torus(2);
  if (name == "tc_torus2") return ManifoldSpec::torus(4);
  if (name == "tc_sphere2_cutlocus")
    return ManifoldSpec::product({ManifoldSpec::sphere(2), ManifoldSpec::sphere(2)});
  if (name == "cat_sphere") return ManifoldSpec::sphere(2);
  if (name == "cutlocus_torus_detect") return ManifoldSpec::torus(2);
  if (name == "workmap_arm") return ManifoldSpec::torus(4);
  if (name == "fibration_t2_s1")
    return ManifoldSpec::product({ManifoldSpec::torus(2), ManifoldSpec::circle()});
  if (name == "weakcat_circle") return ManifoldSpec::circle();
  return std::nullopt;
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

ScenarioConfig parse_config_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("malformed config line: " + line);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty()) throw ConfigError("malformed config line: " + line);
    kv[key] = value;
  }
  auto it = kv.find("scenario");
  if (it == kv.end()) it = kv.find("name");
  if (it == kv.end()) throw ConfigError("config is missing the scenario name");
  ScenarioConfig cfg = default_config(it->second);

  auto parse_int = [](const std::string& key, const std::string& value, int lo) {
    try {
      int v = std::stoi(value);
      if (v < lo) throw ConfigError("config value out of range for " + key);
      return v;
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("malformed integer for " + key + ": " + value);
    }
  };

  for (const auto& [key, value] : kv) {
    if (key == "scenario" || key == "name") continue;
    if (key == "seed")
      cfg.audits.seed = static_cast<std::uint64_t>(parse_int(key, value, 0));
    else if (key == "samples")
      cfg.audits.coverage_samples = parse_int(key, value, 1);
    else if (key == "continuity_pairs")
      cfg.audits.continuity_pairs = parse_int(key, value, 0);
    else if (key == "flow_checks")
      cfg.audits.flow_checks = parse_int(key, value, 0);
    else if (key == "grid")
      cfg.grid.per_dim = parse_int(key, value, 2);
    else if (key == "out")
      cfg.out_dir = value;
    else if (key == "manifold") {
      ManifoldSpec declared = parse_manifold_string(value);
      auto expected = recipe_source(cfg.scenario);
      if (expected && declared != *expected)
        throw ConfigError("declared manifold " + declared.to_string() +
                          " does not match the recipe's " + expected->to_string());
      cfg.manifold = value;
    } else {
      throw ConfigError("unknown config key: " + key);
    }
  }
  return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse_config_text(os.str());
}

ScenarioReport run_scenario(const ScenarioConfig& cfg) {
  ScenarioReport report = [&] {
    if (cfg.scenario == "tc_circle") return run_tc_torus(cfg, 1);
    if (cfg.scenario == "tc_torus2") return run_tc_torus(cfg, 2);
    if (cfg.scenario == "tc_sphere2_cutlocus") return run_tc_sphere_pair(cfg);
    if (cfg.scenario == "cat_sphere") return run_cat_sphere(cfg);
    if (cfg.scenario == "cutlocus_torus_detect") return run_cutlocus_torus_detect(cfg);
    if (cfg.scenario == "workmap_arm") return run_workmap_arm(cfg);
    if (cfg.scenario == "fibration_t2_s1") return run_fibration(cfg);
    if (cfg.scenario == "weakcat_circle") return run_weakcat_circle(cfg);
    throw ConfigError("unknown scenario: " + cfg.scenario);
  }();
  report.audits_passed = report.failures.empty();
  report.doc["failures"] = report.failures;
  report.doc["audits_passed"] = report.audits_passed;
  json exports = json::array();
  exports.push_back("report.json");
  for (const auto& [name, contents] : report.artifacts) exports.push_back(name);
  report.doc["exports"] = exports;
  return report;
}

std::vector<std::string> export_report(const ScenarioReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw ConfigError("cannot create output directory: " + out_dir);
  std::vector<std::string> manifest;
  auto write = [&](const std::string& name, const std::string& contents) {
    fs::path path = fs::path(out_dir) / name;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write " + path.string());
    out << contents;
    manifest.push_back(path.string());
  };
  write("report.json", report.doc.dump(2) + "\n");
  for (const auto& [name, contents] : report.artifacts) write(name, contents);
  return manifest;
}

}  // namespace navplan
