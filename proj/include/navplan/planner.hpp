#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "navplan/cutlocus.hpp"
#include "navplan/morse.hpp"

namespace navplan {

inline constexpr double kContinuityDelta = 1e-3;  // probe pair separation
inline constexpr double kContinuityKMax = 1e3;    // Lipschitz flag threshold
inline constexpr int kSupGrid = 128;              // common resampling grid
inline constexpr double kAxisMargin = 1e-4;       // antipodal piece axis exclusion (on 1 - |x.e|)

// Raised by plan() when no piece claims a point; signals a covering gap.
struct CoverageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class MapKind {
  Identity,
  ConstantAt,
  ProjectionFirst,
  ProjectionSecond,
  Translation,
  ForwardKinematics,
  ProductProjection,
  Compose
};

// Declarative continuous map between catalog manifolds; everything the
// planner evaluates is one of these, which keeps sections auditable.
class MapSpec {
 public:
  static MapSpec identity(const ManifoldSpec& m);
  static MapSpec constant_at(const ManifoldSpec& source, Point target);
  static MapSpec projection_first(const ManifoldSpec& pair);
  static MapSpec projection_second(const ManifoldSpec& pair);
  static MapSpec translation(const ManifoldSpec& torus, std::vector<double> offset);
  static MapSpec forward_kinematics(double l1, double l2);  // T^2 -> R^2
  static MapSpec product_projection(const ManifoldSpec& source, int factor);
  static MapSpec compose(MapSpec outer, MapSpec inner);

  MapKind map_kind() const { return kind_; }
  const ManifoldSpec& source() const { return source_; }
  const ManifoldSpec& target() const { return target_; }
  Point evaluate(const Point& x) const;
  Path map_path(const Path& p) const;
  std::string to_string() const;

 private:
  MapSpec(MapKind k, ManifoldSpec s, ManifoldSpec t)
      : kind_(k), source_(std::move(s)), target_(std::move(t)) {}
  MapKind kind_;
  ManifoldSpec source_;
  ManifoldSpec target_;
  std::optional<Point> constant_;
  std::vector<double> offset_;
  double l1_ = 0.0, l2_ = 0.0;
  int factor_ = 0;
  std::shared_ptr<MapSpec> outer_, inner_;
};

// One covering piece: an ENR-style domain with a continuous section. For
// every x in the domain, section(x) runs from f(x) to g(x) in the target.
struct PlannerPiece {
  std::string label;
  std::function<bool(const Point&)> contains;
  std::function<Path(const Point&)> section;
  double tube_radius = 0.0;
  std::vector<SubmanifoldSpec> base;   // domain descriptors, used for retraction/sampling
  std::vector<Point> stress_probes;    // audit centers near delicate domain regions
  bool flow_routed = false;            // section passes through a gradient flow
};

enum class PlannerProvenance { MorseBott, CutLocus, Direct };

struct GeneralizedPlanner {
  ManifoldSpec source;
  ManifoldSpec target;
  MapSpec f;
  MapSpec g;
  std::vector<PlannerPiece> pieces;  // first match wins on overlaps
  PlannerProvenance provenance = PlannerProvenance::Direct;
  std::vector<std::pair<double, int>> per_level_counts;  // MorseBott: (value, piece count)
  int pieces_on_submanifold = 0;                         // CutLocus bookkeeping
  int pieces_on_cut = 0;
  std::function<std::optional<Point>(const Point&)> limit_map;  // flow limit, if any
};

struct PlanResult {
  Path path;
  int piece_index = -1;
};

PlanResult plan(const GeneralizedPlanner& planner, const Point& x);

enum class LocalPlannerKind { GeodesicHomotopy, TranslationHomotopy, AntipodalSpherePieces };

struct LocalPlannerContext {
  ManifoldSpec source;
  MapSpec f;
  MapSpec g;
  std::vector<SubmanifoldSpec> domain;  // components the pieces live on
  bool restrict_axis_domains = true;    // antipodal pieces exclude their rotation axes
};

std::vector<PlannerPiece> standard_local_planners(LocalPlannerKind kind,
                                                  const LocalPlannerContext& ctx);

// Per-(level, local piece) planner: slide along the negative gradient flow to
// the critical set, apply the local section there, ride the reversed flow
// image back. Reported bound = total piece count - 1.
GeneralizedPlanner build_morse_bott_planner(const NavigationFunction& fn,
                                            const std::vector<std::vector<PlannerPiece>>& level_pieces,
                                            const MapSpec& f, const MapSpec& g,
                                            const FlowSettings& flow = {});

struct CutPlannerOptions {
  double tube_radius = 0.3;
  double injectivity_margin = 1.0;
  double cut_margin = kCutMargin;
  FlowSettings flow;
};

// Pieces off the cut locus route through the squared-distance flow onto N;
// pieces on the cut locus are tube-enlarged and used directly.
GeneralizedPlanner build_cutlocus_planner(const ManifoldSpec& m, const SubmanifoldSpec& n,
                                          const CutLocusDescriptor& cut,
                                          const std::vector<PlannerPiece>& pieces_on_n,
                                          const std::vector<PlannerPiece>& pieces_on_cut,
                                          const MapSpec& f, const MapSpec& g,
                                          const CutPlannerOptions& options = {});

// Widens a piece to an open tube around its base submanifold; the section
// retracts to the base, applies the original section, and returns.
PlannerPiece enlarge_piece(const PlannerPiece& piece, double radius, const MapSpec& f,
                           const MapSpec& g, double injectivity_margin = 1.0);

GeneralizedPlanner reverse_planner(const GeneralizedPlanner& planner);

struct CoverageAudit {
  int samples = 0;
  int uncovered = 0;
  int endpoint_failures = 0;
  double max_endpoint_error = 0.0;
  std::vector<int> piece_hits;
  bool pass = false;
};

CoverageAudit coverage_audit(const GeneralizedPlanner& planner, int samples, std::uint64_t seed);

enum class PairClass { Within, CrossPiece, BasinBoundary };

struct ContinuityViolation {
  Point x;
  Point y;
  int piece = -1;
  double k = 0.0;
};

struct ContinuityAudit {
  int pairs = 0;
  double delta = kContinuityDelta;
  double max_within_k = 0.0;
  int cross_piece = 0;     // expected discontinuity candidates
  int basin_boundary = 0;  // pairs straddling a flow separatrix
  int skipped = 0;
  std::vector<ContinuityViolation> violations;
  bool pass = false;
};

// Draws pairs at distance delta (random centers plus every stress probe) and
// estimates the per-piece Lipschitz constant of plan(). Cross-piece pairs and
// separatrix-straddling pairs of flow-routed pieces are expected
// discontinuity candidates, never failures.
ContinuityAudit continuity_audit(const GeneralizedPlanner& planner, int samples,
                                 std::uint64_t seed);

}  // namespace navplan
