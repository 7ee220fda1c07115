#include "navplan/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace navplan {

namespace {

[[noreturn]] void bad_arg(const std::string& msg) { throw std::invalid_argument(msg); }

Path concat3(const Path& a, const Path& b, const Path& c) {
  return concatenate_paths(concatenate_paths(a, b), c);
}

struct NearestBase {
  double distance = std::numeric_limits<double>::infinity();
  Point foot;
};

NearestBase nearest_base(const std::vector<SubmanifoldSpec>& bases, const Point& p) {
  NearestBase best;
  for (const auto& b : bases) {
    FootResult fr = distance_to_submanifold(p, b);
    if (fr.distance < best.distance) best = NearestBase{fr.distance, fr.foot};
  }
  return best;
}

Path geodesic_section(const Point& a, const Point& b, int samples) {
  MinimizingGeodesics mg = minimizing_geodesics(a, b);
  const GeodesicSegment& seg = mg.segments.front();
  if (seg.length <= 0.0) return constant_path(a);
  Path p = geodesic_path(seg, samples);
  p.samples.back().point = b;  // land exactly on the requested endpoint
  return p;
}

}  // namespace

// ---------------------------------------------------------------------------
// MapSpec

MapSpec MapSpec::identity(const ManifoldSpec& m) { return MapSpec(MapKind::Identity, m, m); }

MapSpec MapSpec::constant_at(const ManifoldSpec& source, Point target) {
  MapSpec s(MapKind::ConstantAt, source, target.manifold);
  s.constant_ = std::move(target);
  return s;
}

MapSpec MapSpec::projection_first(const ManifoldSpec& pair) {
  return MapSpec(MapKind::ProjectionFirst, pair, pair_half(pair));
}

MapSpec MapSpec::projection_second(const ManifoldSpec& pair) {
  return MapSpec(MapKind::ProjectionSecond, pair, pair_half(pair));
}

MapSpec MapSpec::translation(const ManifoldSpec& torus, std::vector<double> offset) {
  if (!torus.is_angular()) bad_arg("translation maps are defined on tori");
  if (static_cast<int>(offset.size()) != torus.ambient_size())
    bad_arg("translation offset size mismatch");
  MapSpec s(MapKind::Translation, torus, torus);
  s.offset_ = std::move(offset);
  return s;
}

MapSpec MapSpec::forward_kinematics(double l1, double l2) {
  MapSpec s(MapKind::ForwardKinematics, ManifoldSpec::torus(2), ManifoldSpec::euclidean(2));
  s.l1_ = l1;
  s.l2_ = l2;
  return s;
}

MapSpec MapSpec::product_projection(const ManifoldSpec& source, int factor) {
  if (source.kind() == ManifoldKind::Product) {
    if (factor < 0 || factor >= static_cast<int>(source.factors().size()))
      bad_arg("product projection factor out of range");
    MapSpec s(MapKind::ProductProjection, source, source.factors()[factor]);
    s.factor_ = factor;
    return s;
  }
  if (source.is_angular()) {
    if (factor < 0 || factor >= source.ambient_size())
      bad_arg("torus coordinate projection out of range");
    MapSpec s(MapKind::ProductProjection, source, ManifoldSpec::circle());
    s.factor_ = factor;
    return s;
  }
  bad_arg("product projection needs a product or torus source");
}

MapSpec MapSpec::compose(MapSpec outer, MapSpec inner) {
  if (outer.source() != inner.target()) bad_arg("composition domains do not chain");
  MapSpec s(MapKind::Compose, inner.source(), outer.target());
  s.outer_ = std::make_shared<MapSpec>(std::move(outer));
  s.inner_ = std::make_shared<MapSpec>(std::move(inner));
  return s;
}

Point MapSpec::evaluate(const Point& x) const {
  if (x.manifold != source_) bad_arg("map evaluated off its source manifold");
  switch (kind_) {
    case MapKind::Identity:
      return x;
    case MapKind::ConstantAt:
      return *constant_;
    case MapKind::ProjectionFirst:
      return pair_first(x);
    case MapKind::ProjectionSecond:
      return pair_second(x);
    case MapKind::Translation: {
      std::vector<double> c(x.coords);
      for (size_t i = 0; i < c.size(); ++i) c[i] = wrap_angle(c[i] + offset_[i]);
      return Point{target_, std::move(c)};
    }
    case MapKind::ForwardKinematics: {
      double t1 = x.coords[0], t2 = x.coords[1];
      return Point{target_,
                   {l1_ * std::cos(t1) + l2_ * std::cos(t1 + t2),
                    l1_ * std::sin(t1) + l2_ * std::sin(t1 + t2)}};
    }
    case MapKind::ProductProjection: {
      if (source_.kind() == ManifoldKind::Product) return factor_point(x, factor_);
      return Point{target_, {x.coords[factor_]}};
    }
    case MapKind::Compose:
      return outer_->evaluate(inner_->evaluate(x));
  }
  bad_arg("unreachable map kind");
}

Path MapSpec::map_path(const Path& p) const {
  std::vector<PathSample> out;
  out.reserve(p.samples.size());
  for (const auto& s : p.samples) out.push_back({s.t, evaluate(s.point)});
  return make_path(target_, std::move(out));
}

std::string MapSpec::to_string() const {
  std::ostringstream os;
  switch (kind_) {
    case MapKind::Identity: return "id";
    case MapKind::ConstantAt: return "const";
    case MapKind::ProjectionFirst: return "p1";
    case MapKind::ProjectionSecond: return "p2";
    case MapKind::Translation: return "translate";
    case MapKind::ForwardKinematics:
      os << "fk(" << l1_ << "," << l2_ << ")";
      return os.str();
    case MapKind::ProductProjection:
      os << "proj[" << factor_ << "]";
      return os.str();
    case MapKind::Compose:
      return outer_->to_string() + "*" + inner_->to_string();
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Local planner library

namespace {

std::vector<PlannerPiece> geodesic_homotopy_pieces(const LocalPlannerContext& ctx) {
  PlannerPiece piece;
  piece.label = "geodesic_homotopy";
  piece.base = ctx.domain;
  auto domain = ctx.domain;
  piece.contains = [domain](const Point& p) {
    for (const auto& d : domain)
      if (submanifold_contains(d, p)) return true;
    return false;
  };
  MapSpec f = ctx.f, g = ctx.g;
  piece.section = [f, g](const Point& p) {
    return geodesic_section(f.evaluate(p), g.evaluate(p), 33);
  };
  return {std::move(piece)};
}

std::vector<PlannerPiece> translation_homotopy_pieces(const LocalPlannerContext& ctx) {
  if (!ctx.f.target().is_angular())
    throw ConfigError("translation homotopy needs a torus target");
  PlannerPiece piece;
  piece.label = "translation_homotopy";
  piece.base = ctx.domain;
  auto domain = ctx.domain;
  piece.contains = [domain](const Point& p) {
    for (const auto& d : domain)
      if (submanifold_contains(d, p)) return true;
    return false;
  };
  MapSpec f = ctx.f, g = ctx.g;
  piece.section = [f, g](const Point& p) {
    Point a = f.evaluate(p);
    Point b = g.evaluate(p);
    // Constant offset on each component; principal value with ties to +pi
    // keeps the choice deterministic.
    std::vector<double> delta(a.coords.size());
    for (size_t i = 0; i < delta.size(); ++i) delta[i] = principal_angle(b.coords[i] - a.coords[i]);
    const int samples = 33;
    std::vector<PathSample> out;
    out.reserve(samples);
    for (int k = 0; k < samples; ++k) {
      double t = static_cast<double>(k) / (samples - 1);
      std::vector<double> c(a.coords);
      for (size_t i = 0; i < c.size(); ++i) c[i] = wrap_angle(c[i] + t * delta[i]);
      out.push_back({t, Point{a.manifold, std::move(c)}});
    }
    out.back().point = b;
    return make_path(a.manifold, std::move(out));
  };
  return {std::move(piece)};
}

std::vector<double> axis_vector(int ambient, int which) {
  std::vector<double> e(ambient, 0.0);
  e[which == 0 ? ambient - 1 : 0] = 1.0;
  return e;
}

std::vector<PlannerPiece> antipodal_sphere_pieces(const LocalPlannerContext& ctx) {
  const ManifoldSpec sphere = ctx.f.target();
  if (sphere.kind() != ManifoldKind::Sphere || sphere.dimension() < 2)
    throw ConfigError("antipodal pieces need a sphere target of dimension >= 2");
  int ambient = sphere.ambient_size();
  std::vector<PlannerPiece> pieces;
  for (int which = 0; which < 2; ++which) {
    std::vector<double> axis = axis_vector(ambient, which);
    std::vector<double> fallback = axis_vector(ambient, 1 - which);
    PlannerPiece piece;
    std::ostringstream label;
    label << "antipodal_rotation[axis=" << (which == 0 ? ambient - 1 : 0) << "]";
    piece.label = label.str();
    piece.base = ctx.domain;
    auto domain = ctx.domain;
    MapSpec f = ctx.f, g = ctx.g;
    bool restricted = ctx.restrict_axis_domains;
    piece.contains = [domain, f, axis, restricted](const Point& p) {
      bool on = false;
      for (const auto& d : domain)
        if (submanifold_contains(d, p)) on = true;
      if (!on) return false;
      if (!restricted) return true;
      Point a = f.evaluate(p);
      double d = 0.0;
      for (size_t i = 0; i < axis.size(); ++i) d += a.coords[i] * axis[i];
      return 1.0 - std::fabs(d) > kAxisMargin;
    };
    piece.section = [f, g, axis, fallback](const Point& p) {
      Point a = f.evaluate(p);
      // Rotate a to -a inside the plane spanned with the axis.
      auto tangent_toward = [&a](const std::vector<double>& e) {
        double d = 0.0;
        for (size_t i = 0; i < e.size(); ++i) d += a.coords[i] * e[i];
        std::vector<double> w(e);
        for (size_t i = 0; i < w.size(); ++i) w[i] -= d * a.coords[i];
        return w;
      };
      std::vector<double> w = tangent_toward(axis);
      double nw = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
      if (nw < 1e-9) {
        w = tangent_toward(fallback);
        nw = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
      }
      for (double& v : w) v /= nw;
      const int samples = 65;
      std::vector<PathSample> out;
      out.reserve(samples);
      for (int k = 0; k < samples; ++k) {
        double t = static_cast<double>(k) / (samples - 1);
        std::vector<double> c(a.coords.size());
        for (size_t i = 0; i < c.size(); ++i)
          c[i] = std::cos(kPi * t) * a.coords[i] + std::sin(kPi * t) * w[i];
        out.push_back({t, make_point(a.manifold, std::move(c))});
      }
      out.back().point = g.evaluate(p);
      return make_path(a.manifold, std::move(out));
    };
    // Audit centers straddling and skirting the excluded axis.
    if (!ctx.domain.empty() && ctx.domain[0].kind() == SubmanifoldKind::AntipodalGraph) {
      auto lift = [&](std::vector<double> coords) {
        Point x = make_point(sphere, std::move(coords));
        return make_pair_point(x, antipode(x));
      };
      for (double sign : {1.0, -1.0}) {
        std::vector<double> pole(axis);
        for (double& v : pole) v *= sign;
        piece.stress_probes.push_back(lift(pole));
        for (int bdir = 0; bdir < 2; ++bdir) {
          std::vector<double> tilted(pole);
          std::vector<double> b = axis_vector(ambient, 1 - which);
          if (bdir == 1)
            for (double& v : b) v = -v;
          for (size_t i = 0; i < tilted.size(); ++i) tilted[i] += 0.02 * b[i];
          double nn = std::sqrt(
              std::inner_product(tilted.begin(), tilted.end(), tilted.begin(), 0.0));
          for (double& v : tilted) v /= nn;
          piece.stress_probes.push_back(lift(tilted));
        }
      }
    }
    pieces.push_back(std::move(piece));
  }
  return pieces;
}

}  // namespace

std::vector<PlannerPiece> standard_local_planners(LocalPlannerKind kind,
                                                  const LocalPlannerContext& ctx) {
  if (ctx.f.source() != ctx.source || ctx.g.source() != ctx.source)
    throw ConfigError("local planner maps must share the declared source");
  if (ctx.f.target() != ctx.g.target())
    throw ConfigError("local planner maps must share a target");
  switch (kind) {
    case LocalPlannerKind::GeodesicHomotopy:
      return geodesic_homotopy_pieces(ctx);
    case LocalPlannerKind::TranslationHomotopy:
      return translation_homotopy_pieces(ctx);
    case LocalPlannerKind::AntipodalSpherePieces:
      return antipodal_sphere_pieces(ctx);
  }
  throw ConfigError("unknown local planner kind");
}

// ---------------------------------------------------------------------------
// Planner construction

namespace {

void audit_local_cover(const std::vector<SubmanifoldSpec>& components,
                       const std::vector<PlannerPiece>& pieces, const std::string& what) {
  Rng rng(0x5eedc0ffee);
  for (const auto& comp : components) {
    for (int k = 0; k < 20; ++k) {
      Point p = sample_submanifold(comp, rng);
      bool claimed = false;
      for (const auto& piece : pieces)
        if (piece.contains(p)) claimed = true;
      if (!claimed) throw ConfigError("local pieces do not cover " + what);
    }
  }
}

PlannerPiece flow_routed_piece(const std::shared_ptr<NavigationFunction>& nav,
                               const FlowSettings& fs, int level_index,
                               const PlannerPiece& local, const MapSpec& f, const MapSpec& g,
                               const std::string& label) {
  PlannerPiece piece;
  piece.label = label;
  piece.flow_routed = true;
  piece.base = local.base;
  piece.tube_radius = local.tube_radius;
  piece.stress_probes = local.stress_probes;
  auto local_contains = local.contains;
  piece.contains = [nav, fs, level_index, local_contains](const Point& p) {
    try {
      FlowResult r = negative_gradient_flow(*nav, p, fs);
      return r.converged && r.level_index == level_index && local_contains(r.limit_point);
    } catch (const std::exception&) {
      return false;
    }
  };
  auto local_section = local.section;
  piece.section = [nav, fs, f, g, local_section](const Point& p) {
    FlowResult r = negative_gradient_flow(*nav, p, fs);
    if (!r.converged) throw CoverageError("gradient flow failed inside a claimed domain");
    Path down = arc_length_reparametrize(r, *nav);
    Path first = f.map_path(down);
    Path middle = local_section(r.limit_point);
    Path last = g.map_path(reverse_path(down));
    return concat3(first, middle, last);
  };
  return piece;
}

std::function<std::optional<Point>(const Point&)> make_limit_map(
    const std::shared_ptr<NavigationFunction>& nav, const FlowSettings& fs) {
  return [nav, fs](const Point& p) -> std::optional<Point> {
    try {
      FlowResult r = negative_gradient_flow(*nav, p, fs);
      if (r.converged) return r.limit_point;
    } catch (const std::exception&) {
    }
    return std::nullopt;
  };
}

}  // namespace

GeneralizedPlanner build_morse_bott_planner(const NavigationFunction& fn,
                                            const std::vector<std::vector<PlannerPiece>>& level_pieces,
                                            const MapSpec& f, const MapSpec& g,
                                            const FlowSettings& flow) {
  if (f.source() != fn.manifold || g.source() != fn.manifold)
    throw ConfigError("planner maps must be defined on the navigation function's manifold");
  if (f.target() != g.target()) throw ConfigError("planner maps must share a target");
  if (level_pieces.size() != fn.levels.size())
    throw ConfigError("need one piece list per critical level");

  for (size_t i = 0; i < fn.levels.size(); ++i) {
    std::vector<SubmanifoldSpec> comps;
    for (const auto& c : fn.levels[i].components) comps.push_back(c.set);
    std::ostringstream what;
    what << "critical level " << fn.levels[i].value;
    audit_local_cover(comps, level_pieces[i], what.str());
  }

  auto nav = std::make_shared<NavigationFunction>(fn);
  GeneralizedPlanner pl{fn.manifold, f.target(), f, g};
  pl.provenance = PlannerProvenance::MorseBott;
  pl.limit_map = make_limit_map(nav, flow);

  Rng probe_rng(0x9e3779b9);
  for (size_t i = 0; i < fn.levels.size(); ++i) {
    for (size_t j = 0; j < level_pieces[i].size(); ++j) {
      std::ostringstream label;
      label << "level[c=" << fn.levels[i].value << "]/" << level_pieces[i][j].label;
      PlannerPiece piece = flow_routed_piece(nav, flow, static_cast<int>(i), level_pieces[i][j],
                                             f, g, label.str());
      // Separatrix probes: audit pairs that straddle the stable sets of
      // positive-index components.
      if (j == 0) {
        for (const auto& comp : fn.levels[i].components)
          if (comp.index > 0)
            for (int k = 0; k < 4; ++k)
              piece.stress_probes.push_back(sample_submanifold(comp.set, probe_rng));
      }
      pl.pieces.push_back(std::move(piece));
    }
    pl.per_level_counts.push_back({fn.levels[i].value, static_cast<int>(level_pieces[i].size())});
  }
  return pl;
}

GeneralizedPlanner build_cutlocus_planner(const ManifoldSpec& m, const SubmanifoldSpec& n,
                                          const CutLocusDescriptor& cut,
                                          const std::vector<PlannerPiece>& pieces_on_n,
                                          const std::vector<PlannerPiece>& pieces_on_cut,
                                          const MapSpec& f, const MapSpec& g,
                                          const CutPlannerOptions& options) {
  if (f.source() != m || g.source() != m)
    throw ConfigError("planner maps must be defined on the ambient manifold");
  if (f.target() != g.target()) throw ConfigError("planner maps must share a target");
  if (pieces_on_n.empty()) throw ConfigError("need at least one piece on the submanifold");
  if (!cut.pieces.empty() && pieces_on_cut.empty())
    throw ConfigError("cut locus is nonempty but no cut pieces were supplied");

  audit_local_cover({n}, pieces_on_n, "the submanifold");
  audit_local_cover(cut.pieces, pieces_on_cut, "the cut locus");

  auto nav = std::make_shared<NavigationFunction>(
      squared_distance_function(m, n, cut, options.cut_margin));
  GeneralizedPlanner pl{m, f.target(), f, g};
  pl.provenance = PlannerProvenance::CutLocus;
  pl.limit_map = make_limit_map(nav, options.flow);

  for (size_t j = 0; j < pieces_on_n.size(); ++j) {
    std::ostringstream label;
    label << "flow_to_" << n.label() << "/" << pieces_on_n[j].label;
    pl.pieces.push_back(
        flow_routed_piece(nav, options.flow, 0, pieces_on_n[j], f, g, label.str()));
  }
  for (const auto& q : pieces_on_cut) {
    PlannerPiece enlarged = enlarge_piece(q, options.tube_radius, f, g,
                                          options.injectivity_margin);
    enlarged.label = "cut/" + q.label;
    pl.pieces.push_back(std::move(enlarged));
  }
  pl.pieces_on_submanifold = static_cast<int>(pieces_on_n.size());
  pl.pieces_on_cut = static_cast<int>(pieces_on_cut.size());
  return pl;
}

PlannerPiece enlarge_piece(const PlannerPiece& piece, double radius, const MapSpec& f,
                           const MapSpec& g, double injectivity_margin) {
  if (radius < 0.0) bad_arg("tube radius must be nonnegative");
  if (radius == 0.0) return piece;
  if (radius > injectivity_margin)
    throw ConfigError("tube radius exceeds the configured injectivity margin");
  if (piece.base.empty())
    throw ConfigError("piece has no base submanifold to retract onto");

  PlannerPiece out;
  out.label = piece.label + "+tube";
  out.tube_radius = radius;
  out.base = piece.base;
  out.stress_probes = piece.stress_probes;
  out.flow_routed = piece.flow_routed;
  auto bases = piece.base;
  auto inner_contains = piece.contains;
  out.contains = [bases, inner_contains, radius](const Point& p) {
    NearestBase nb = nearest_base(bases, p);
    return nb.distance < radius && inner_contains(nb.foot);
  };
  auto inner_section = piece.section;
  out.section = [bases, inner_section, f, g](const Point& p) {
    NearestBase nb = nearest_base(bases, p);
    if (nb.distance < 1e-14) {
      return concat3(constant_path(f.evaluate(p)), inner_section(p),
                     constant_path(g.evaluate(p)));
    }
    Path geo = geodesic_section(p, nb.foot, 17);
    Path first = f.map_path(geo);
    Path middle = inner_section(nb.foot);
    Path last = g.map_path(reverse_path(geo));
    return concat3(first, middle, last);
  };
  return out;
}

GeneralizedPlanner reverse_planner(const GeneralizedPlanner& planner) {
  GeneralizedPlanner out = planner;
  out.f = planner.g;
  out.g = planner.f;
  for (auto& piece : out.pieces) {
    auto orig = piece.section;
    piece.section = [orig](const Point& p) { return reverse_path(orig(p)); };
  }
  return out;
}

PlanResult plan(const GeneralizedPlanner& planner, const Point& x) {
  if (x.manifold != planner.source) bad_arg("plan query off the source manifold");
  for (size_t i = 0; i < planner.pieces.size(); ++i) {
    if (planner.pieces[i].contains(x))
      return PlanResult{planner.pieces[i].section(x), static_cast<int>(i)};
  }
  throw CoverageError("no planner piece claims the query point");
}

CoverageAudit coverage_audit(const GeneralizedPlanner& planner, int samples, std::uint64_t seed) {
  Rng rng(seed);
  CoverageAudit audit;
  audit.samples = samples;
  audit.piece_hits.assign(planner.pieces.size(), 0);
  for (int k = 0; k < samples; ++k) {
    Point x = uniform_sample(planner.source, rng);
    std::optional<PlanResult> result;
    try {
      result = plan(planner, x);
    } catch (const std::exception&) {
      ++audit.uncovered;
      continue;
    }
    ++audit.piece_hits[result->piece_index];
    double d0 = riemannian_distance(result->path.samples.front().point, planner.f.evaluate(x));
    double d1 = riemannian_distance(result->path.samples.back().point, planner.g.evaluate(x));
    audit.max_endpoint_error = std::max({audit.max_endpoint_error, d0, d1});
    if (d0 > kTolJoin || d1 > kTolJoin) ++audit.endpoint_failures;
  }
  audit.pass = audit.uncovered == 0 && audit.endpoint_failures == 0;
  return audit;
}

ContinuityAudit continuity_audit(const GeneralizedPlanner& planner, int samples,
                                 std::uint64_t seed) {
  Rng rng(seed);
  ContinuityAudit audit;
  audit.delta = kContinuityDelta;

  std::vector<Point> centers;
  centers.reserve(samples);
  for (int k = 0; k < samples; ++k) centers.push_back(uniform_sample(planner.source, rng));
  for (const auto& piece : planner.pieces)
    for (const auto& probe : piece.stress_probes) centers.push_back(probe);

  for (const auto& c : centers) {
    TangentVector u = random_unit_tangent(c, rng);
    TangentVector nu{c, u.components};
    for (double& v : nu.components) v = -v;
    Point x = exp_map(c, u, 0.5 * audit.delta);
    Point y = exp_map(c, nu, 0.5 * audit.delta);
    std::optional<PlanResult> px, py;
    try {
      px = plan(planner, x);
      py = plan(planner, y);
    } catch (const std::exception&) {
      ++audit.skipped;
      continue;
    }
    ++audit.pairs;
    if (px->piece_index != py->piece_index) {
      ++audit.cross_piece;
      continue;
    }
    double k_pair = sup_path_distance(px->path, py->path, kSupGrid) / audit.delta;
    const PlannerPiece& piece = planner.pieces[px->piece_index];
    if (k_pair > kContinuityKMax && piece.flow_routed && planner.limit_map) {
      // The basin map is continuous only piecewise; a pair whose limits land
      // far apart straddles a separatrix, an expected discontinuity.
      auto lx = planner.limit_map(x);
      auto ly = planner.limit_map(y);
      if (!lx || !ly || riemannian_distance(*lx, *ly) > 100.0 * audit.delta) {
        ++audit.basin_boundary;
        continue;
      }
    }
    audit.max_within_k = std::max(audit.max_within_k, k_pair);
    if (k_pair > kContinuityKMax)
      audit.violations.push_back(ContinuityViolation{x, y, px->piece_index, k_pair});
  }
  audit.pass = audit.violations.empty();
  return audit;
}

}  // namespace navplan
