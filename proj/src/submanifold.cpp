#include "navplan/submanifold.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace navplan {

namespace {

[[noreturn]] void bad_arg(const std::string& msg) { throw std::invalid_argument(msg); }

double vnorm(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

double vdot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Midpoint feet of the x -> w minimizers, shared by Diagonal and
// AntipodalGraph: each minimizing geodesic in the half manifold yields one
// N-segment of length len/sqrt(2) in the pair manifold.
struct PairFoot {
  Point half_foot;      // midpoint m in the half manifold
  Point mid_velocity;   // geodesic velocity at m (stored as coords for reuse)
  double half_length;   // full length of the x -> w geodesic
};

std::vector<PairFoot> pair_feet(const Point& x_half, const Point& w_half, bool* continuum) {
  if (x_half.manifold.kind() == ManifoldKind::Product ||
      x_half.manifold.kind() == ManifoldKind::RealProjective)
    bad_arg("diagonal feet supported for sphere and torus pairs only");
  MinimizingGeodesics mg = minimizing_geodesics(x_half, w_half);
  *continuum = mg.continuum;
  std::vector<PairFoot> feet;
  for (const auto& seg : mg.segments) {
    Point m = seg.length > 0.0 ? exp_map(seg.start, seg.initial_velocity, 0.5 * seg.length)
                               : seg.start;
    // Velocity of the geodesic transported to the midpoint.
    std::vector<double> vel(seg.initial_velocity.components);
    if (x_half.manifold.kind() == ManifoldKind::Sphere && seg.length > 0.0) {
      double a = 0.5 * seg.length;
      for (size_t i = 0; i < vel.size(); ++i)
        vel[i] = -std::sin(a) * x_half.coords[i] + std::cos(a) * seg.initial_velocity.components[i];
    }
    feet.push_back(PairFoot{m, Point{x_half.manifold, std::move(vel)}, seg.length});
  }
  return feet;
}

Point torus_shift(const Point& p, const std::vector<double>& offset, double sign) {
  std::vector<double> c(p.coords);
  for (size_t i = 0; i < c.size(); ++i) c[i] = wrap_angle(c[i] + sign * offset[i]);
  return Point{p.manifold, std::move(c)};
}

}  // namespace

SubmanifoldSpec SubmanifoldSpec::single_point(Point p) {
  SubmanifoldSpec s(p.manifold);
  s.kind_ = SubmanifoldKind::SinglePoint;
  s.dimension_ = 0;
  s.label_ = "point";
  s.point_ = std::move(p);
  return s;
}

SubmanifoldSpec SubmanifoldSpec::diagonal(const ManifoldSpec& ambient) {
  return diagonal(ambient, {});
}

SubmanifoldSpec SubmanifoldSpec::diagonal(const ManifoldSpec& ambient, std::vector<double> offset) {
  if (!is_pair_manifold(ambient)) bad_arg("diagonal needs a pair manifold M x M");
  ManifoldSpec half = pair_half(ambient);
  if (!offset.empty()) {
    if (!half.is_angular()) bad_arg("diagonal offsets are supported on torus pairs only");
    if (static_cast<int>(offset.size()) != half.ambient_size())
      bad_arg("diagonal offset size does not match the factor");
    for (double& v : offset) v = wrap_angle(v);
  }
  SubmanifoldSpec s(ambient);
  s.kind_ = SubmanifoldKind::Diagonal;
  s.dimension_ = half.dimension();
  s.label_ = offset.empty() ? "diagonal" : "offset_diagonal";
  s.offset_ = std::move(offset);
  return s;
}

SubmanifoldSpec SubmanifoldSpec::subtorus(const ManifoldSpec& ambient,
                                          std::vector<std::pair<int, double>> fixed_coords) {
  if (!ambient.is_angular()) bad_arg("subtorus needs a torus ambient");
  if (fixed_coords.empty()) bad_arg("subtorus needs at least one fixed coordinate");
  for (auto& [i, v] : fixed_coords) {
    if (i < 0 || i >= ambient.ambient_size()) bad_arg("subtorus coordinate index out of range");
    v = wrap_angle(v);
  }
  SubmanifoldSpec s(ambient);
  s.kind_ = SubmanifoldKind::Subtorus;
  s.dimension_ = ambient.dimension() - static_cast<int>(fixed_coords.size());
  s.label_ = "subtorus";
  s.fixed_ = std::move(fixed_coords);
  return s;
}

SubmanifoldSpec SubmanifoldSpec::antipodal_graph(const ManifoldSpec& ambient) {
  if (!is_pair_manifold(ambient) || pair_half(ambient).kind() != ManifoldKind::Sphere)
    bad_arg("antipodal graph needs a sphere pair S^n x S^n");
  SubmanifoldSpec s(ambient);
  s.kind_ = SubmanifoldKind::AntipodalGraph;
  s.dimension_ = pair_half(ambient).dimension();
  s.label_ = "antipodal_graph";
  return s;
}

SubmanifoldSpec SubmanifoldSpec::custom(const ManifoldSpec& ambient, std::string label,
                                        int dimension, std::function<Point(const Point&)> project,
                                        std::function<Point(Rng&)> sample) {
  SubmanifoldSpec s(ambient);
  s.kind_ = SubmanifoldKind::Custom;
  s.dimension_ = dimension;
  s.label_ = std::move(label);
  s.project_ = std::move(project);
  s.sample_ = std::move(sample);
  return s;
}

const Point& SubmanifoldSpec::point() const {
  if (!point_) bad_arg("submanifold is not a single point");
  return *point_;
}

FootResult distance_to_submanifold(const Point& y, const SubmanifoldSpec& n) {
  if (y.manifold != n.ambient()) bad_arg("query point is off the ambient manifold");
  switch (n.kind()) {
    case SubmanifoldKind::SinglePoint:
      return FootResult{riemannian_distance(y, n.point()), n.point()};
    case SubmanifoldKind::Diagonal: {
      Point x = pair_first(y);
      Point w = pair_second(y);
      if (!n.offset().empty()) w = torus_shift(w, n.offset(), +1.0);
      bool continuum = false;
      auto feet = pair_feet(x, w, &continuum);
      const PairFoot& f = feet.front();
      Point b = n.offset().empty() ? f.half_foot : torus_shift(f.half_foot, n.offset(), -1.0);
      return FootResult{f.half_length / std::sqrt(2.0), make_pair_point(f.half_foot, b)};
    }
    case SubmanifoldKind::Subtorus: {
      double s = 0.0;
      std::vector<double> c(y.coords);
      for (const auto& [i, v] : n.fixed_coords()) {
        double d = principal_angle(v - y.coords[i]);
        s += d * d;
        c[i] = v;
      }
      return FootResult{std::sqrt(s), Point{y.manifold, std::move(c)}};
    }
    case SubmanifoldKind::AntipodalGraph: {
      Point x = pair_first(y);
      Point w = antipode(pair_second(y));
      bool continuum = false;
      auto feet = pair_feet(x, w, &continuum);
      const PairFoot& f = feet.front();
      return FootResult{f.half_length / std::sqrt(2.0),
                        make_pair_point(f.half_foot, antipode(f.half_foot))};
    }
    case SubmanifoldKind::Custom: {
      Point foot = n.project_(y);
      Point again = n.project_(foot);
      if (riemannian_distance(foot, again) > 1e-9)
        throw ConfigError("custom submanifold projection is not idempotent");
      return FootResult{riemannian_distance(y, foot), foot};
    }
  }
  bad_arg("unreachable submanifold kind");
}

Point project_to_submanifold(const Point& y, const SubmanifoldSpec& n) {
  return distance_to_submanifold(y, n).foot;
}

bool submanifold_contains(const SubmanifoldSpec& n, const Point& y, double tol) {
  return distance_to_submanifold(y, n).distance <= tol;
}

Point sample_submanifold(const SubmanifoldSpec& n, Rng& rng) {
  switch (n.kind()) {
    case SubmanifoldKind::SinglePoint:
      return n.point();
    case SubmanifoldKind::Diagonal: {
      Point a = uniform_sample(pair_half(n.ambient()), rng);
      Point b = n.offset().empty() ? a : torus_shift(a, n.offset(), -1.0);
      return make_pair_point(a, b);
    }
    case SubmanifoldKind::Subtorus: {
      Point p = uniform_sample(n.ambient(), rng);
      std::vector<double> c(p.coords);
      for (const auto& [i, v] : n.fixed_coords()) c[i] = v;
      return Point{n.ambient(), std::move(c)};
    }
    case SubmanifoldKind::AntipodalGraph: {
      Point a = uniform_sample(pair_half(n.ambient()), rng);
      return make_pair_point(a, antipode(a));
    }
    case SubmanifoldKind::Custom:
      if (!n.sample_) bad_arg("custom submanifold has no sampler");
      return n.sample_(rng);
  }
  bad_arg("unreachable submanifold kind");
}

MinimizingGeodesics n_segments(const Point& y, const SubmanifoldSpec& n) {
  if (y.manifold != n.ambient()) bad_arg("query point is off the ambient manifold");
  switch (n.kind()) {
    case SubmanifoldKind::SinglePoint:
      return minimizing_geodesics(n.point(), y);
    case SubmanifoldKind::Diagonal:
    case SubmanifoldKind::AntipodalGraph: {
      bool graph = n.kind() == SubmanifoldKind::AntipodalGraph;
      Point x = pair_first(y);
      Point w = graph ? antipode(pair_second(y)) : pair_second(y);
      if (!graph && !n.offset().empty()) w = torus_shift(pair_second(y), n.offset(), +1.0);
      bool continuum = false;
      auto feet = pair_feet(x, w, &continuum);
      MinimizingGeodesics out;
      out.continuum = continuum;
      const double inv_rt2 = 1.0 / std::sqrt(2.0);
      for (const auto& f : feet) {
        Point second = graph ? antipode(f.half_foot)
                             : (n.offset().empty() ? f.half_foot
                                                   : torus_shift(f.half_foot, n.offset(), -1.0));
        Point foot = make_pair_point(f.half_foot, second);
        if (f.half_length <= kEpsLen) {
          out.segments.push_back(GeodesicSegment{
              foot, TangentVector{foot, std::vector<double>(foot.coords.size(), 0.0)}, 0.0});
          continue;
        }
        // First component runs m -> x (backwards along the geodesic); the
        // second runs m -> y, which on the graph tracks -m -> y.
        std::vector<double> vel;
        vel.reserve(foot.coords.size());
        for (double v : f.mid_velocity.coords) vel.push_back(-inv_rt2 * v);
        for (double v : f.mid_velocity.coords) vel.push_back((graph ? -1.0 : 1.0) * inv_rt2 * v);
        out.segments.push_back(
            GeodesicSegment{foot, TangentVector{foot, std::move(vel)}, f.half_length * inv_rt2});
      }
      return out;
    }
    case SubmanifoldKind::Subtorus: {
      // Ties arise per fixed coordinate at half-turn separation.
      std::vector<std::vector<double>> choices;
      double dist_sq = 0.0;
      for (const auto& [i, v] : n.fixed_coords()) {
        double d = principal_angle(y.coords[i] - v);
        dist_sq += d * d;
        if (std::fabs(std::fabs(d) - kPi) <= kEpsLen)
          choices.push_back({kPi, -kPi});
        else
          choices.push_back({d});
      }
      double dist = std::sqrt(dist_sq);
      MinimizingGeodesics out;
      FootResult fr = distance_to_submanifold(y, n);
      if (dist <= kEpsLen) {
        out.segments.push_back(GeodesicSegment{
            fr.foot, TangentVector{fr.foot, std::vector<double>(y.coords.size(), 0.0)}, 0.0});
        return out;
      }
      std::vector<size_t> idx(choices.size(), 0);
      while (true) {
        std::vector<double> vel(y.coords.size(), 0.0);
        std::vector<double> c(y.coords);
        for (size_t k = 0; k < choices.size(); ++k) {
          int coord = n.fixed_coords()[k].first;
          vel[coord] = choices[k][idx[k]] / dist;
          c[coord] = n.fixed_coords()[k].second;
        }
        Point foot{y.manifold, std::move(c)};
        out.segments.push_back(GeodesicSegment{foot, TangentVector{foot, std::move(vel)}, dist});
        size_t k = 0;
        while (k < choices.size() && ++idx[k] == choices[k].size()) idx[k++] = 0;
        if (k == choices.size()) break;
      }
      return out;
    }
    case SubmanifoldKind::Custom: {
      // Single projected foot; multiplicity through distinct feet is not
      // enumerated for custom descriptors.
      FootResult fr = distance_to_submanifold(y, n);
      MinimizingGeodesics mg = minimizing_geodesics(fr.foot, y);
      MinimizingGeodesics out;
      out.continuum = mg.continuum;
      for (const auto& seg : mg.segments)
        if (std::fabs(seg.length - fr.distance) <= kEpsLen) out.segments.push_back(seg);
      if (out.segments.empty() && !mg.segments.empty()) out.segments.push_back(mg.segments.front());
      return out;
    }
  }
  bad_arg("unreachable submanifold kind");
}

namespace {

SubmanifoldSpec projective_hyperplane(const ManifoldSpec& m, const Point& pole) {
  // {y : y . pole = 0}, the natural copy of RP^{n-1} at maximal distance.
  std::vector<double> axis = pole.coords;
  auto project = [m, axis](const Point& y) {
    std::vector<double> c(y.coords);
    double d = vdot(c, axis);
    for (size_t i = 0; i < c.size(); ++i) c[i] -= d * axis[i];
    double nn = vnorm(c);
    if (nn < 1e-12) {
      // y is the pole itself; pick a deterministic direction in the plane.
      std::fill(c.begin(), c.end(), 0.0);
      size_t k = 0;
      for (size_t i = 1; i < axis.size(); ++i)
        if (std::fabs(axis[i]) < std::fabs(axis[k])) k = i;
      c[k] = 1.0;
      double dd = vdot(c, axis);
      for (size_t i = 0; i < c.size(); ++i) c[i] -= dd * axis[i];
      nn = vnorm(c);
    }
    for (double& v : c) v /= nn;
    return make_point(m, std::move(c));
  };
  auto sample = [m, project](Rng& rng) { return project(uniform_sample(m, rng)); };
  return SubmanifoldSpec::custom(m, "projective_hyperplane", m.dimension() - 1, project, sample);
}

SubmanifoldSpec factor_cylinder(const ManifoldSpec& m, int factor, const SubmanifoldSpec& piece) {
  // {x : x_factor in piece}, all other factors free.
  auto slices = factor_slices(m);
  int off = slices[factor].first;
  int len = slices[factor].second;
  auto project = [m, factor, off, len, piece](const Point& y) {
    Point fp = factor_point(y, factor);
    Point proj = project_to_submanifold(fp, piece);
    std::vector<double> c(y.coords);
    std::copy(proj.coords.begin(), proj.coords.end(), c.begin() + off);
    return Point{m, std::move(c)};
  };
  auto sample = [m, factor, piece](Rng& rng) {
    std::vector<Point> parts;
    for (size_t i = 0; i < m.factors().size(); ++i) {
      if (static_cast<int>(i) == factor)
        parts.push_back(sample_submanifold(piece, rng));
      else
        parts.push_back(uniform_sample(m.factors()[i], rng));
    }
    return combine_factor_points(m, parts);
  };
  int codim = m.factors()[factor].dimension() - piece.dimension();
  return SubmanifoldSpec::custom(m, "cylinder_" + piece.label(), m.dimension() - codim, project,
                                 sample);
}

}  // namespace

CutLocusDescriptor cut_locus_analytic(const ManifoldSpec& m, const SubmanifoldSpec& n) {
  CutLocusDescriptor out{m, {}, true, true};
  if (n.kind() == SubmanifoldKind::SinglePoint) {
    const Point& p = n.point();
    switch (m.kind()) {
      case ManifoldKind::Sphere:
        out.pieces.push_back(SubmanifoldSpec::single_point(antipode(p)));
        return out;
      case ManifoldKind::RealProjective:
        out.pieces.push_back(projective_hyperplane(m, p));
        return out;
      case ManifoldKind::Circle:
      case ManifoldKind::Torus: {
        // One half-turn subtorus per coordinate; for T^2 this is the wedge
        // of two circles through the opposite point.
        for (int i = 0; i < m.ambient_size(); ++i)
          out.pieces.push_back(
              SubmanifoldSpec::subtorus(m, {{i, wrap_angle(p.coords[i] + kPi)}}));
        return out;
      }
      case ManifoldKind::Product: {
        // Cut(p1 x p2) = (Cut p1 x M2) u (M1 x Cut p2), factorwise.
        for (size_t i = 0; i < m.factors().size(); ++i) {
          Point fp = factor_point(p, static_cast<int>(i));
          CutLocusDescriptor sub =
              cut_locus_analytic(m.factors()[i], SubmanifoldSpec::single_point(fp));
          if (!sub.supported) return CutLocusDescriptor{m, {}, false, false};
          for (const auto& piece : sub.pieces)
            out.pieces.push_back(factor_cylinder(m, static_cast<int>(i), piece));
        }
        return out;
      }
      default:
        break;
    }
  }
  if (n.kind() == SubmanifoldKind::Diagonal && n.offset().empty() && is_pair_manifold(m) &&
      pair_half(m).kind() == ManifoldKind::Sphere) {
    out.pieces.push_back(SubmanifoldSpec::antipodal_graph(m));
    return out;
  }
  return CutLocusDescriptor{m, {}, false, false};
}

double distance_to_cut(const Point& y, const CutLocusDescriptor& cut) {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& piece : cut.pieces)
    best = std::min(best, distance_to_submanifold(y, piece).distance);
  return best;
}

std::vector<Point> sample_grid(const ManifoldSpec& m, const GridSpec& grid) {
  std::vector<Point> out;
  switch (m.kind()) {
    case ManifoldKind::Circle:
    case ManifoldKind::Torus: {
      int n = m.ambient_size();
      long total = 1;
      for (int i = 0; i < n; ++i) {
        total *= grid.per_dim;
        if (total > 2'000'000) bad_arg("grid too large for this manifold");
      }
      std::vector<int> idx(n, 0);
      out.reserve(total);
      while (true) {
        std::vector<double> c(n);
        for (int i = 0; i < n; ++i) c[i] = wrap_angle(2.0 * kPi * idx[i] / grid.per_dim);
        out.push_back(Point{m, std::move(c)});
        int k = 0;
        while (k < n && ++idx[k] == grid.per_dim) idx[k++] = 0;
        if (k == n) break;
      }
      return out;
    }
    case ManifoldKind::Sphere: {
      if (m.dimension() == 1) {
        for (int i = 0; i < grid.per_dim; ++i) {
          double a = 2.0 * kPi * i / grid.per_dim;
          out.push_back(make_point(m, {std::cos(a), std::sin(a)}));
        }
        return out;
      }
      if (m.dimension() == 2) {
        // Fibonacci sphere, per_dim^2 points.
        int count = grid.per_dim * grid.per_dim;
        const double golden = kPi * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < count; ++i) {
          double z = 1.0 - 2.0 * (i + 0.5) / count;
          double r = std::sqrt(std::max(0.0, 1.0 - z * z));
          double a = golden * i;
          out.push_back(make_point(m, {r * std::cos(a), r * std::sin(a), z}));
        }
        return out;
      }
      bad_arg("grid sampling implemented for S^1 and S^2 only");
    }
    case ManifoldKind::RealProjective: {
      GridSpec g = grid;
      auto sphere_pts = sample_grid(ManifoldSpec::sphere(m.dimension()), g);
      out.reserve(sphere_pts.size());
      for (auto& p : sphere_pts) out.push_back(make_point(m, p.coords));
      return out;
    }
    default:
      bad_arg("grid sampling is not defined for this manifold kind");
  }
}

std::vector<Point> detect_separation_points(const ManifoldSpec& m, const SubmanifoldSpec& n,
                                            const GridSpec& grid) {
  std::vector<Point> out;
  for (const auto& p : sample_grid(m, grid)) {
    MinimizingGeodesics segs = n_segments(p, n);
    if (segs.continuum || segs.segments.size() >= 2) out.push_back(p);
  }
  return out;
}

double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b) {
  if (a.empty() || b.empty()) return std::numeric_limits<double>::infinity();
  auto one_sided = [](const std::vector<Point>& from, const std::vector<Point>& to) {
    double worst = 0.0;
    for (const auto& p : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : to) best = std::min(best, riemannian_distance(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(one_sided(a, b), one_sided(b, a));
}

}  // namespace navplan
