#include "navplan/cutlocus.hpp"

#include <cmath>

namespace navplan {

bool off_cut(const Point& y, const CutLocusDescriptor& cut, double margin) {
  for (const auto& piece : cut.pieces)
    if (distance_to_submanifold(y, piece).distance <= margin) return false;
  return true;
}

NavigationFunction squared_distance_function(const ManifoldSpec& m, const SubmanifoldSpec& n,
                                             const CutLocusDescriptor& cut, double margin) {
  if (!cut.supported)
    throw ConfigError("squared distance function needs an analytic cut locus descriptor");
  if (n.ambient() != m) throw std::invalid_argument("submanifold ambient mismatch");

  NavigationFunction fn;
  fn.manifold = m;
  fn.kind = NavFunctionKind::SquaredDistanceToSubmanifold;
  fn.domain = [cut, margin](const Point& y) { return off_cut(y, cut, margin); };
  fn.value = [n, cut, margin](const Point& y) {
    if (!off_cut(y, cut, margin))
      throw std::domain_error("squared distance evaluated too close to the cut locus");
    double d = distance_to_submanifold(y, n).distance;
    return d * d;
  };
  fn.gradient = [n, cut, margin](const Point& y) {
    if (!off_cut(y, cut, margin))
      throw std::domain_error("squared distance gradient evaluated too close to the cut locus");
    FootResult fr = distance_to_submanifold(y, n);
    if (fr.distance < 1e-12)
      return TangentVector{y, std::vector<double>(y.coords.size(), 0.0)};
    // grad d^2 = 2 d * (outward unit tangent of the unique N-segment),
    // i.e. minus the direction from y toward its foot point.
    MinimizingGeodesics mg = minimizing_geodesics(y, fr.foot);
    const auto& u = mg.segments.front().initial_velocity.components;
    std::vector<double> g(u.size());
    for (size_t i = 0; i < g.size(); ++i) g[i] = -2.0 * fr.distance * u[i];
    return TangentVector{y, std::move(g)};
  };
  fn.levels = {CriticalLevel{0.0, {CriticalComponent{n, 0}}}};
  return fn;
}

}  // namespace navplan
