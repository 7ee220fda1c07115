#include "navplan/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace navplan {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

std::vector<double> scaled(const std::vector<double>& a, double s) {
  std::vector<double> r(a);
  for (double& v : r) v *= s;
  return r;
}

std::vector<double> slice(const std::vector<double>& a, int off, int len) {
  return std::vector<double>(a.begin() + off, a.begin() + off + len);
}

double clamp1(double v) { return std::max(-1.0, std::min(1.0, v)); }

[[noreturn]] void bad_arg(const std::string& msg) { throw std::invalid_argument(msg); }

void check_same_manifold(const Point& x, const Point& y) {
  if (x.manifold != y.manifold) bad_arg("points live on different manifolds");
}

// Sign-canonical representative: first coordinate with |c| > 1e-12 made positive.
void canonicalize_projective_sign(std::vector<double>& c) {
  for (double v : c) {
    if (std::fabs(v) > 1e-12) {
      if (v < 0.0)
        for (double& w : c) w = -w;
      return;
    }
  }
}

void canonicalize_coords(const ManifoldSpec& m, std::vector<double>& c) {
  switch (m.kind()) {
    case ManifoldKind::Circle:
    case ManifoldKind::Torus:
      for (double& v : c) v = wrap_angle(v);
      return;
    case ManifoldKind::Sphere: {
      double n = norm(c);
      for (double& v : c) v /= n;
      return;
    }
    case ManifoldKind::RealProjective: {
      double n = norm(c);
      for (double& v : c) v /= n;
      canonicalize_projective_sign(c);
      return;
    }
    case ManifoldKind::Euclidean:
      return;
    case ManifoldKind::Product: {
      int off = 0;
      for (const auto& f : m.factors()) {
        std::vector<double> part = slice(c, off, f.ambient_size());
        canonicalize_coords(f, part);
        std::copy(part.begin(), part.end(), c.begin() + off);
        off += f.ambient_size();
      }
      return;
    }
  }
}

void validate_on_manifold(const ManifoldSpec& m, const std::vector<double>& c) {
  switch (m.kind()) {
    case ManifoldKind::Circle:
    case ManifoldKind::Torus:
    case ManifoldKind::Euclidean:
      return;
    case ManifoldKind::Sphere:
    case ManifoldKind::RealProjective: {
      if (std::fabs(norm(c) - 1.0) > kTolOn) bad_arg("point is off the unit sphere constraint");
      return;
    }
    case ManifoldKind::Product: {
      int off = 0;
      for (const auto& f : m.factors()) {
        validate_on_manifold(f, slice(c, off, f.ambient_size()));
        off += f.ambient_size();
      }
      return;
    }
  }
}

}  // namespace

ManifoldSpec ManifoldSpec::circle() { return ManifoldSpec(ManifoldKind::Circle, 1, 1); }

ManifoldSpec ManifoldSpec::sphere(int n) {
  if (n < 1) bad_arg("sphere dimension must be >= 1");
  return ManifoldSpec(ManifoldKind::Sphere, n, n + 1);
}

ManifoldSpec ManifoldSpec::torus(int n) {
  if (n < 1) bad_arg("torus dimension must be >= 1");
  if (n == 1) return circle();
  return ManifoldSpec(ManifoldKind::Torus, n, n);
}

ManifoldSpec ManifoldSpec::real_projective(int n) {
  if (n < 1) bad_arg("projective dimension must be >= 1");
  return ManifoldSpec(ManifoldKind::RealProjective, n, n + 1);
}

ManifoldSpec ManifoldSpec::product(std::vector<ManifoldSpec> factors) {
  if (factors.size() < 2) bad_arg("product needs at least two factors");
  int dim = 0, amb = 0;
  for (const auto& f : factors) {
    dim += f.dimension();
    amb += f.ambient_size();
  }
  ManifoldSpec m(ManifoldKind::Product, dim, amb);
  *m.factors_ = std::move(factors);
  return m;
}

ManifoldSpec ManifoldSpec::euclidean(int n) {
  if (n < 1) bad_arg("euclidean dimension must be >= 1");
  return ManifoldSpec(ManifoldKind::Euclidean, n, n);
}

std::string ManifoldSpec::to_string() const {
  std::ostringstream os;
  switch (kind_) {
    case ManifoldKind::Circle: os << "S^1"; break;
    case ManifoldKind::Sphere: os << "S^" << dim_; break;
    case ManifoldKind::Torus: os << "T^" << dim_; break;
    case ManifoldKind::RealProjective: os << "RP^" << dim_; break;
    case ManifoldKind::Euclidean: os << "R^" << dim_; break;
    case ManifoldKind::Product: {
      os << "(";
      for (size_t i = 0; i < factors_->size(); ++i) {
        if (i) os << " x ";
        os << (*factors_)[i].to_string();
      }
      os << ")";
      break;
    }
  }
  return os.str();
}

bool operator==(const ManifoldSpec& a, const ManifoldSpec& b) {
  auto normalized = [](ManifoldKind k) {
    return k == ManifoldKind::Circle ? ManifoldKind::Torus : k;
  };
  if (normalized(a.kind_) != normalized(b.kind_)) return false;
  if (a.dim_ != b.dim_ || a.ambient_ != b.ambient_) return false;
  if (a.kind_ == ManifoldKind::Product) {
    if (a.factors_->size() != b.factors_->size()) return false;
    for (size_t i = 0; i < a.factors_->size(); ++i)
      if ((*a.factors_)[i] != (*b.factors_)[i]) return false;
  }
  return true;
}

double wrap_angle(double a) {
  double m = std::fmod(a, 2.0 * kPi);
  if (m < 0.0) m += 2.0 * kPi;
  if (m >= 2.0 * kPi) m = 0.0;
  return m;
}

double principal_angle(double a) {
  double r = std::remainder(a, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

Point make_point(const ManifoldSpec& m, std::vector<double> coords) {
  if (static_cast<int>(coords.size()) != m.ambient_size())
    bad_arg("coordinate count does not match the manifold");
  validate_on_manifold(m, coords);
  canonicalize_coords(m, coords);
  return Point{m, std::move(coords)};
}

TangentVector make_tangent(const Point& base, std::vector<double> components) {
  if (components.size() != base.coords.size())
    bad_arg("tangent component count does not match the base point");
  // Enforce tangency for embedded kinds, then project exactly.
  const ManifoldSpec& m = base.manifold;
  if (m.kind() == ManifoldKind::Sphere || m.kind() == ManifoldKind::RealProjective) {
    double d = dot(base.coords, components);
    if (std::fabs(d) > kTolOn * std::max(1.0, norm(components)))
      bad_arg("tangent vector is not orthogonal to the base representative");
    for (size_t i = 0; i < components.size(); ++i) components[i] -= d * base.coords[i];
  } else if (m.kind() == ManifoldKind::Product) {
    int off = 0;
    for (const auto& f : m.factors()) {
      Point fb{f, slice(base.coords, off, f.ambient_size())};
      TangentVector ft = make_tangent(fb, slice(components, off, f.ambient_size()));
      std::copy(ft.components.begin(), ft.components.end(), components.begin() + off);
      off += f.ambient_size();
    }
  }
  return TangentVector{base, std::move(components)};
}

Path make_path(const ManifoldSpec& m, std::vector<PathSample> samples) {
  if (samples.size() < 2) bad_arg("a path needs at least two samples");
  if (std::fabs(samples.front().t) > 1e-12 || std::fabs(samples.back().t - 1.0) > 1e-12)
    bad_arg("path times must span [0, 1]");
  samples.front().t = 0.0;
  samples.back().t = 1.0;
  for (size_t i = 0; i + 1 < samples.size(); ++i)
    if (samples[i + 1].t <= samples[i].t) bad_arg("path times must be strictly increasing");
  for (const auto& s : samples)
    if (s.point.manifold != m) bad_arg("path sample on the wrong manifold");
  return Path{m, std::move(samples)};
}

Path constant_path(const Point& p) {
  return Path{p.manifold, {{0.0, p}, {1.0, p}}};
}

Path path_through_points(const ManifoldSpec& m, const std::vector<Point>& pts) {
  if (pts.size() < 2) bad_arg("need at least two points");
  std::vector<PathSample> samples;
  samples.reserve(pts.size());
  for (size_t i = 0; i < pts.size(); ++i)
    samples.push_back({static_cast<double>(i) / (pts.size() - 1), pts[i]});
  return make_path(m, std::move(samples));
}

Point exp_map(const Point& x, const TangentVector& v, double t) {
  if (v.base.manifold != x.manifold || v.base.coords != x.coords)
    bad_arg("tangent vector is not based at the given point");
  if (t < 0.0) bad_arg("exp_map expects t >= 0");
  const ManifoldSpec& m = x.manifold;
  switch (m.kind()) {
    case ManifoldKind::Circle:
    case ManifoldKind::Torus: {
      std::vector<double> c(x.coords);
      for (size_t i = 0; i < c.size(); ++i) c[i] = wrap_angle(c[i] + t * v.components[i]);
      return Point{m, std::move(c)};
    }
    case ManifoldKind::Euclidean: {
      std::vector<double> c(x.coords);
      for (size_t i = 0; i < c.size(); ++i) c[i] += t * v.components[i];
      return Point{m, std::move(c)};
    }
    case ManifoldKind::Sphere:
    case ManifoldKind::RealProjective: {
      double s = norm(v.components);
      if (s * t < 1e-300) return x;
      double a = s * t;
      std::vector<double> c(x.coords.size());
      for (size_t i = 0; i < c.size(); ++i)
        c[i] = std::cos(a) * x.coords[i] + std::sin(a) * v.components[i] / s;
      canonicalize_coords(m, c);
      return Point{m, std::move(c)};
    }
    case ManifoldKind::Product: {
      std::vector<Point> parts;
      auto slices = factor_slices(m);
      for (size_t i = 0; i < m.factors().size(); ++i) {
        Point fx = factor_point(x, static_cast<int>(i));
        TangentVector fv{fx, slice(v.components, slices[i].first, slices[i].second)};
        parts.push_back(exp_map(fx, fv, t));
      }
      return combine_factor_points(m, parts);
    }
  }
  bad_arg("unreachable manifold kind");
}

double riemannian_distance(const Point& x, const Point& y) {
  check_same_manifold(x, y);
  const ManifoldSpec& m = x.manifold;
  switch (m.kind()) {
    case ManifoldKind::Circle:
    case ManifoldKind::Torus: {
      double s = 0.0;
      for (size_t i = 0; i < x.coords.size(); ++i) {
        double d = principal_angle(y.coords[i] - x.coords[i]);
        s += d * d;
      }
      return std::sqrt(s);
    }
    case ManifoldKind::Euclidean: {
      double s = 0.0;
      for (size_t i = 0; i < x.coords.size(); ++i) {
        double d = y.coords[i] - x.coords[i];
        s += d * d;
      }
      return std::sqrt(s);
    }
    case ManifoldKind::Sphere:
      return std::acos(clamp1(dot(x.coords, y.coords)));
    case ManifoldKind::RealProjective:
      return std::acos(clamp1(std::fabs(dot(x.coords, y.coords))));
    case ManifoldKind::Product: {
      double s = 0.0;
      for (size_t i = 0; i < m.factors().size(); ++i) {
        double d = riemannian_distance(factor_point(x, static_cast<int>(i)),
                                       factor_point(y, static_cast<int>(i)));
        s += d * d;
      }
      return std::sqrt(s);
    }
  }
  bad_arg("unreachable manifold kind");
}

namespace {

GeodesicSegment zero_segment(const Point& x) {
  return GeodesicSegment{x, TangentVector{x, std::vector<double>(x.coords.size(), 0.0)}, 0.0};
}

GeodesicSegment sphere_segment(const Point& x, const std::vector<double>& u, double len) {
  return GeodesicSegment{x, TangentVector{x, u}, len};
}

// Orthonormal tangent frame used for sampling the antipodal continuum.
std::vector<std::vector<double>> sphere_tangent_frame(const std::vector<double>& x) {
  size_t n = x.size();
  std::vector<std::vector<double>> basis;
  for (size_t axis = 0; axis < n && basis.size() + 1 < n; ++axis) {
    std::vector<double> v(n, 0.0);
    v[axis] = 1.0;
    double d = dot(v, x);
    for (size_t i = 0; i < n; ++i) v[i] -= d * x[i];
    for (const auto& b : basis) {
      double db = dot(v, b);
      for (size_t i = 0; i < n; ++i) v[i] -= db * b[i];
    }
    double nv = norm(v);
    if (nv > 0.5) {
      for (double& w : v) w /= nv;
      basis.push_back(std::move(v));
    }
  }
  return basis;
}

bool same_direction(const GeodesicSegment& a, const GeodesicSegment& b) {
  if (std::fabs(a.length - b.length) > kEpsLen) return false;
  if (a.length <= kEpsLen) return true;
  double c = clamp1(dot(a.initial_velocity.components, b.initial_velocity.components));
  return std::acos(c) <= kThetaMin;
}

void push_deduped(std::vector<GeodesicSegment>& out, GeodesicSegment seg) {
  for (const auto& s : out)
    if (same_direction(s, seg)) return;
  out.push_back(std::move(seg));
}

MinimizingGeodesics torus_minimizers(const Point& x, const Point& y) {
  // Flat metric: minimize per coordinate over lattice translates; a
  // coordinate at exactly half-turn separation contributes both directions.
  size_t n = x.coords.size();
  std::vector<std::vector<double>> choices(n);
  for (size_t i = 0; i < n; ++i) {
    double d = principal_angle(y.coords[i] - x.coords[i]);
    if (std::fabs(std::fabs(d) - kPi) <= kEpsLen) {
      choices[i] = {kPi, -kPi};
    } else {
      choices[i] = {d};
    }
  }
  MinimizingGeodesics out;
  std::vector<size_t> idx(n, 0);
  while (true) {
    std::vector<double> delta(n);
    for (size_t i = 0; i < n; ++i) delta[i] = choices[i][idx[i]];
    double len = norm(delta);
    if (len <= kEpsLen) {
      out.segments = {zero_segment(x)};
      return out;
    }
    push_deduped(out.segments, GeodesicSegment{x, TangentVector{x, scaled(delta, 1.0 / len)}, len});
    size_t k = 0;
    while (k < n && ++idx[k] == choices[k].size()) idx[k++] = 0;
    if (k == n) break;
  }
  return out;
}

MinimizingGeodesics sphere_minimizers(const Point& x, const Point& y) {
  double c = clamp1(dot(x.coords, y.coords));
  MinimizingGeodesics out;
  if (1.0 - c <= 1e-12) {
    out.segments = {zero_segment(x)};
    return out;
  }
  if (1.0 + c <= 1e-12) {
    auto frame = sphere_tangent_frame(x.coords);
    if (frame.size() == 1) {
      // S^1 embedded: exactly two half-circles.
      out.segments.push_back(sphere_segment(x, frame[0], kPi));
      out.segments.push_back(sphere_segment(x, scaled(frame[0], -1.0), kPi));
      return out;
    }
    out.continuum = true;
    for (int j = 0; j < kContinuumSamples; ++j) {
      double a = 2.0 * kPi * j / kContinuumSamples;
      std::vector<double> u(x.coords.size(), 0.0);
      for (size_t i = 0; i < u.size(); ++i)
        u[i] = std::cos(a) * frame[0][i] + std::sin(a) * frame[1][i];
      out.segments.push_back(sphere_segment(x, u, kPi));
    }
    return out;
  }
  double len = std::acos(c);
  std::vector<double> u(x.coords.size());
  for (size_t i = 0; i < u.size(); ++i) u[i] = y.coords[i] - c * x.coords[i];
  double nu = norm(u);
  for (double& w : u) w /= nu;
  out.segments = {sphere_segment(x, u, len)};
  return out;
}

MinimizingGeodesics projective_minimizers(const Point& x, const Point& y) {
  // Lift both sign representatives to the sphere; keep length minimizers.
  double c = clamp1(dot(x.coords, y.coords));
  MinimizingGeodesics out;
  if (std::fabs(c) >= 1.0 - 1e-12) {
    out.segments = {zero_segment(x)};
    return out;
  }
  double a_pos = std::acos(c);         // toward +y
  double a_neg = kPi - a_pos;          // toward -y
  double d = std::min(a_pos, a_neg);
  auto dir_toward = [&](double sign) {
    std::vector<double> target = scaled(y.coords, sign);
    double ct = clamp1(dot(x.coords, target));
    std::vector<double> u(x.coords.size());
    for (size_t i = 0; i < u.size(); ++i) u[i] = target[i] - ct * x.coords[i];
    double nu = norm(u);
    for (double& w : u) w /= nu;
    return u;
  };
  if (a_pos <= d + kEpsLen) push_deduped(out.segments, sphere_segment(x, dir_toward(1.0), a_pos));
  if (a_neg <= d + kEpsLen) push_deduped(out.segments, sphere_segment(x, dir_toward(-1.0), a_neg));
  return out;
}

MinimizingGeodesics euclidean_minimizers(const Point& x, const Point& y) {
  std::vector<double> d(x.coords.size());
  for (size_t i = 0; i < d.size(); ++i) d[i] = y.coords[i] - x.coords[i];
  double len = norm(d);
  MinimizingGeodesics out;
  if (len <= kEpsLen) {
    out.segments = {zero_segment(x)};
    return out;
  }
  out.segments = {GeodesicSegment{x, TangentVector{x, scaled(d, 1.0 / len)}, len}};
  return out;
}

MinimizingGeodesics product_minimizers(const Point& x, const Point& y) {
  const ManifoldSpec& m = x.manifold;
  size_t nf = m.factors().size();
  std::vector<MinimizingGeodesics> per(nf);
  bool continuum = false;
  for (size_t i = 0; i < nf; ++i) {
    per[i] = minimizing_geodesics(factor_point(x, static_cast<int>(i)),
                                  factor_point(y, static_cast<int>(i)));
    continuum = continuum || per[i].continuum;
  }
  double total_sq = 0.0;
  for (const auto& p : per) total_sq += p.segments[0].length * p.segments[0].length;
  double total = std::sqrt(total_sq);
  MinimizingGeodesics out;
  out.continuum = continuum;
  if (total <= kEpsLen) {
    out.segments = {zero_segment(x)};
    return out;
  }
  std::vector<size_t> idx(nf, 0);
  const size_t combo_cap = 256;
  while (true) {
    std::vector<double> vel(x.coords.size(), 0.0);
    auto slices = factor_slices(m);
    for (size_t i = 0; i < nf; ++i) {
      const GeodesicSegment& seg = per[i].segments[idx[i]];
      double w = seg.length / total;
      for (int k = 0; k < slices[i].second; ++k)
        vel[slices[i].first + k] = w * seg.initial_velocity.components[k];
    }
    push_deduped(out.segments, GeodesicSegment{x, TangentVector{x, std::move(vel)}, total});
    if (out.segments.size() >= combo_cap) break;
    size_t k = 0;
    while (k < nf && ++idx[k] == per[k].segments.size()) idx[k++] = 0;
    if (k == nf) break;
  }
  if (out.continuum && out.segments.size() > static_cast<size_t>(kContinuumSamples))
    out.segments.resize(kContinuumSamples);
  return out;
}

}  // namespace

MinimizingGeodesics minimizing_geodesics(const Point& x, const Point& y) {
  check_same_manifold(x, y);
  switch (x.manifold.kind()) {
    case ManifoldKind::Circle:
    case ManifoldKind::Torus:
      return torus_minimizers(x, y);
    case ManifoldKind::Sphere:
      return sphere_minimizers(x, y);
    case ManifoldKind::RealProjective:
      return projective_minimizers(x, y);
    case ManifoldKind::Euclidean:
      return euclidean_minimizers(x, y);
    case ManifoldKind::Product:
      return product_minimizers(x, y);
  }
  bad_arg("unreachable manifold kind");
}

Path concatenate_paths(const Path& a, const Path& b) {
  if (a.manifold != b.manifold) bad_arg("concatenation across different manifolds");
  const Point& joint = a.samples.back().point;
  if (riemannian_distance(joint, b.samples.front().point) > kTolJoin)
    bad_arg("path endpoints do not meet within the join tolerance");
  std::vector<PathSample> samples;
  samples.reserve(a.samples.size() + b.samples.size() - 1);
  for (const auto& s : a.samples) samples.push_back({0.5 * s.t, s.point});
  // Joint snapped to a(1); b's first sample is dropped.
  for (size_t i = 1; i < b.samples.size(); ++i)
    samples.push_back({0.5 + 0.5 * b.samples[i].t, b.samples[i].point});
  return make_path(a.manifold, std::move(samples));
}

Path reverse_path(const Path& a) {
  std::vector<PathSample> samples;
  samples.reserve(a.samples.size());
  for (auto it = a.samples.rbegin(); it != a.samples.rend(); ++it)
    samples.push_back({1.0 - it->t, it->point});
  return make_path(a.manifold, std::move(samples));
}

double path_length(const Path& p) {
  double s = 0.0;
  for (size_t i = 0; i + 1 < p.samples.size(); ++i)
    s += riemannian_distance(p.samples[i].point, p.samples[i + 1].point);
  return s;
}

Point path_eval(const Path& p, double t) {
  t = std::max(0.0, std::min(1.0, t));
  const auto& s = p.samples;
  size_t hi = 1;
  while (hi + 1 < s.size() && s[hi].t < t) ++hi;
  const PathSample& a = s[hi - 1];
  const PathSample& b = s[hi];
  if (t <= a.t) return a.point;
  if (t >= b.t) return b.point;
  double w = (t - a.t) / (b.t - a.t);
  MinimizingGeodesics mg = minimizing_geodesics(a.point, b.point);
  const GeodesicSegment& seg = mg.segments.front();
  if (seg.length <= 0.0) return a.point;
  return exp_map(a.point, seg.initial_velocity, w * seg.length);
}

Path resample_path(const Path& p, int samples) {
  if (samples < 2) bad_arg("need at least two samples");
  std::vector<PathSample> out;
  out.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    double t = static_cast<double>(i) / (samples - 1);
    out.push_back({t, path_eval(p, t)});
  }
  return make_path(p.manifold, std::move(out));
}

Path geodesic_path(const GeodesicSegment& seg, int samples) {
  if (samples < 2) bad_arg("need at least two samples");
  std::vector<PathSample> out;
  out.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    double t = static_cast<double>(i) / (samples - 1);
    out.push_back({t, exp_map(seg.start, seg.initial_velocity, t * seg.length)});
  }
  return make_path(seg.start.manifold, std::move(out));
}

double sup_path_distance(const Path& a, const Path& b, int grid) {
  double worst = 0.0;
  for (int i = 0; i < grid; ++i) {
    double t = static_cast<double>(i) / (grid - 1);
    worst = std::max(worst, riemannian_distance(path_eval(a, t), path_eval(b, t)));
  }
  return worst;
}

std::vector<TangentVector> tangent_basis(const Point& x) {
  const ManifoldSpec& m = x.manifold;
  std::vector<TangentVector> basis;
  switch (m.kind()) {
    case ManifoldKind::Circle:
    case ManifoldKind::Torus:
    case ManifoldKind::Euclidean: {
      for (int i = 0; i < m.ambient_size(); ++i) {
        std::vector<double> v(m.ambient_size(), 0.0);
        v[i] = 1.0;
        basis.push_back(TangentVector{x, std::move(v)});
      }
      return basis;
    }
    case ManifoldKind::Sphere:
    case ManifoldKind::RealProjective: {
      for (auto& v : sphere_tangent_frame(x.coords)) basis.push_back(TangentVector{x, std::move(v)});
      return basis;
    }
    case ManifoldKind::Product: {
      auto slices = factor_slices(m);
      for (size_t i = 0; i < m.factors().size(); ++i) {
        Point fx = factor_point(x, static_cast<int>(i));
        for (const auto& fb : tangent_basis(fx)) {
          std::vector<double> v(m.ambient_size(), 0.0);
          std::copy(fb.components.begin(), fb.components.end(), v.begin() + slices[i].first);
          basis.push_back(TangentVector{x, std::move(v)});
        }
      }
      return basis;
    }
  }
  bad_arg("unreachable manifold kind");
}

Point uniform_sample(const ManifoldSpec& m, Rng& rng) {
  switch (m.kind()) {
    case ManifoldKind::Circle:
    case ManifoldKind::Torus: {
      std::vector<double> c(m.ambient_size());
      for (double& v : c) v = rng.uniform(0.0, 2.0 * kPi);
      return Point{m, std::move(c)};
    }
    case ManifoldKind::Sphere:
    case ManifoldKind::RealProjective: {
      std::vector<double> c(m.ambient_size());
      double n = 0.0;
      while (n < 1e-6) {
        for (double& v : c) v = rng.normal();
        n = norm(c);
      }
      for (double& v : c) v /= n;
      if (m.kind() == ManifoldKind::RealProjective) canonicalize_projective_sign(c);
      return Point{m, std::move(c)};
    }
    case ManifoldKind::Product: {
      std::vector<Point> parts;
      for (const auto& f : m.factors()) parts.push_back(uniform_sample(f, rng));
      return combine_factor_points(m, parts);
    }
    case ManifoldKind::Euclidean:
      bad_arg("no canonical uniform distribution on a euclidean factor");
  }
  bad_arg("unreachable manifold kind");
}

TangentVector random_unit_tangent(const Point& x, Rng& rng) {
  auto basis = tangent_basis(x);
  std::vector<double> v(x.coords.size(), 0.0);
  double n = 0.0;
  while (n < 1e-8) {
    std::fill(v.begin(), v.end(), 0.0);
    for (const auto& b : basis) {
      double g = rng.normal();
      for (size_t i = 0; i < v.size(); ++i) v[i] += g * b.components[i];
    }
    n = norm(v);
  }
  for (double& w : v) w /= n;
  return TangentVector{x, std::move(v)};
}

bool is_pair_manifold(const ManifoldSpec& m) {
  if (m.is_angular()) return m.dimension() % 2 == 0 && m.dimension() >= 2;
  if (m.kind() == ManifoldKind::Product)
    return m.factors().size() == 2 && m.factors()[0] == m.factors()[1];
  return false;
}

ManifoldSpec pair_half(const ManifoldSpec& m) {
  if (!is_pair_manifold(m)) bad_arg("manifold is not a pair M x M");
  if (m.is_angular()) return ManifoldSpec::torus(m.dimension() / 2);
  return m.factors()[0];
}

Point pair_first(const Point& p) {
  ManifoldSpec half = pair_half(p.manifold);
  return Point{half, slice(p.coords, 0, half.ambient_size())};
}

Point pair_second(const Point& p) {
  ManifoldSpec half = pair_half(p.manifold);
  return Point{half, slice(p.coords, half.ambient_size(), half.ambient_size())};
}

Point make_pair_point(const Point& a, const Point& b) {
  if (a.manifold != b.manifold) bad_arg("pair components on different manifolds");
  std::vector<double> c(a.coords);
  c.insert(c.end(), b.coords.begin(), b.coords.end());
  if (a.manifold.is_angular()) return Point{ManifoldSpec::torus(2 * a.manifold.dimension()), std::move(c)};
  return Point{ManifoldSpec::product({a.manifold, a.manifold}), std::move(c)};
}

std::vector<std::pair<int, int>> factor_slices(const ManifoldSpec& m) {
  if (m.kind() != ManifoldKind::Product) bad_arg("factor_slices expects a product manifold");
  std::vector<std::pair<int, int>> out;
  int off = 0;
  for (const auto& f : m.factors()) {
    out.push_back({off, f.ambient_size()});
    off += f.ambient_size();
  }
  return out;
}

Point factor_point(const Point& p, int factor) {
  auto slices = factor_slices(p.manifold);
  const ManifoldSpec& f = p.manifold.factors()[factor];
  return Point{f, slice(p.coords, slices[factor].first, slices[factor].second)};
}

Point combine_factor_points(const ManifoldSpec& m, const std::vector<Point>& parts) {
  std::vector<double> c;
  c.reserve(m.ambient_size());
  for (const auto& p : parts) c.insert(c.end(), p.coords.begin(), p.coords.end());
  return Point{m, std::move(c)};
}

Point antipode(const Point& p) {
  if (p.manifold.kind() != ManifoldKind::Sphere) bad_arg("antipode is defined on spheres");
  return Point{p.manifold, scaled(p.coords, -1.0)};
}

}  // namespace navplan
