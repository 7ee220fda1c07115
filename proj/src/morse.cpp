#include "navplan/morse.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace navplan {

namespace {

double vnorm(const std::vector<double>& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

// Integration state lives in raw chart coordinates: angles unwrapped only by
// the retraction, sphere representatives normalized but never sign-flipped.
// Evaluating through the canonical point would make the projective sign
// choice discontinuous along a trajectory.
void retract_in_place(const ManifoldSpec& m, std::vector<double>& raw, int offset) {
  switch (m.kind()) {
    case ManifoldKind::Circle:
    case ManifoldKind::Torus:
      for (int i = 0; i < m.ambient_size(); ++i) raw[offset + i] = wrap_angle(raw[offset + i]);
      return;
    case ManifoldKind::Sphere:
    case ManifoldKind::RealProjective: {
      double s = 0.0;
      for (int i = 0; i < m.ambient_size(); ++i) s += raw[offset + i] * raw[offset + i];
      s = std::sqrt(s);
      for (int i = 0; i < m.ambient_size(); ++i) raw[offset + i] /= s;
      return;
    }
    case ManifoldKind::Euclidean:
      return;
    case ManifoldKind::Product: {
      int off = offset;
      for (const auto& f : m.factors()) {
        retract_in_place(f, raw, off);
        off += f.ambient_size();
      }
      return;
    }
  }
}

std::vector<double> retracted(const ManifoldSpec& m, const std::vector<double>& raw,
                              const std::vector<double>& delta, double scale) {
  std::vector<double> out(raw);
  for (size_t i = 0; i < out.size(); ++i) out[i] += scale * delta[i];
  retract_in_place(m, out, 0);
  return out;
}

void mark_projective_signs(const ManifoldSpec& m, const std::vector<double>& raw,
                           const std::vector<double>& canonical, std::vector<double>& signs,
                           int offset) {
  switch (m.kind()) {
    case ManifoldKind::RealProjective: {
      double d = 0.0;
      for (int i = 0; i < m.ambient_size(); ++i) d += raw[offset + i] * canonical[offset + i];
      if (d < 0.0)
        for (int i = 0; i < m.ambient_size(); ++i) signs[offset + i] = -1.0;
      return;
    }
    case ManifoldKind::Product: {
      int off = offset;
      for (const auto& f : m.factors()) {
        mark_projective_signs(f, raw, canonical, signs, off);
        off += f.ambient_size();
      }
      return;
    }
    default:
      return;
  }
}

struct ChartEval {
  Point canonical;
  double value = 0.0;
  std::vector<double> neg_grad;  // -grad in the raw chart
  double grad_norm = 0.0;
};

ChartEval evaluate_chart(const NavigationFunction& fn, const std::vector<double>& raw) {
  ChartEval e{make_point(fn.manifold, raw)};
  std::vector<double> signs(raw.size(), 1.0);
  mark_projective_signs(fn.manifold, raw, e.canonical.coords, signs, 0);
  e.value = fn.value(e.canonical);
  TangentVector g = fn.gradient(e.canonical);
  e.grad_norm = vnorm(g.components);
  e.neg_grad.resize(raw.size());
  for (size_t i = 0; i < raw.size(); ++i) e.neg_grad[i] = -signs[i] * g.components[i];
  return e;
}

struct SnapResult {
  double distance = std::numeric_limits<double>::infinity();
  Point foot;
  int level = -1;
  int component = -1;
};

SnapResult snap_to_components(const NavigationFunction& fn, const Point& p) {
  SnapResult best;
  for (size_t i = 0; i < fn.levels.size(); ++i) {
    for (size_t j = 0; j < fn.levels[i].components.size(); ++j) {
      FootResult fr = distance_to_submanifold(p, fn.levels[i].components[j].set);
      if (fr.distance < best.distance) {
        best = SnapResult{fr.distance, fr.foot, static_cast<int>(i), static_cast<int>(j)};
      }
    }
  }
  return best;
}

}  // namespace

FlowResult negative_gradient_flow(const NavigationFunction& fn, const Point& start,
                                  const FlowSettings& settings) {
  if (start.manifold != fn.manifold)
    throw std::invalid_argument("flow start is off the navigation function's manifold");
  if (fn.domain && !fn.domain(start))
    throw std::domain_error("flow start is outside the navigation function's domain");

  FlowResult r;
  // Starts on (or within unstable_tol of) a positive-index component would
  // take numerically unbounded time; resolve them by declaration.
  for (size_t i = 0; i < fn.levels.size(); ++i) {
    for (size_t j = 0; j < fn.levels[i].components.size(); ++j) {
      if (fn.levels[i].components[j].index <= 0) continue;
      FootResult fr = distance_to_submanifold(start, fn.levels[i].components[j].set);
      if (fr.distance < settings.unstable_tol) {
        double gn = vnorm(fn.gradient(start).components);
        r.trajectory = constant_path(start);
        r.flow_times = {0.0, 0.0};
        r.grad_norms = {gn, gn};
        r.limit_point = fr.foot;
        r.level_index = static_cast<int>(i);
        r.component_index = static_cast<int>(j);
        r.converged = true;
        r.ambiguous = true;
        return r;
      }
    }
  }

  std::vector<double> raw = start.coords;
  ChartEval cur = evaluate_chart(fn, raw);
  std::vector<Point> points{cur.canonical};
  std::vector<double> times{0.0};
  std::vector<double> gnorms{cur.grad_norm};

  double t = 0.0;
  double h = settings.initial_step;
  long steps = 0;
  while (cur.grad_norm >= settings.grad_tol && steps < settings.max_steps && h >= 1e-12) {
    bool accepted = false;
    try {
      ChartEval e2 = evaluate_chart(fn, retracted(fn.manifold, raw, cur.neg_grad, 0.5 * h));
      ChartEval e3 = evaluate_chart(fn, retracted(fn.manifold, raw, e2.neg_grad, 0.5 * h));
      ChartEval e4 = evaluate_chart(fn, retracted(fn.manifold, raw, e3.neg_grad, h));
      std::vector<double> combined(raw.size());
      for (size_t i = 0; i < raw.size(); ++i)
        combined[i] = cur.neg_grad[i] + 2.0 * e2.neg_grad[i] + 2.0 * e3.neg_grad[i] +
                      e4.neg_grad[i];
      std::vector<double> next = retracted(fn.manifold, raw, combined, h / 6.0);
      ChartEval en = evaluate_chart(fn, next);
      if (en.value <= cur.value + 1e-13 * (1.0 + std::fabs(cur.value))) {
        raw = std::move(next);
        cur = std::move(en);
        t += h;
        h = std::min(h * 1.25, settings.max_step);
        accepted = true;
      }
    } catch (const std::domain_error&) {
      // Treat leaving the domain like a rejected step.
    }
    if (!accepted) {
      h *= 0.5;
      continue;
    }
    ++steps;
    points.push_back(cur.canonical);
    times.push_back(t);
    gnorms.push_back(cur.grad_norm);
  }

  r.steps = steps;
  if (points.size() < 2) {
    r.trajectory = constant_path(points.front());
    r.flow_times = {0.0, 0.0};
    r.grad_norms = {gnorms.front(), gnorms.front()};
  } else {
    std::vector<PathSample> samples;
    samples.reserve(points.size());
    for (size_t k = 0; k < points.size(); ++k) samples.push_back({times[k] / t, points[k]});
    r.trajectory = make_path(fn.manifold, std::move(samples));
    r.flow_times = std::move(times);
    r.grad_norms = std::move(gnorms);
  }

  bool grad_ok = cur.grad_norm < settings.grad_tol;
  SnapResult snap = snap_to_components(fn, cur.canonical);
  if (grad_ok && snap.distance <= settings.snap_tol) {
    r.limit_point = snap.foot;
    r.level_index = snap.level;
    r.component_index = snap.component;
    r.converged = true;
    r.ambiguous = fn.levels[snap.level].components[snap.component].index > 0;
  } else {
    r.limit_point = cur.canonical;
    r.converged = false;
  }
  return r;
}

std::pair<int, int> basin_assignment(const NavigationFunction& fn, const Point& start,
                                     const FlowSettings& settings) {
  FlowResult r = negative_gradient_flow(fn, start, settings);
  if (!r.converged) throw std::runtime_error("negative gradient flow did not converge");
  return {r.level_index, r.component_index};
}

Path arc_length_reparametrize(const FlowResult& flow, const NavigationFunction& fn) {
  if (!flow.converged) throw std::invalid_argument("cannot reparametrize a non-converged flow");
  const auto& traj = flow.trajectory.samples;
  size_t n = traj.size();
  std::vector<double> s(n, 0.0);
  for (size_t k = 0; k + 1 < n; ++k) {
    double dt = flow.flow_times[k + 1] - flow.flow_times[k];
    s[k + 1] = s[k] + dt * 0.5 * (flow.grad_norms[k] + flow.grad_norms[k + 1]);
  }
  double snap_len = riemannian_distance(traj.back().point, flow.limit_point);
  double total = s.back() + snap_len;
  if (total < 1e-12) return constant_path(flow.limit_point);

  std::vector<PathSample> out;
  double prev = -1.0;
  for (size_t k = 0; k < n; ++k) {
    double tk = s[k] / total;
    if (tk > prev + 1e-15 && tk < 1.0 - 1e-15) {
      out.push_back({tk, traj[k].point});
      prev = tk;
    }
  }
  out.push_back({1.0, flow.limit_point});
  if (out.size() < 2 || out.front().t != 0.0)
    out.insert(out.begin(), {0.0, traj.front().point});
  return make_path(fn.manifold, std::move(out));
}

NavigationFunction make_torus_cosine(int n, std::vector<double> shift) {
  if (n < 1) throw std::invalid_argument("torus cosine needs n >= 1");
  if (shift.empty()) shift.assign(n, 0.0);
  if (static_cast<int>(shift.size()) != n)
    throw std::invalid_argument("shift size does not match the torus dimension");
  for (double& v : shift) v = wrap_angle(v);

  NavigationFunction fn;
  fn.manifold = ManifoldSpec::torus(2 * n);
  fn.kind = NavFunctionKind::TorusCosine;
  fn.value = [n, shift](const Point& p) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += 1.0 - std::cos(p.coords[i] - p.coords[n + i] - shift[i]);
    return s;
  };
  fn.gradient = [n, shift](const Point& p) {
    std::vector<double> g(2 * n, 0.0);
    for (int i = 0; i < n; ++i) {
      double su = std::sin(p.coords[i] - p.coords[n + i] - shift[i]);
      g[i] = su;
      g[n + i] = -su;
    }
    return TangentVector{p, std::move(g)};
  };
  for (int k = 0; k <= n; ++k) {
    CriticalLevel level{2.0 * k, {}};
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      if (__builtin_popcount(mask) != k) continue;
      std::vector<double> offset(n);
      for (int i = 0; i < n; ++i) offset[i] = wrap_angle(shift[i] + ((mask >> i) & 1u ? kPi : 0.0));
      level.components.push_back(
          CriticalComponent{SubmanifoldSpec::diagonal(fn.manifold, std::move(offset)), k});
    }
    fn.levels.push_back(std::move(level));
  }
  return fn;
}

NavFunctionAudit audit_navigation_function(const NavigationFunction& fn, int samples,
                                           std::uint64_t seed) {
  Rng rng(seed);
  NavFunctionAudit audit;
  audit.min_offset_grad = std::numeric_limits<double>::infinity();
  audit.min_random_value = std::numeric_limits<double>::infinity();

  int per_component = std::max(8, samples / 20);
  double lowest_value_seen = std::numeric_limits<double>::infinity();
  for (const auto& level : fn.levels) {
    for (const auto& comp : level.components) {
      for (int k = 0; k < per_component; ++k) {
        Point p = sample_submanifold(comp.set, rng);
        audit.max_component_grad =
            std::max(audit.max_component_grad, vnorm(fn.gradient(p).components));
        if (&level == &fn.levels.front())
          lowest_value_seen = std::min(lowest_value_seen, fn.value(p));
      }
    }
  }

  for (int k = 0; k < samples; ++k) {
    Point p = uniform_sample(fn.manifold, rng);
    if (fn.domain && !fn.domain(p)) continue;
    bool near_critical = false;
    for (const auto& level : fn.levels)
      for (const auto& comp : level.components)
        if (distance_to_submanifold(p, comp.set).distance < 1e-3) near_critical = true;
    audit.min_random_value = std::min(audit.min_random_value, fn.value(p));
    if (near_critical) continue;
    audit.min_offset_grad = std::min(audit.min_offset_grad, vnorm(fn.gradient(p).components));
  }

  double c1 = fn.levels.empty() ? 0.0 : fn.levels.front().value;
  audit.minimum_on_lowest_level = std::fabs(lowest_value_seen - c1) <= 1e-9 &&
                                  audit.min_random_value >= c1 - 1e-9;
  audit.pass = audit.max_component_grad < kGradTol && audit.min_offset_grad > 10.0 * kGradTol &&
               audit.minimum_on_lowest_level;
  return audit;
}

}  // namespace navplan
