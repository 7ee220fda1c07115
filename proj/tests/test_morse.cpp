#include <cmath>

#include "doctest.h"
#include "navplan/cutlocus.hpp"
#include "navplan/morse.hpp"
#include "oracles.hpp"

using namespace navplan;

namespace {

const ManifoldSpec kSphere = ManifoldSpec::sphere(2);

Point np() { return make_point(kSphere, {0, 0, 1}); }

NavigationFunction sphere_pole_function() {
  SubmanifoldSpec n = SubmanifoldSpec::single_point(np());
  return squared_distance_function(kSphere, n, cut_locus_analytic(kSphere, n));
}

Point cosine_start(const std::vector<double>& u) {
  // Points of T^n x T^n with x - y = u and y = 0.
  std::vector<double> c(u);
  c.resize(2 * u.size(), 0.0);
  return make_point(ManifoldSpec::torus(2 * static_cast<int>(u.size())), c);
}

}  // namespace

TEST_CASE("sphere squared-distance flow descends to the pole") {
  NavigationFunction fn = sphere_pole_function();
  FlowResult r = negative_gradient_flow(fn, make_point(kSphere, {1, 0, 0}));
  REQUIRE(r.converged);
  CHECK(riemannian_distance(r.limit_point, np()) < 1e-6);
  CHECK(r.level_index == 0);
  CHECK_FALSE(r.ambiguous);
}

TEST_CASE("torus cosine flow reaches the diagonal") {
  NavigationFunction fn = make_torus_cosine(2);
  FlowResult r = negative_gradient_flow(fn, cosine_start({0.1, -0.2}));
  REQUIRE(r.converged);
  CHECK(r.level_index == 0);  // c = 0
  Point x = pair_first(r.limit_point);
  Point y = pair_second(r.limit_point);
  CHECK(riemannian_distance(x, y) < 1e-6);
}

TEST_CASE("stationary saddle coordinate gives an ambiguous flow") {
  NavigationFunction fn = make_torus_cosine(2);
  FlowResult r = negative_gradient_flow(fn, cosine_start({kPi, 0.3}));
  REQUIRE(r.converged);
  CHECK(r.ambiguous);
  CHECK(fn.levels[r.level_index].value == doctest::Approx(2.0));

  // Independent fixed-step oracle on the u-dynamics u' = -2 sin u.
  auto field = [](const std::vector<double>& u) {
    std::vector<double> f(u.size());
    for (size_t i = 0; i < u.size(); ++i) f[i] = -2.0 * std::sin(u[i]);
    return f;
  };
  auto u_end = oracles::torus_ode_rk4(field, {kPi, 0.3}, 1e-3, 20000);
  CHECK(std::fabs(u_end[0] - kPi) < 1e-9);  // stationary coordinate
  CHECK(std::fabs(u_end[1]) < 1e-6);        // the other one decays
  Point x = pair_first(r.limit_point);
  Point y = pair_second(r.limit_point);
  CHECK(std::fabs(principal_angle(x.coords[0] - y.coords[0])) == doctest::Approx(kPi));
  CHECK(std::fabs(principal_angle(x.coords[1] - y.coords[1])) < 1e-6);
}

TEST_CASE("basin assignment") {
  NavigationFunction fn = make_torus_cosine(2);

  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    Point p = uniform_sample(fn.manifold, rng);
    auto [level, comp] = basin_assignment(fn, p);
    CHECK(level == 0);  // generic starts reach the minimum level
    (void)comp;
  }

  auto [top_level, top_comp] = basin_assignment(fn, cosine_start({kPi, kPi}));
  CHECK(fn.levels[top_level].value == doctest::Approx(4.0));
  CHECK(top_comp == 0);

  NavigationFunction pole = sphere_pole_function();
  Rng rng2(5);
  int runs = 0;
  while (runs < 1000) {
    Point p = uniform_sample(kSphere, rng2);
    if (!pole.domain(p)) continue;
    ++runs;
    auto [level, comp] = basin_assignment(pole, p);
    CHECK(level == 0);
    CHECK(comp == 0);
  }
}

TEST_CASE("basin assignment is the identity on declared components") {
  NavigationFunction fn = make_torus_cosine(2);
  Rng rng(7);
  for (size_t i = 0; i < fn.levels.size(); ++i) {
    for (size_t j = 0; j < fn.levels[i].components.size(); ++j) {
      for (int k = 0; k < 10; ++k) {
        Point p = sample_submanifold(fn.levels[i].components[j].set, rng);
        auto [level, comp] = basin_assignment(fn, p);
        CHECK(level == static_cast<int>(i));
        CHECK(comp == static_cast<int>(j));
      }
    }
  }
}

TEST_CASE("arc length reparametrization") {
  NavigationFunction fn = sphere_pole_function();

  FlowResult at_min = negative_gradient_flow(fn, np());
  Path constant = arc_length_reparametrize(at_min, fn);
  CHECK(path_length(constant) == doctest::Approx(0.0));

  Point equator = make_point(kSphere, {1, 0, 0});
  FlowResult r = negative_gradient_flow(fn, equator);
  REQUIRE(r.converged);
  Path reparam = arc_length_reparametrize(r, fn);
  // Radial flow: arc length equals the geodesic distance to the pole.
  CHECK(std::fabs(path_length(reparam) - riemannian_distance(equator, np())) < 0.01);
  CHECK(riemannian_distance(reparam.samples.front().point, equator) == 0.0);
  CHECK(riemannian_distance(reparam.samples.back().point, np()) < 1e-9);
  for (size_t k = 0; k + 1 < reparam.samples.size(); ++k)
    CHECK(reparam.samples[k + 1].t > reparam.samples[k].t);

  // Sample points come straight from the trajectory.
  for (size_t k = 0; k + 1 < reparam.samples.size(); ++k) {
    bool found = false;
    for (const auto& s : r.trajectory.samples)
      if (riemannian_distance(s.point, reparam.samples[k].point) == 0.0) found = true;
    CHECK(found);
  }
}

TEST_CASE("flow value is non-increasing along trajectories") {
  NavigationFunction fn = make_torus_cosine(2);
  Rng rng(9);
  for (int k = 0; k < 25; ++k) {
    FlowResult r = negative_gradient_flow(fn, uniform_sample(fn.manifold, rng));
    REQUIRE(r.converged);
    double prev = fn.value(r.trajectory.samples.front().point);
    for (const auto& s : r.trajectory.samples) {
      double v = fn.value(s.point);
      CHECK(v <= prev + 1e-10);
      prev = v;
    }
  }
}

TEST_CASE("torus cosine critical data") {
  for (int n : {1, 2, 3}) {
    NavigationFunction fn = make_torus_cosine(n);
    REQUIRE(fn.levels.size() == static_cast<size_t>(n + 1));
    int total_components = 0;
    for (int k = 0; k <= n; ++k) {
      CHECK(fn.levels[k].value == doctest::Approx(2.0 * k));
      total_components += static_cast<int>(fn.levels[k].components.size());
      for (const auto& comp : fn.levels[k].components) CHECK(comp.index == k);
    }
    CHECK(total_components == (1 << n));
  }

  NavigationFunction fn = make_torus_cosine(2);
  NavFunctionAudit audit = audit_navigation_function(fn, 400, 99);
  CHECK(audit.pass);
  CHECK(audit.max_component_grad < kGradTol);
  CHECK(audit.min_offset_grad > 10 * kGradTol);
  CHECK(audit.minimum_on_lowest_level);
}

TEST_CASE("torus cosine with a shift moves the critical diagonals") {
  std::vector<double> shift{0.5, 1.0};
  NavigationFunction fn = make_torus_cosine(2, shift);
  Point on = cosine_start({0.5, 1.0});
  CHECK(fn.value(on) == doctest::Approx(0.0));
  auto [level, comp] = basin_assignment(fn, on);
  CHECK(level == 0);
  CHECK(comp == 0);
  NavFunctionAudit audit = audit_navigation_function(fn, 300, 101);
  CHECK(audit.pass);
}

TEST_CASE("flow rejects off-manifold and off-domain starts") {
  NavigationFunction fn = sphere_pole_function();
  CHECK_THROWS_AS(negative_gradient_flow(fn, make_point(ManifoldSpec::sphere(2), {0, 0, -1})),
                  std::domain_error);
  NavigationFunction cosine = make_torus_cosine(1);
  CHECK_THROWS_AS(negative_gradient_flow(cosine, np()), std::invalid_argument);
}
