#include <cmath>

#include "doctest.h"
#include "navplan/manifold.hpp"
#include "oracles.hpp"

using namespace navplan;

namespace {

Point sphere_pt(double x, double y, double z) {
  return make_point(ManifoldSpec::sphere(2), {x, y, z});
}

const std::vector<ManifoldSpec> kCatalog{
    ManifoldSpec::circle(),
    ManifoldSpec::sphere(2),
    ManifoldSpec::torus(2),
    ManifoldSpec::real_projective(2),
    ManifoldSpec::product({ManifoldSpec::sphere(2), ManifoldSpec::torus(2)}),
    ManifoldSpec::product({ManifoldSpec::sphere(2), ManifoldSpec::sphere(2)}),
};

}  // namespace

TEST_CASE("exp map on catalog kinds") {
  Point x = sphere_pt(0, 0, 1);
  Point got = exp_map(x, make_tangent(x, {1, 0, 0}), kPi / 2);
  CHECK(riemannian_distance(got, sphere_pt(1, 0, 0)) < 1e-12);

  Point t = make_point(ManifoldSpec::torus(2), {0, 0});
  Point wrapped = exp_map(t, make_tangent(t, {1, 0}), 3 * kPi);
  CHECK(wrapped.coords[0] == doctest::Approx(kPi).epsilon(1e-12));
  CHECK(wrapped.coords[1] == doctest::Approx(0.0));

  Point rp = make_point(ManifoldSpec::real_projective(2), {0, 0, 1});
  Point back = exp_map(rp, make_tangent(rp, {1, 0, 0}), kPi);
  CHECK(riemannian_distance(back, rp) < 1e-12);  // antipodal identification
}

TEST_CASE("riemannian distance on catalog kinds") {
  CHECK(riemannian_distance(sphere_pt(0, 0, 1), sphere_pt(0, 0, -1)) == doctest::Approx(kPi));

  ManifoldSpec t2 = ManifoldSpec::torus(2);
  CHECK(riemannian_distance(make_point(t2, {0, 0}), make_point(t2, {kPi, kPi})) ==
        doctest::Approx(kPi * std::sqrt(2.0)));

  // Oracle: lattice-translate brute force on the circle.
  ManifoldSpec t1 = ManifoldSpec::torus(1);
  double d = riemannian_distance(make_point(t1, {0}), make_point(t1, {0.5}));
  CHECK(d == doctest::Approx(oracles::torus_distance_lattice({0}, {0.5})));
  CHECK(d == doctest::Approx(0.5));
}

TEST_CASE("torus distance equals the lattice oracle on random pairs") {
  ManifoldSpec t3 = ManifoldSpec::torus(3);
  Rng rng(11);
  for (int k = 0; k < 1000; ++k) {
    Point a = uniform_sample(t3, rng);
    Point b = uniform_sample(t3, rng);
    CHECK(riemannian_distance(a, b) ==
          doctest::Approx(oracles::torus_distance_lattice(a.coords, b.coords)).epsilon(1e-12));
  }
}

TEST_CASE("minimizing geodesic multiplicities") {
  ManifoldSpec t2 = ManifoldSpec::torus(2);
  auto mg = minimizing_geodesics(make_point(t2, {0, 0}), make_point(t2, {kPi, kPi}));
  CHECK(mg.segments.size() == 4);
  CHECK_FALSE(mg.continuum);
  CHECK(oracles::torus_minimizer_count_lattice({0, 0}, {kPi, kPi}, 1e-6) == 4);

  auto sphere_mg = minimizing_geodesics(sphere_pt(0, 0, 1), sphere_pt(1, 0, 0));
  CHECK(sphere_mg.segments.size() == 1);

  ManifoldSpec c = ManifoldSpec::circle();
  auto half = minimizing_geodesics(make_point(c, {0}), make_point(c, {kPi}));
  CHECK(half.segments.size() == 2);
  CHECK_FALSE(half.continuum);

  auto antipodal = minimizing_geodesics(sphere_pt(0, 0, 1), sphere_pt(0, 0, -1));
  CHECK(antipodal.continuum);
  CHECK(antipodal.segments.size() == kContinuumSamples);
}

TEST_CASE("exp of a minimizing geodesic lands on the target") {
  Rng rng(23);
  for (const auto& m : kCatalog) {
    for (int k = 0; k < 40; ++k) {
      Point a = uniform_sample(m, rng);
      Point b = uniform_sample(m, rng);
      double d = riemannian_distance(a, b);
      auto mg = minimizing_geodesics(a, b);
      for (const auto& seg : mg.segments) {
        CHECK(seg.length == doctest::Approx(d).epsilon(1e-9));
        Point hit = exp_map(seg.start, seg.initial_velocity, seg.length);
        CHECK(riemannian_distance(hit, b) < 1e-6);
      }
    }
  }
}

TEST_CASE("distance symmetry and triangle inequality") {
  Rng rng(37);
  for (const auto& m : kCatalog) {
    for (int k = 0; k < 60; ++k) {
      Point a = uniform_sample(m, rng);
      Point b = uniform_sample(m, rng);
      Point c = uniform_sample(m, rng);
      CHECK(riemannian_distance(a, b) ==
            doctest::Approx(riemannian_distance(b, a)).epsilon(1e-12));
      CHECK(riemannian_distance(a, c) <=
            riemannian_distance(a, b) + riemannian_distance(b, c) + 1e-9);
    }
  }
}

TEST_CASE("path concatenation and reversal") {
  ManifoldSpec c = ManifoldSpec::circle();
  Point a0 = make_point(c, {0});

  Path constant = concatenate_paths(constant_path(a0), constant_path(a0));
  CHECK(path_length(constant) == doctest::Approx(0.0));

  auto quarter = [&](double from, double to) {
    auto mg = minimizing_geodesics(make_point(c, {from}), make_point(c, {to}));
    return geodesic_path(mg.segments.front(), 9);
  };
  Path half = concatenate_paths(quarter(0, kPi / 2), quarter(kPi / 2, kPi));
  CHECK(path_length(half) == doctest::Approx(kPi).epsilon(1e-6));
  CHECK(riemannian_distance(half.samples.front().point, a0) < 1e-12);
  CHECK(riemannian_distance(half.samples.back().point, make_point(c, {kPi})) < 1e-12);

  Path rev = reverse_path(half);
  CHECK(rev.samples.front().point.coords[0] == doctest::Approx(kPi));
  CHECK(rev.samples.back().point.coords[0] == doctest::Approx(0.0));
  Path twice = reverse_path(rev);
  REQUIRE(twice.samples.size() == half.samples.size());
  for (size_t i = 0; i < half.samples.size(); ++i) {
    CHECK(twice.samples[i].t == doctest::Approx(half.samples[i].t));
    CHECK(riemannian_distance(twice.samples[i].point, half.samples[i].point) == 0.0);
  }

  // a then a-reversed ends where it started.
  Path loop = concatenate_paths(half, reverse_path(half));
  CHECK(riemannian_distance(loop.samples.front().point, a0) < 1e-12);
  CHECK(riemannian_distance(loop.samples.back().point, a0) < 1e-12);

  CHECK_THROWS_AS(concatenate_paths(quarter(0, kPi / 2), quarter(kPi, 3 * kPi / 2)),
                  std::invalid_argument);
}

TEST_CASE("path operations keep samples on the manifold") {
  Rng rng(41);
  for (const auto& m : kCatalog) {
    Point a = uniform_sample(m, rng);
    Point b = uniform_sample(m, rng);
    auto mg = minimizing_geodesics(a, b);
    Path p = geodesic_path(mg.segments.front(), 17);
    Path q = reverse_path(p);
    for (const auto& s : q.samples) {
      // Constructing through make_point revalidates the invariant.
      CHECK_NOTHROW(make_point(m, s.point.coords));
    }
  }
}

TEST_CASE("point validation") {
  CHECK_THROWS_AS(make_point(ManifoldSpec::sphere(2), {1, 1, 1}), std::invalid_argument);
  CHECK_THROWS_AS(make_point(ManifoldSpec::torus(2), {0}), std::invalid_argument);
  Point wrapped = make_point(ManifoldSpec::torus(1), {-kPi});
  CHECK(wrapped.coords[0] == doctest::Approx(kPi));
  // Projective sign canonicalization.
  Point rp = make_point(ManifoldSpec::real_projective(2), {0, 0, -1});
  CHECK(rp.coords[2] == doctest::Approx(1.0));
}

TEST_CASE("circle and torus(1) are the same catalog entry") {
  CHECK(ManifoldSpec::circle() == ManifoldSpec::torus(1));
  CHECK(pair_half(ManifoldSpec::torus(2)) == ManifoldSpec::circle());
}
