#include <cmath>

#include "doctest.h"
#include "navplan/distance.hpp"
#include "navplan/scenario.hpp"

using namespace navplan;

TEST_CASE("upper bound from a planner") {
  GeneralizedPlanner one = make_tc_torus_planner(1);
  CoverageAudit cov1 = coverage_audit(one, 200, 1);
  REQUIRE(cov1.pass);
  CHECK(upper_bound_from_planner(one, cov1) == 1);

  GeneralizedPlanner two = make_tc_torus_planner(2);
  CoverageAudit cov2 = coverage_audit(two, 200, 2);
  REQUIRE(cov2.pass);
  CHECK(upper_bound_from_planner(two, cov2) == 2);
}

TEST_CASE("cut locus bound arithmetic") {
  GeneralizedPlanner pl = make_tc_sphere_pair_planner();
  BoundReport report = check_cutlocus_bound(pl, "sphere pair",
                                            ReferenceTable::builtin().lookup("TC", "S^2"));
  CHECK(report.upper_bound == 2);
  CHECK(report.theorem_form_rhs == (1 - 1) + (2 - 1) + 1);
  CHECK(report.inequality_holds);
  REQUIRE(report.reference);
  CHECK(report.reference->value == 2);

  GeneralizedPlanner cat = make_cat_sphere_planner();
  BoundReport cat_report = check_cutlocus_bound(cat, "cat sphere",
                                                ReferenceTable::builtin().lookup("cat", "S^2"));
  CHECK(cat_report.upper_bound == 1);
  CHECK(cat_report.theorem_form_rhs == 1);
  CHECK(cat_report.inequality_holds);
}

TEST_CASE("components aggregate by maximum") {
  CHECK(components_max_rule({0, 0}) == 0);
  CHECK(components_max_rule({1, 0}) == 1);
  // The c = 2 level of the torus TC function: two components, one
  // translation piece each.
  NavigationFunction fn = make_torus_cosine(2);
  const auto& level = fn.levels[1];
  REQUIRE(level.components.size() == 2);
  std::vector<int> per_component(level.components.size(), 0);
  CHECK(components_max_rule(per_component) == 0);
  CHECK_THROWS_AS(components_max_rule({}), std::invalid_argument);
}

TEST_CASE("winding numbers by angle unwrapping") {
  for (int degree : {-3, -1, 0, 1, 2, 5, 11}) {
    long long w =
        winding_number([degree](double theta) { return wrap_angle(degree * theta); });
    CHECK(w == degree);
  }
  // Iterated maps multiply the degree; direct unwrapping agrees while the
  // slope is resolvable.
  for (int degree : {-2, 2, 3}) {
    for (int k = 1; k <= 5; ++k) {
      double pow = std::pow(degree, k);
      if (std::fabs(pow) > 400) continue;
      auto iterated = [degree, k](double theta) {
        double phi = theta;
        for (int i = 0; i < k; ++i) phi = wrap_angle(degree * phi);
        return phi;
      };
      CHECK(winding_number(iterated) == static_cast<long long>(pow));
    }
  }
}

TEST_CASE("weak category of circle self-maps") {
  CHECK(weak_category_circle(0) == 0);
  CHECK(weak_category_circle(1) == 1);
  CHECK(weak_category_circle(2) == 1);
  CHECK(weak_category_circle(-1) == 1);
  CHECK(weak_category_circle(5) == 1);

  for (int degree : {0, 1, 2, -1, 5}) {
    auto seq = weak_category_circle_sequence(degree, 10);
    REQUIRE(seq.size() == 10);
    for (size_t k = 1; k < seq.size(); ++k) CHECK(seq[k] <= seq[k - 1]);
    CHECK(seq.back() == weak_category_circle(degree));
  }
}

TEST_CASE("reference table provenance") {
  for (const auto& [key, value] : ReferenceTable::builtin().entries()) {
    CHECK_FALSE(value.provenance.empty());
  }
  CHECK_FALSE(ReferenceTable::builtin().lookup("TC", "S^9").has_value());
}
