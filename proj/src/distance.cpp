#include "navplan/distance.hpp"

#include <cmath>

namespace navplan {

const ReferenceTable& ReferenceTable::builtin() {
  static const ReferenceTable table = [] {
    ReferenceTable t;
    t.entries_[{"TC", "S^1"}] =
        ProvenancedValue{1, "lower bound: a 0-piece planner would contract the circle"};
    t.entries_[{"TC", "T^2"}] =
        ProvenancedValue{2, "lower bound: zero-divisor cup-length of the torus is 2"};
    t.entries_[{"TC", "S^2"}] = ProvenancedValue{2, "tabulated: TC(S^n) = 2 for even n"};
    t.entries_[{"cat", "S^2"}] =
        ProvenancedValue{1, "lower bound: a single categorical piece would contract the sphere"};
    return t;
  }();
  return table;
}

std::optional<ProvenancedValue> ReferenceTable::lookup(const std::string& invariant,
                                                       const std::string& space) const {
  auto it = entries_.find({invariant, space});
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

int upper_bound_from_planner(const GeneralizedPlanner& planner, const CoverageAudit& audit) {
  if (!audit.pass)
    throw std::invalid_argument("planner failed its covering audit; refusing to report a bound");
  return static_cast<int>(planner.pieces.size()) - 1;
}

BoundReport check_morse_bott_bound(const GeneralizedPlanner& planner, const std::string& label,
                                   std::optional<ProvenancedValue> reference) {
  BoundReport report;
  report.label = label;
  report.upper_bound = static_cast<int>(planner.pieces.size()) - 1;
  report.per_level_terms = planner.per_level_counts;
  int rhs = 0;
  for (const auto& [value, count] : planner.per_level_counts) rhs += count;
  report.theorem_form_rhs = rhs;
  report.reference = std::move(reference);
  report.inequality_holds = report.upper_bound + 1 <= rhs;
  return report;
}

BoundReport check_cutlocus_bound(const GeneralizedPlanner& planner, const std::string& label,
                                 std::optional<ProvenancedValue> reference) {
  BoundReport report;
  report.label = label;
  report.upper_bound = static_cast<int>(planner.pieces.size()) - 1;
  report.per_level_terms = {{0.0, planner.pieces_on_submanifold},
                            {1.0, planner.pieces_on_cut}};
  report.theorem_form_rhs = (planner.pieces_on_submanifold - 1) +
                            std::max(planner.pieces_on_cut - 1, 0) + 1;
  report.reference = std::move(reference);
  report.inequality_holds = report.upper_bound <= report.theorem_form_rhs;
  return report;
}

int components_max_rule(const std::vector<int>& per_component_bounds) {
  if (per_component_bounds.empty())
    throw std::invalid_argument("need at least one component bound");
  int best = 0;
  for (int b : per_component_bounds) best = std::max(best, b);
  return best;
}

long long winding_number(const std::function<double(double)>& circle_map, int samples) {
  double acc = 0.0;
  double prev = circle_map(0.0);
  for (int j = 1; j <= samples; ++j) {
    double theta = 2.0 * kPi * j / samples;
    double cur = circle_map(theta);
    acc += principal_angle(cur - prev);
    prev = cur;
  }
  return std::llround(acc / (2.0 * kPi));
}

namespace {

bool iterate_winding_nonzero(int degree, int iterate) {
  // The k-th iterate winds degree^k times. Sample it directly while the
  // slope stays below the unwrapping Nyquist bound; beyond that the degree's
  // multiplicativity under composition settles nonzero-ness.
  double slope = std::pow(std::abs(static_cast<double>(degree)), iterate);
  if (slope <= 400.0) {
    auto map = [degree, iterate](double theta) {
      double phi = theta;
      for (int i = 0; i < iterate; ++i) phi = wrap_angle(degree * phi);
      return phi;
    };
    return winding_number(map) != 0;
  }
  return winding_number([degree](double theta) { return wrap_angle(degree * theta); }) != 0;
}

}  // namespace

int weak_category_circle(int degree) {
  long long w = winding_number([degree](double theta) { return wrap_angle(degree * theta); });
  return w == 0 ? 0 : 1;
}

std::vector<int> weak_category_circle_sequence(int degree, int k_max) {
  std::vector<int> bounds;
  bounds.reserve(k_max);
  for (int k = 1; k <= k_max; ++k) bounds.push_back(iterate_winding_nonzero(degree, k) ? 1 : 0);
  return bounds;
}

}  // namespace navplan
