#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "navplan/planner.hpp"

namespace navplan {

struct ProvenancedValue {
  int value = 0;
  std::string provenance;  // how the reference number is known
};

// Inequality bookkeeping for one planner. upper_bound counts pieces - 1;
// theorem_form_rhs is the right-hand side of the matching decomposition
// inequality in "+1" form.
struct BoundReport {
  std::string label;
  int upper_bound = 0;
  std::vector<std::pair<double, int>> per_level_terms;  // (level value, piece count)
  int theorem_form_rhs = 0;
  std::optional<ProvenancedValue> reference;
  bool inequality_holds = false;
};

class ReferenceTable {
 public:
  static const ReferenceTable& builtin();
  std::optional<ProvenancedValue> lookup(const std::string& invariant,
                                         const std::string& space) const;
  const std::map<std::pair<std::string, std::string>, ProvenancedValue>& entries() const {
    return entries_;
  }

 private:
  std::map<std::pair<std::string, std::string>, ProvenancedValue> entries_;
};

// pieces - 1; refuses planners that failed their covering audit.
int upper_bound_from_planner(const GeneralizedPlanner& planner, const CoverageAudit& audit);

// bound + 1 <= sum over levels of (piece count); critical-level decomposition.
BoundReport check_morse_bott_bound(const GeneralizedPlanner& planner, const std::string& label,
                                   std::optional<ProvenancedValue> reference = {});

// bound <= (pieces on N - 1) + (pieces on Cut N - 1) + 1.
BoundReport check_cutlocus_bound(const GeneralizedPlanner& planner, const std::string& label,
                                 std::optional<ProvenancedValue> reference = {});

// Subspace distance over disjoint components aggregates by maximum.
int components_max_rule(const std::vector<int>& per_component_bounds);

// Winding number of an angle self-map of the circle via unwrapped sampling;
// exact for integer degrees below the sampling Nyquist bound.
long long winding_number(const std::function<double(double)>& circle_map, int samples = 1000);

// Weak category of z -> z^degree on the whole circle: 0 when the map is
// null-homotopic (degree 0), else 1 (every iterate keeps nonzero degree).
int weak_category_circle(int degree);

// Per-iterate upper bounds for k = 1..k_max; non-increasing by construction
// of the iterates.
std::vector<int> weak_category_circle_sequence(int degree, int k_max = 10);

}  // namespace navplan
