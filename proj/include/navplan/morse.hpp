#pragma once

#include <functional>
#include <vector>

#include "navplan/submanifold.hpp"

namespace navplan {

inline constexpr double kGradTol = 1e-8;      // critical-point detection
inline constexpr long kMaxFlowSteps = 1000000;
inline constexpr double kSnapTol = 1e-4;      // limit snap radius
inline constexpr double kUnstableTol = 1e-7;  // start-on-unstable-set radius

struct CriticalComponent {
  SubmanifoldSpec set;
  int index = 0;  // transverse Hessian index, declared per catalog function
};

struct CriticalLevel {
  double value = 0.0;
  std::vector<CriticalComponent> components;
};

enum class NavFunctionKind { TorusCosine, SquaredDistanceToSubmanifold, Custom };

// Morse-Bott function with declared critical data. The declaration is
// trusted for snapping but cross-checked by audit_navigation_function.
struct NavigationFunction {
  ManifoldSpec manifold;
  NavFunctionKind kind = NavFunctionKind::Custom;
  std::function<double(const Point&)> value;
  std::function<TangentVector(const Point&)> gradient;
  std::vector<CriticalLevel> levels;              // ascending critical values
  std::function<bool(const Point&)> domain;       // empty: all of M
};

struct FlowSettings {
  double initial_step = 0.01;
  double max_step = 0.25;
  double grad_tol = kGradTol;
  long max_steps = kMaxFlowSteps;
  double snap_tol = kSnapTol;
  double unstable_tol = kUnstableTol;
};

struct FlowResult {
  Path trajectory;                 // accepted steps, time normalized to [0,1]
  std::vector<double> flow_times;  // per trajectory sample
  std::vector<double> grad_norms;  // per trajectory sample
  Point limit_point;
  int level_index = -1;
  int component_index = -1;
  bool converged = false;
  bool ambiguous = false;  // limit on a positive-index component
  long steps = 0;
};

// x' = -grad(value), classical 4th-order steps with halving whenever the
// value fails to decrease; terminates on |grad| < grad_tol, then snaps the
// limit to the nearest declared component.
FlowResult negative_gradient_flow(const NavigationFunction& fn, const Point& start,
                                  const FlowSettings& settings = {});

// (level index, component index) of the flow limit; throws on non-convergence.
std::pair<int, int> basin_assignment(const NavigationFunction& fn, const Point& start,
                                     const FlowSettings& settings = {});

// Reparametrizes a converged trajectory by accumulated gradient arc length
// s = integral |grad| dt, appends the snap segment, rescales to [0,1]. The
// result reaches the critical set at parameter 1.
Path arc_length_reparametrize(const FlowResult& flow, const NavigationFunction& fn);

// Sum of 1 - cos(x_i - y_i - shift_i) on T^n x T^n, with critical values
// {0, 2, ..., 2n} on the offset diagonals x - y = shift + pi * pattern.
NavigationFunction make_torus_cosine(int n, std::vector<double> shift = {});

struct NavFunctionAudit {
  double max_component_grad = 0.0;  // |grad| over declared component samples
  double min_offset_grad = 0.0;     // |grad| over random non-critical points
  double min_random_value = 0.0;
  bool minimum_on_lowest_level = false;
  bool pass = false;
};

NavFunctionAudit audit_navigation_function(const NavigationFunction& fn, int samples,
                                           std::uint64_t seed);

}  // namespace navplan
