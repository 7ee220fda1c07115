#pragma once

#include "navplan/morse.hpp"
#include "navplan/submanifold.hpp"

namespace navplan {

inline constexpr double kCutMargin = 1e-3;  // keep-off distance from cut pieces

// True when y stays clear of every declared cut piece. The squared-distance
// gradient is undefined on the cut locus itself.
bool off_cut(const Point& y, const CutLocusDescriptor& cut, double margin = kCutMargin);

// d(., N)^2 as a navigation function on M \ Cut N: single critical level {N}
// at value 0, gradient 2 d along the outward unique N-segment, domain
// restricted by off_cut. Requires an analytic cut descriptor.
NavigationFunction squared_distance_function(const ManifoldSpec& m, const SubmanifoldSpec& n,
                                             const CutLocusDescriptor& cut,
                                             double margin = kCutMargin);

}  // namespace navplan
