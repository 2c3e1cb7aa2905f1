#pragma once

#include <vector>

#include "coverplan/geom.hpp"
#include "coverplan/grid.hpp"

namespace coverplan {

// A plan is an ordered sequence of waypoint ids; the same representation is
// the evolutionary genome. Revisits and consecutive duplicates are allowed.
using InspectionPlan = std::vector<int>;

// Resolve plan ids against a grid. Throws InvalidPlanError on unknown ids.
std::vector<Vec3> resolve_plan(const InspectionPlan& plan, const WaypointGrid& grid);

}  // namespace coverplan
