// Two-objective performance measurement: Pareto filtering, exact 2-D
// hypervolume, reference-point selection, and attainment surfaces across
// repeated runs. Both objectives are minimized.
#pragma once

#include <string>
#include <vector>

namespace coverplan {

struct FrontPoint {
    double coverage_score{0.0};
    double energy{0.0};
    std::string plan_ref;
};

struct ReferencePoint {
    double coverage_ref{0.0};
    double energy_ref{0.0};
};

// a weakly dominates b (componentwise <=).
inline bool weakly_dominates(const FrontPoint& a, const FrontPoint& b) {
    return a.coverage_score <= b.coverage_score && a.energy <= b.energy;
}
// a strictly dominates b.
inline bool dominates(const FrontPoint& a, const FrontPoint& b) {
    return weakly_dominates(a, b) &&
           (a.coverage_score < b.coverage_score || a.energy < b.energy);
}

// Maximal mutually non-dominated subset, ordered by coverage_score.
// Duplicates collapse to a single representative.
std::vector<FrontPoint> pareto_filter(const std::vector<FrontPoint>& points);

// Exact area dominated by `points` relative to `ref` (sorted-sweep formula).
// Throws InvalidInputError when a point lies beyond the reference point.
double hypervolume_2d(const std::vector<FrontPoint>& points, const ReferencePoint& ref);

// Worst observed value per objective, nudged up by 1%; a zero maximum gets an
// absolute +0.01 and coverage_ref never drops below 1.01.
ReferencePoint choose_reference_point(const std::vector<FrontPoint>& all_points);

struct AttainmentSurfaces {
    std::vector<double> thresholds;  // coverage_score grid
    std::vector<double> best;        // min energy attained at <= threshold
    std::vector<double> median;
    std::vector<double> worst;       // +inf where a run attained nothing
};

AttainmentSurfaces attainment_surfaces(const std::vector<std::vector<FrontPoint>>& runs,
                                       int grid_size = 101);

// Incremental non-dominated archive with plan provenance.
class ParetoArchive {
public:
    // True when the point enters the archive (it is not dominated by any
    // current member); dominated members are evicted.
    bool insert(const FrontPoint& p);
    const std::vector<FrontPoint>& points() const { return points_; }

private:
    std::vector<FrontPoint> points_;
};

}  // namespace coverplan
