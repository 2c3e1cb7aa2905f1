#include "coverplan/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "coverplan/errors.hpp"

namespace coverplan {

std::vector<FrontPoint> pareto_filter(const std::vector<FrontPoint>& points) {
    std::vector<FrontPoint> sorted = points;
    std::stable_sort(sorted.begin(), sorted.end(), [](const FrontPoint& a, const FrontPoint& b) {
        if (a.coverage_score != b.coverage_score) return a.coverage_score < b.coverage_score;
        return a.energy < b.energy;
    });

    std::vector<FrontPoint> front;
    double best_energy = std::numeric_limits<double>::infinity();
    for (const auto& p : sorted) {
        if (p.energy < best_energy) {
            front.push_back(p);
            best_energy = p.energy;
        }
    }
    return front;
}

double hypervolume_2d(const std::vector<FrontPoint>& points, const ReferencePoint& ref) {
    for (const auto& p : points) {
        if (p.coverage_score > ref.coverage_ref || p.energy > ref.energy_ref)
            throw InvalidInputError("point (" + std::to_string(p.coverage_score) + ", " +
                                    std::to_string(p.energy) + ") lies beyond the reference point");
    }
    const auto front = pareto_filter(points);
    double area = 0.0;
    for (std::size_t i = 0; i < front.size(); ++i) {
        const double next_cov = i + 1 < front.size() ? front[i + 1].coverage_score
                                                     : ref.coverage_ref;
        area += (next_cov - front[i].coverage_score) * (ref.energy_ref - front[i].energy);
    }
    return area;
}

ReferencePoint choose_reference_point(const std::vector<FrontPoint>& all_points) {
    if (all_points.empty()) throw InvalidInputError("no points for reference selection");
    double max_cov = 0.0, max_energy = 0.0;
    for (const auto& p : all_points) {
        max_cov = std::max(max_cov, p.coverage_score);
        max_energy = std::max(max_energy, p.energy);
    }
    ReferencePoint ref;
    ref.coverage_ref = std::max(max_cov > 0.0 ? max_cov * 1.01 : 0.01, 1.01);
    ref.energy_ref = max_energy > 0.0 ? max_energy * 1.01 : 0.01;
    return ref;
}

AttainmentSurfaces attainment_surfaces(const std::vector<std::vector<FrontPoint>>& runs,
                                       int grid_size) {
    if (runs.empty()) throw InvalidInputError("attainment surfaces need at least one run");
    constexpr double kInf = std::numeric_limits<double>::infinity();

    AttainmentSurfaces out;
    out.thresholds.resize(grid_size);
    out.best.resize(grid_size);
    out.median.resize(grid_size);
    out.worst.resize(grid_size);

    for (int i = 0; i < grid_size; ++i) {
        const double t = grid_size == 1 ? 0.0 : static_cast<double>(i) / (grid_size - 1);
        out.thresholds[i] = t;

        std::vector<double> attained;
        attained.reserve(runs.size());
        for (const auto& run : runs) {
            double best = kInf;
            for (const auto& p : run)
                if (p.coverage_score <= t) best = std::min(best, p.energy);
            attained.push_back(best);
        }
        std::sort(attained.begin(), attained.end());
        out.best[i] = attained.front();
        out.worst[i] = attained.back();
        out.median[i] = attained[(attained.size() - 1) / 2];
    }
    return out;
}

bool ParetoArchive::insert(const FrontPoint& p) {
    for (const auto& q : points_) {
        if (weakly_dominates(q, p)) return false;
    }
    std::erase_if(points_, [&p](const FrontPoint& q) { return weakly_dominates(p, q); });
    points_.push_back(p);
    return true;
}

}  // namespace coverplan
