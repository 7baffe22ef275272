#pragma once

#include "ergoscope/design.hpp"

#include <functional>
#include <string_view>
#include <utility>
#include <vector>

namespace ergoscope {

enum class Strategy { Grid, NelderMead, GridThenNelderMead };

Strategy parse_strategy(std::string_view name);
std::string_view to_string(Strategy s);

struct DesignBounds {
    Interval a3{0.05, 0.40};
    Interval a4{0.05, 0.40};
    Interval D{0.05, 0.50};

    bool contains(const DesignPoint& p) const {
        return a3.contains(p.a3) && a4.contains(p.a4) && D.contains(p.D);
    }
    bool operator==(const DesignBounds&) const = default;
};

struct OptimizationProblem {
    DesignBounds bounds{};
    Strategy strategy = Strategy::GridThenNelderMead;
    /// Maximum number of objective evaluations (grid + simplex).
    std::size_t budget = 800;
    /// Lattice points per axis of the grid stage.
    std::size_t grid_points = 9;
    /// Simplex stops once every vertex is within xtol (m) of the best one.
    double xtol = 1e-4;
    /// Initial simplex edge as a fraction of each bound width (pure simplex runs).
    double initial_step = 0.1;

    void validate() const;
    bool operator==(const OptimizationProblem&) const = default;
};

struct HistoryEntry {
    DesignPoint point;
    double F = 0.0;
};

struct OptimizationResult {
    DesignPoint best;
    double best_F = 0.0;
    std::vector<HistoryEntry> history;
    std::size_t evaluations = 0;
    /// The budget ran out before the strategy finished.
    bool truncated = false;
};

using Objective = std::function<double(const DesignPoint&)>;

/// True when (F_a, a) beats (F_b, b): larger F, then smaller a3 + a4, then smaller D.
bool better(double f_a, const DesignPoint& a, double f_b, const DesignPoint& b);

/**
 * Maximizes `objective` over the bounds.
 *
 * Grid: lattice of grid_points per axis (1 on collapsed axes), row-major
 * in (a3, a4, D). With GridThenNelderMead the lattice is thinned to at
 * most cbrt(budget / 2) points per axis so the simplex keeps half the
 * budget.
 *
 * NelderMead: bound-clipped simplex on -F starting from the best lattice
 * point (or the box center). A vertex outside the box is evaluated at its
 * clipped image with a penalty of 1e-6 per meter of violation. Repeated
 * points are served from a cache and cost no budget.
 */
OptimizationResult optimize(const OptimizationProblem& problem, const Objective& objective);

}  // namespace ergoscope
