#pragma once

#include <functional>
#include <vector>

#include "ssp/model.hpp"

namespace ssp {

/// One-stage ingredients of the harvesting game on a grid: anchored revenue,
/// reproduction under each discretized shock, discounting, and the fixed cost
/// per harvest event. The solvers consume this form directly, so tests can
/// substitute hand-built dynamics (e.g. transitions landing exactly on nodes)
/// while production code builds it from BioModel/EconModel.
struct StageProblem {
    Grid grid;
    double discount_factor = 0;
    double fixed_cost = 0;
    std::vector<double> shocks;  ///< discretized adversary support, ascending

    std::function<double(double escapement, double shock)> recruit;
    std::function<double(double stock)> revenue;  ///< R_rel at positive stocks

    /// Whether revenue(0) is finite. False for the effort model with b >= 1,
    /// where harvesting the stock to zero is infinitely costly and node 0 is
    /// never a valid harvest target.
    bool revenue_finite_at_zero = false;
};

/// Evenly spaced shock discretization: the two support endpoints plus
/// `points - 2` interior values (points >= 2).
std::vector<double> discretize_shocks(const BioModel& bio, int points);

/// Assemble the stage problem for the bioeconomic model.
StageProblem make_stage_problem(const BioModel& bio, const EconModel& econ,
                                const Grid& grid, int shock_points = 5);

/// Default production grid: x_max is the largest-shock carrying capacity
/// rounded up to the next node (no reachable trajectory exceeds it), x_ref
/// one step.
Grid default_grid(const BioModel& bio, double step = 0.25);

}  // namespace ssp
