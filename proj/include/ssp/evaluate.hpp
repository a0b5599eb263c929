#pragma once

#include <map>
#include <string>
#include <variant>
#include <vector>

#include "ssp/model.hpp"
#include "ssp/solver.hpp"

namespace ssp {

/// Harvest policies under comparison. Every variant must be admissible:
/// 0 <= action(x) <= x for all stocks.
struct ThresholdPolicy {
    ThresholdSchedule schedule;
};
struct ProportionalPolicy {
    double rate;  ///< yearly harvest as a fixed fraction of the current stock
};
struct SequencePolicy {
    std::vector<double> fractions;  ///< per-year harvest fractions of stock
};
struct RollingHorizonPolicy {
    int lookahead;  ///< re-solve a fresh lookahead-period problem every year
};

using Policy = std::variant<ThresholdPolicy, ProportionalPolicy,
                            SequencePolicy, RollingHorizonPolicy>;

std::string policy_name(const Policy& p);

/// Shock selection rules for forward simulation.
struct ConstantShock {
    double shock;
};
struct WorstGreedy {};  ///< the low support endpoint every year
struct GivenSequence {
    std::vector<double> shocks;  ///< one per simulated year
};
using ShockRule = std::variant<ConstantShock, WorstGreedy, GivenSequence>;

/// Shared evaluation state; caches rolling-horizon solves by lookahead.
class EvalContext {
public:
    EvalContext(BioModel bio, EconModel econ, Grid grid);

    const BioModel& bio() const { return bio_; }
    const EconModel& econ() const { return econ_; }
    const Grid& grid() const { return grid_; }

    const ThresholdSchedule& rolling_schedule(int lookahead) const;

private:
    BioModel bio_;
    EconModel econ_;
    Grid grid_;
    mutable std::map<int, ThresholdSchedule> rolling_cache_;
};

/// Harvest prescribed by a policy in year `year` (1-based) of a
/// `total_years`-long run at stock level x.
double apply_policy(const Policy& policy, double x, int year, int total_years,
                    const EvalContext& ctx);

struct TrajectoryYear {
    int year = 0;
    double stock_before = 0;
    double harvest = 0;
    double shock = 0;
    double stock_after = 0;
    double discounted_utility = 0;  ///< alpha^(year-1) * harvest utility
};

struct Trajectory {
    std::vector<TrajectoryYear> years;
    double total = 0;  ///< sum of the discounted utilities
};

/// Roll the dynamics forward under a policy and a shock rule; admissibility
/// is enforced every year.
Trajectory simulate(const Policy& policy, double x1, Horizon years,
                    const ShockRule& shocks, const EvalContext& ctx);

/// Exact adversarial value of a fixed policy: backward induction over the
/// grid, nature minimizing over the discretized shock support each year.
/// Lower-bounds the value of the same policy under any simulated shock
/// sequence drawn from the support (up to interpolation error).
double worst_case_value(const Policy& policy, double x1, Horizon years,
                        const EvalContext& ctx, int shock_points = 5);

struct ComparisonRow {
    std::string name;
    double adversarial = 0;       ///< exact worst-case value (backward DP)
    double simulated = 0;         ///< value under the constant-low realization
    double adversarial_loss = 0;  ///< best adversarial value minus this row's
    double simulated_loss = 0;
};

/// Worst-case comparison of candidate policies from a common initial stock,
/// under both evaluation mechanisms. Losses are taken against the best row
/// of each column.
std::vector<ComparisonRow> compare(
    const std::vector<std::pair<std::string, Policy>>& policies, double x1,
    Horizon years, const EvalContext& ctx, int shock_points = 5);

}  // namespace ssp
