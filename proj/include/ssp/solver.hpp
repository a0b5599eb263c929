#pragma once

#include <cstdint>
#include <vector>

#include "ssp/kconcave.hpp"
#include "ssp/model.hpp"
#include "ssp/stage.hpp"

namespace ssp {

/// Per-stage optimal value functions C_n sampled on the grid, n = 0..N
/// periods remaining, C_0 identically zero. Values are worst-case discounted
/// revenues with the first remaining season undiscounted (weights
/// alpha^0..alpha^(n-1)); off-node queries interpolate linearly.
struct ValueTable {
    Grid grid;
    std::vector<std::vector<double>> stages;

    int horizon() const { return static_cast<int>(stages.size()) - 1; }
    const std::vector<double>& at(int n) const { return stages.at(n); }
    double value(int n, double x) const {
        return grid.interpolate(stages.at(n), x);
    }
};

/// The solved non-stationary policy: one (S, s) pair per remaining-period
/// count. Year t of an N-year problem uses the pair with N - t + 1 periods
/// remaining.
struct ThresholdSchedule {
    std::vector<Thresholds> by_remaining;  ///< [0] holds the 1-remaining pair

    int horizon() const { return static_cast<int>(by_remaining.size()); }
    const Thresholds& remaining(int n) const { return by_remaining.at(n - 1); }
    const Thresholds& year(int t) const {
        return by_remaining.at(by_remaining.size() - t);
    }
};

struct StageStats {
    std::uint64_t p_evals = 0;           ///< candidate evaluations of P_n
    std::uint64_t value_interps = 0;     ///< value-function interpolations
    std::uint64_t bisection_interps = 0; ///< interpolations during bisection
    bool monotone_shortcut = false;      ///< adversary collapsed to shock_lo
    bool bisection_fallback = false;     ///< non-monotone predicate, scanned
    double wall_ms = 0;
};

struct SolverStats {
    std::vector<StageStats> stages;
    std::uint64_t total_p_evals() const;
    std::uint64_t total_value_interps() const;
    std::uint64_t total_bisection_interps() const;
};

struct SolveResult {
    ValueTable values;
    ThresholdSchedule thresholds;
    /// P_n sampled on the grid, [0] is n = 1. The node-0 entry is -inf when
    /// the revenue diverges at zero (harvest-to-zero is never a candidate).
    std::vector<std::vector<double>> p_tables;
    /// Dense solver only: optimal post-harvest stock per (stage, node).
    std::vector<std::vector<double>> policy_target;
    SolverStats stats;
};

struct SolveOptions {
    int shock_points = 5;
    /// Replace the min over shocks by the low endpoint whenever the previous
    /// stage value verified nondecreasing (exact under that certificate).
    bool monotone_shortcut = true;
};

/// Reference solver: per state, one backward-induction maximization over all
/// admissible post-harvest stocks, evaluated through a prefix maximum of P_n
/// (linear work per stage).
SolveResult solve_dense(const StageProblem& prob, Horizon horizon,
                        SolveOptions opts = {});

/// Structure-exploiting solver: one global argmax of P_n for S_n, bisection
/// for s_n, and closed-form reconstruction of the stage value above the
/// trigger. Produces node-identical thresholds and values to solve_dense
/// whenever the stage functions have the threshold structure; otherwise the
/// affected stage falls back to the dense rule and is flagged.
SolveResult solve_fast(const StageProblem& prob, Horizon horizon,
                       SolveOptions opts = {});

SolveResult solve_dense(const BioModel& bio, const EconModel& econ,
                        const Grid& grid, Horizon horizon,
                        SolveOptions opts = {});
SolveResult solve_fast(const BioModel& bio, const EconModel& econ,
                       const Grid& grid, Horizon horizon,
                       SolveOptions opts = {});

/// P_n(z) = -R_rel(z) + alpha * min over shocks of C_{n-1}(recruit(z, shock)),
/// the harvest-target preference function of stage n (1 <= n <= N).
double p_fn(int n, double z, const ValueTable& values,
            const StageProblem& prob);

/// First-year action of a freshly solved lookahead-period problem: harvest
/// nothing at or below the trigger, otherwise down to the target.
double rolling_horizon_action(double x, const BioModel& bio,
                              const EconModel& econ, const Grid& grid,
                              Horizon lookahead);

}  // namespace ssp
