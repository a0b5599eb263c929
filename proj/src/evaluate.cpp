#include "ssp/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ssp/stage.hpp"

namespace ssp {

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

}  // namespace

std::string policy_name(const Policy& p) {
    struct Namer {
        std::string operator()(const ThresholdPolicy&) const {
            return "threshold";
        }
        std::string operator()(const ProportionalPolicy& q) const {
            return "cpp a=" + fmt(q.rate);
        }
        std::string operator()(const SequencePolicy&) const {
            return "sequence";
        }
        std::string operator()(const RollingHorizonPolicy& q) const {
            return "rolling L=" + std::to_string(q.lookahead);
        }
    };
    return std::visit(Namer{}, p);
}

EvalContext::EvalContext(BioModel bio, EconModel econ, Grid grid)
    : bio_(bio), econ_(econ), grid_(grid) {}

const ThresholdSchedule& EvalContext::rolling_schedule(int lookahead) const {
    auto it = rolling_cache_.find(lookahead);
    if (it == rolling_cache_.end()) {
        auto res = solve_fast(bio_, econ_, grid_, Horizon(lookahead));
        it = rolling_cache_.emplace(lookahead, std::move(res.thresholds)).first;
    }
    return it->second;
}

double apply_policy(const Policy& policy, double x, int year, int total_years,
                    const EvalContext& ctx) {
    if (x < 0.0) throw validation_error("apply_policy: negative stock");
    if (year < 1 || year > total_years)
        throw validation_error("apply_policy: year outside the run");

    struct Apply {
        double x;
        int year, total_years;
        const EvalContext& ctx;

        double operator()(const ThresholdPolicy& p) const {
            const int remaining = total_years - year + 1;
            if (remaining > p.schedule.horizon())
                throw validation_error(
                    "threshold policy: year beyond the solved schedule");
            const Thresholds& th = p.schedule.remaining(remaining);
            return x <= th.trigger ? 0.0 : x - th.harvest_to;
        }
        double operator()(const ProportionalPolicy& p) const {
            if (p.rate < 0.0 || p.rate > 1.0)
                throw validation_error("proportional policy: rate outside [0, 1]");
            return p.rate * x;
        }
        double operator()(const SequencePolicy& p) const {
            if (static_cast<std::size_t>(year) > p.fractions.size())
                throw validation_error(
                    "sequence policy: year beyond the fraction list");
            const double f = p.fractions[year - 1];
            if (f < 0.0 || f > 1.0)
                throw validation_error(
                    "sequence policy: fraction outside [0, 1] in year " +
                    std::to_string(year));
            return f * x;
        }
        double operator()(const RollingHorizonPolicy& p) const {
            const Thresholds& th = ctx.rolling_schedule(p.lookahead).year(1);
            return x <= th.trigger ? 0.0 : x - th.harvest_to;
        }
    };
    return std::visit(Apply{x, year, total_years, ctx}, policy);
}

namespace {

double shock_for_year(const ShockRule& rule, int year, const BioModel& bio) {
    struct Pick {
        int year;
        const BioModel& bio;
        double operator()(const ConstantShock& r) const {
            if (r.shock < bio.shock_lo || r.shock > bio.shock_hi)
                throw validation_error("shock rule: constant outside support");
            return r.shock;
        }
        double operator()(const WorstGreedy&) const { return bio.shock_lo; }
        double operator()(const GivenSequence& r) const {
            if (static_cast<std::size_t>(year) > r.shocks.size())
                throw validation_error("shock rule: sequence shorter than run");
            const double w = r.shocks[year - 1];
            if (w < bio.shock_lo || w > bio.shock_hi)
                throw validation_error("shock rule: value outside support");
            return w;
        }
    };
    return std::visit(Pick{year, bio}, rule);
}

}  // namespace

Trajectory simulate(const Policy& policy, double x1, Horizon years,
                    const ShockRule& shocks, const EvalContext& ctx) {
    if (x1 < 0.0 || x1 > ctx.grid().x_max())
        throw validation_error("simulate: initial stock outside [0, x_max]");
    Trajectory traj;
    traj.years.reserve(years.periods);
    double x = x1;
    double weight = 1.0;  // alpha^(year-1)
    for (int t = 1; t <= years.periods; ++t) {
        const double h = apply_policy(policy, x, t, years.periods, ctx);
        if (h < 0.0 || h > x)
            throw validation_error("simulate: inadmissible harvest in year " +
                                   std::to_string(t));
        const double w = shock_for_year(shocks, t, ctx.bio());
        const double u = harvest_utility(x, h, ctx.grid(), ctx.econ());
        TrajectoryYear yr;
        yr.year = t;
        yr.stock_before = x;
        yr.harvest = h;
        yr.shock = w;
        yr.stock_after = recruit(x - h, w, ctx.bio());
        yr.discounted_utility = weight * u;
        traj.total += yr.discounted_utility;
        traj.years.push_back(yr);
        x = yr.stock_after;
        weight *= ctx.econ().discount_factor();
    }
    return traj;
}

double worst_case_value(const Policy& policy, double x1, Horizon years,
                        const EvalContext& ctx, int shock_points) {
    const Grid& grid = ctx.grid();
    if (x1 < 0.0 || x1 > grid.x_max())
        throw validation_error("worst_case_value: initial stock outside grid");
    const auto shocks = discretize_shocks(ctx.bio(), shock_points);
    const double alpha = ctx.econ().discount_factor();
    const std::size_t n = grid.size();

    std::vector<double> value(n, 0.0), next(n);
    // n_remaining periods left <=> policy year = years - n_remaining + 1
    for (int remaining = 1; remaining <= years.periods; ++remaining) {
        const int year = years.periods - remaining + 1;
        for (std::size_t i = 0; i < n; ++i) {
            const double x = grid.node(i);
            const double h = apply_policy(policy, x, year, years.periods, ctx);
            if (h < 0.0 || h > x)
                throw validation_error(
                    "worst_case_value: inadmissible harvest in year " +
                    std::to_string(year));
            const double z = x - h;
            double u;
            if (h == 0.0) {
                u = 0.0;
            } else if (z == 0.0 && ctx.econ().elasticity >= 1.0) {
                // Exhausting the stock costs unbounded effort.
                u = -std::numeric_limits<double>::infinity();
            } else {
                u = harvest_utility(x, h, grid, ctx.econ());
            }
            double worst = std::numeric_limits<double>::infinity();
            for (double w : shocks)
                worst = std::min(
                    worst, grid.interpolate(value, recruit(z, w, ctx.bio())));
            next[i] = u + alpha * worst;
        }
        value.swap(next);
    }
    return grid.interpolate(value, x1);
}

std::vector<ComparisonRow> compare(
    const std::vector<std::pair<std::string, Policy>>& policies, double x1,
    Horizon years, const EvalContext& ctx, int shock_points) {
    std::vector<ComparisonRow> rows;
    rows.reserve(policies.size());
    for (const auto& [name, policy] : policies) {
        ComparisonRow row;
        row.name = name;
        row.adversarial = worst_case_value(policy, x1, years, ctx, shock_points);
        row.simulated = simulate(policy, x1, years, WorstGreedy{}, ctx).total;
        rows.push_back(std::move(row));
    }
    double best_adv = -std::numeric_limits<double>::infinity();
    double best_sim = best_adv;
    for (const auto& r : rows) {
        best_adv = std::max(best_adv, r.adversarial);
        best_sim = std::max(best_sim, r.simulated);
    }
    for (auto& r : rows) {
        r.adversarial_loss = best_adv - r.adversarial;
        r.simulated_loss = best_sim - r.simulated;
    }
    return rows;
}

}  // namespace ssp
