// Test-only oracles: quadrature, brute-force minimax enumeration, and a
// hand-built five-node instance with transitions landing exactly on nodes.
// Everything here is independent of the solver implementation paths it checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <vector>

#include "ssp/model.hpp"
#include "ssp/stage.hpp"

namespace oracles {

// Trapezoid quadrature of the marginal-effort integrand 1/(q y^b) over
// [stock - harvest, stock].
inline double effort_quadrature(double stock, double harvest,
                                const ssp::EconModel& econ, int panels) {
    const double lo = stock - harvest;
    const double h = harvest / panels;
    auto f = [&](double y) {
        return 1.0 / (econ.catchability * std::pow(y, econ.elasticity));
    };
    double sum = 0.5 * (f(lo) + f(stock));
    for (int i = 1; i < panels; ++i) sum += f(lo + i * h);
    return sum * h;
}

// Log-substituted trapezoid: integrand g(e^u) e^u is smooth even where the
// power-law cost explodes toward zero stock.
inline double integrate_marginal_cost(double lo, double hi,
                                      const ssp::EconModel& econ, int panels) {
    const double ulo = std::log(lo), uhi = std::log(hi);
    auto f = [&](double u) {
        const double y = std::exp(u);
        return ssp::marginal_cost(y, econ) * y;
    };
    const double h = (uhi - ulo) / panels;
    double sum = 0.5 * (f(ulo) + f(uhi));
    for (int i = 1; i < panels; ++i) sum += f(ulo + i * h);
    return sum * h;
}

// Five nodes, two periods, two shocks, all transitions on nodes. Revenue is
// convex increasing and finite at zero; the low shock freezes the stock and
// the high shock grows it by one node (capped).
struct Toy {
    std::vector<double> revenue_table{0.0, 4.0, 8.5, 13.5, 19.0};
    ssp::StageProblem problem;

    Toy()
        : problem{ssp::Grid(4.0, 1.0),
                  0.5,
                  6.0,
                  {0.0, 1.0},
                  [](double s, double w) {
                      return w < 0.5 ? s : std::min(s + 1.0, 4.0);
                  },
                  [table = revenue_table](double x) {
                      return table[static_cast<std::size_t>(std::llround(x))];
                  },
                  true} {}
};

// Worst-case optimal value and first-period action by exhaustive enumeration
// over harvest targets and adaptive shock choices. Ties break toward the
// largest target.
struct BruteResult {
    double value;
    double target;  // optimal post-harvest stock for the first period
};

inline BruteResult brute_force_minimax(const ssp::StageProblem& prob,
                                       double x, int periods) {
    if (periods == 0) return {0.0, x};
    const auto& grid = prob.grid;
    double best = -std::numeric_limits<double>::infinity();
    double best_target = x;
    for (std::size_t j = 0; j < grid.size(); ++j) {
        const double z = grid.node(j);
        if (z > x + 1e-12) break;
        double util;
        if (z == x) {
            util = 0.0;
        } else {
            util = prob.revenue(x) - prob.revenue(z) - prob.fixed_cost;
        }
        double worst = std::numeric_limits<double>::infinity();
        for (double w : prob.shocks) {
            const double next = grid.clamp(prob.recruit(z, w));
            worst = std::min(worst,
                             brute_force_minimax(prob, next, periods - 1).value);
        }
        const double total = util + prob.discount_factor * worst;
        if (total >= best) {
            best = total;
            best_target = z;
        }
    }
    return {best, best_target};
}

// Worst case over adaptive shocks of a fixed action sequence is the same as
// the min over all open-loop shock sequences for a deterministic system; this
// enumerates the latter for a fixed policy given as harvest-of-(x, year).
inline double brute_force_policy_min(
    const std::function<double(double, int)>& harvest_of, double x1, int years,
    const std::vector<double>& shocks, const ssp::StageProblem& prob) {
    std::vector<std::size_t> pick(years, 0);
    double worst = std::numeric_limits<double>::infinity();
    const auto total_for = [&]() {
        double x = x1, total = 0.0, weight = 1.0;
        for (int t = 1; t <= years; ++t) {
            const double h = harvest_of(x, t);
            const double z = x - h;
            double util = 0.0;
            if (h > 0.0)
                util = prob.revenue(x) - prob.revenue(z) - prob.fixed_cost;
            total += weight * util;
            weight *= prob.discount_factor;
            x = prob.grid.clamp(prob.recruit(z, shocks[pick[t - 1]]));
        }
        return total;
    };
    while (true) {
        worst = std::min(worst, total_for());
        int i = 0;
        for (; i < years; ++i) {
            if (++pick[i] < shocks.size()) break;
            pick[i] = 0;
        }
        if (i == years) break;
    }
    return worst;
}

// Random model within +-30% of a base parameter set, resampled until the
// invariants hold.
inline std::pair<ssp::BioModel, ssp::EconModel> random_model(
    std::mt19937& rng, const ssp::BioModel& bio0, const ssp::EconModel& econ0) {
    std::uniform_real_distribution<double> jitter(0.7, 1.3);
    for (;;) {
        const double m = bio0.mortality * jitter(rng);
        const double r0 = bio0.r0 * jitter(rng);
        const double M = bio0.half_saturation * jitter(rng);
        const double lo = bio0.shock_lo * jitter(rng);
        const double hi = bio0.shock_hi * jitter(rng);
        if (!(m < 1.0 && lo > 0 && lo <= hi && lo * r0 > m)) continue;
        try {
            ssp::BioModel bio(m, r0, M, lo, hi);
            ssp::EconModel econ(econ0.price * jitter(rng),
                                econ0.fixed_cost * jitter(rng),
                                econ0.effort_cost * jitter(rng),
                                econ0.catchability * jitter(rng),
                                econ0.elasticity * jitter(rng),
                                econ0.discount_rate * jitter(rng));
            return {bio, econ};
        } catch (const ssp::validation_error&) {
        }
    }
}

}  // namespace oracles
