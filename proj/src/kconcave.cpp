#include "ssp/kconcave.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace ssp {

SampledFunction::SampledFunction(std::vector<double> nodes_,
                                 std::vector<double> values_)
    : nodes(std::move(nodes_)), values(std::move(values_)) {
    if (nodes.size() != values.size())
        throw validation_error("sampled function: nodes/values length mismatch");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!std::isfinite(nodes[i]) || !std::isfinite(values[i]))
            throw validation_error("sampled function: non-finite sample");
        if (i > 0 && nodes[i] <= nodes[i - 1])
            throw validation_error("sampled function: nodes must be strictly ascending");
    }
}

double default_k_tolerance(double fixed_cost) {
    return 1e-6 * std::max(1.0, std::abs(fixed_cost));
}

namespace {

void check_inputs(const SampledFunction& f, double fixed_cost) {
    if (f.size() < 3)
        throw validation_error("k-concavity check needs at least 3 nodes");
    if (!(fixed_cost >= 0.0))
        throw validation_error("k-concavity check: K must be nonnegative");
}

ConcavityReport finish(double worst, SecantTriple witness, double fixed_cost,
                       double tol) {
    ConcavityReport rep;
    rep.worst_slack = worst - fixed_cost;
    rep.witness = witness;
    rep.is_k_concave = rep.worst_slack <= tol;
    return rep;
}

}  // namespace

ConcavityReport check_k_concave(const SampledFunction& f, double fixed_cost,
                                double tol) {
    check_inputs(f, fixed_cost);
    const auto& x = f.nodes;
    const auto& v = f.values;
    const std::size_t n = f.size();
    double worst = -std::numeric_limits<double>::infinity();
    SecantTriple wit;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        for (std::size_t k = j + 1; k < n; ++k) {
            const double chord = (v[k] - v[j]) / (x[k] - x[j]);
            // slack over x_i < x_j: v[i] - v[j] + (x_j - x_i) * chord
            for (std::size_t i = 0; i < j; ++i) {
                const double slack = v[i] - v[j] + (x[j] - x[i]) * chord;
                if (slack > worst) {
                    worst = slack;
                    wit = {x[i], x[j], x[k] - x[j]};
                }
            }
        }
    }
    return finish(worst, wit, fixed_cost, tol);
}

ConcavityReport check_k_concave(const SampledFunction& f, double fixed_cost) {
    return check_k_concave(f, fixed_cost, default_k_tolerance(fixed_cost));
}

ConcavityReport check_k_concave_screened(const SampledFunction& f,
                                         double fixed_cost, double tol) {
    check_inputs(f, fixed_cost);
    const auto& x = f.nodes;
    const auto& v = f.values;
    const std::size_t n = f.size();
    double worst = -std::numeric_limits<double>::infinity();
    SecantTriple wit;
    for (std::size_t j = 1; j + 1 < n; ++j) {
        // For a fixed pivot y = x_j the slack is maximized by the steepest
        // right secant, independently of the left point.
        double rs = -std::numeric_limits<double>::infinity();
        std::size_t rs_k = j + 1;
        for (std::size_t k = j + 1; k < n; ++k) {
            const double chord = (v[k] - v[j]) / (x[k] - x[j]);
            if (chord > rs) {
                rs = chord;
                rs_k = k;
            }
        }
        for (std::size_t i = 0; i < j; ++i) {
            const double slack = v[i] - v[j] + (x[j] - x[i]) * rs;
            if (slack > worst) {
                worst = slack;
                wit = {x[i], x[j], x[rs_k] - x[j]};
            }
        }
    }
    return finish(worst, wit, fixed_cost, tol);
}

double tau(const EconModel& econ, const Grid& grid) {
    const double span = grid.x_max() - grid.x_ref();
    const double g_top = marginal_cost(grid.x_max(), econ);
    // closed-form integral of g over [x_ref, x_max]
    const double b = econ.elasticity;
    double integral;
    if (b == 1.0) {
        integral = econ.effort_cost * std::log(grid.x_max() / grid.x_ref()) /
                   econ.catchability;
    } else {
        const double e = 1.0 - b;
        integral = econ.effort_cost *
                   (std::pow(grid.x_max(), e) - std::pow(grid.x_ref(), e)) /
                   (econ.catchability * e);
    }
    return integral - span * g_top;
}

Condition8Report condition8_from_tau(double tau_value, double fixed_cost,
                                     double discount_factor) {
    Condition8Report rep;
    rep.tau = tau_value;
    rep.bound = fixed_cost * (1.0 - discount_factor) / discount_factor;
    rep.k_lo = (fixed_cost + tau_value) * discount_factor;
    rep.k_hi = fixed_cost;
    rep.holds = tau_value < rep.bound;
    return rep;
}

Condition8Report condition8(const EconModel& econ, const Grid& grid) {
    return condition8_from_tau(tau(econ, grid), econ.fixed_cost,
                               econ.discount_factor());
}

Thresholds extract_thresholds(const SampledFunction& p, double fixed_cost) {
    if (p.size() == 0)
        throw validation_error("extract_thresholds: empty sample");
    const auto& v = p.values;
    std::size_t s_max = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] >= v[s_max]) s_max = i;  // largest maximizer
    const double level = v[s_max] - fixed_cost;
    std::size_t trig = s_max;
    for (std::size_t i = v.size(); i-- > s_max;) {
        if (v[i] >= level) {
            trig = i;
            break;
        }
    }
    return {p.nodes[s_max], p.nodes[trig]};
}

}  // namespace ssp
