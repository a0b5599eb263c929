#pragma once

#include <cstddef>
#include <vector>

#include "ssp/model.hpp"

namespace ssp {

/// A real function known through samples at strictly ascending nodes.
struct SampledFunction {
    std::vector<double> nodes;
    std::vector<double> values;

    SampledFunction(std::vector<double> nodes, std::vector<double> values);
    std::size_t size() const { return nodes.size(); }
};

/// A secant triple x < y < y+b of the K-concavity definition.
struct SecantTriple {
    double x = 0, y = 0, b = 0;
};

/// Outcome of a K-concavity check over all node triples.
/// worst_slack is the maximum over triples of
///   f(x) - f(y) - (x - y) * (f(y+b) - f(y)) / b  -  K,
/// so the function is K-concave (to tolerance) iff worst_slack <= tol.
struct ConcavityReport {
    bool is_k_concave = true;
    double worst_slack = 0;
    SecantTriple witness;  ///< triple attaining worst_slack
};

/// Default absolute slack tolerance, 1e-6 * max(1, |K|); absorbs the
/// interpolation noise of grid-sampled value functions.
double default_k_tolerance(double fixed_cost);

/// Exhaustive O(n^3) check of Definition-style K-concavity over every grid
/// triple x < y < y+b. Requires at least 3 nodes and K >= 0.
ConcavityReport check_k_concave(const SampledFunction& f, double fixed_cost,
                                double tol);
ConcavityReport check_k_concave(const SampledFunction& f, double fixed_cost);

/// O(n^2) screening that computes the same maximum slack by maximizing the
/// right-secant slope per pivot. Must agree with the exhaustive check.
ConcavityReport check_k_concave_screened(const SampledFunction& f,
                                         double fixed_cost, double tol);

/// Concavity slack constant of the anchored revenue function on
/// [x_ref, x_max]:
///   tau = integral of g over [x_ref, x_max] - (x_max - x_ref) * g(x_max),
/// the tight K for which R_rel restricted to the grid span is K-concave when
/// g is nonincreasing. (The unanchored constant diverges for b >= 1.)
double tau(const EconModel& econ, const Grid& grid);

/// Threshold-optimality sufficient condition: tau < K * (1 - alpha) / alpha,
/// together with the admissible fixed-point interval ((K + tau) * alpha, K),
/// nonempty exactly when the condition holds.
struct Condition8Report {
    double tau = 0;
    double bound = 0;  ///< K * (1 - alpha) / alpha
    double k_lo = 0;   ///< (K + tau) * alpha
    double k_hi = 0;   ///< K
    bool holds = false;
};

Condition8Report condition8(const EconModel& econ, const Grid& grid);
Condition8Report condition8_from_tau(double tau_value, double fixed_cost,
                                     double discount_factor);

/// An (S, s) threshold pair: harvest down to harvest_to exactly when the
/// stock exceeds trigger. Invariant: harvest_to <= trigger.
struct Thresholds {
    double harvest_to = 0;  ///< S
    double trigger = 0;     ///< s
};

/// Read the threshold pair off a sampled K-concave function:
/// S is the largest maximizing node, s the largest node y with
/// P(y) >= P(S) - K. Invariant under adding any constant to P.
Thresholds extract_thresholds(const SampledFunction& p, double fixed_cost);

}  // namespace ssp
