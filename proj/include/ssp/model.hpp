#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>

namespace ssp {

/// Raised when an input violates a documented invariant. The message names
/// the offending field.
class validation_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when a computation produces a non-finite intermediate; the message
/// carries stage/node context where available.
class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Beverton-Holt population dynamics with a bounded multiplicative shock on
/// the recruitment term. Stocks are measured in 10^6 pounds throughout.
///
/// Construction rejects parameter sets whose worst-case carrying capacity is
/// not strictly positive (shock_lo * r0 <= mortality): under that regime the
/// resource collapses no matter the policy and the harvesting game is
/// degenerate.
struct BioModel {
    double mortality;        ///< natural mortality per season, in [0, 1)
    double r0;               ///< recruitment rate
    double half_saturation;  ///< stock scale of the saturating recruitment term
    double shock_lo;         ///< lower bound of the recruitment shock support
    double shock_hi;         ///< upper bound of the recruitment shock support

    BioModel(double mortality, double r0, double half_saturation,
             double shock_lo, double shock_hi);
};

/// Harvesting economics: linear revenue, a fixed cost per harvesting event,
/// and a stock-dependent marginal cost c / (q * x^b). Money in dollars,
/// effort in 10^3 skate-soaks.
struct EconModel {
    double price;          ///< $ per 10^6 pounds landed
    double fixed_cost;     ///< $ per harvesting event
    double effort_cost;    ///< $ per 10^3 skate-soaks
    double catchability;   ///< effort-model coefficient q
    double elasticity;     ///< effort-model exponent b
    double discount_rate;  ///< per period

    EconModel(double price, double fixed_cost, double effort_cost,
              double catchability, double elasticity, double discount_rate);

    double discount_factor() const { return 1.0 / (1.0 + discount_rate); }
};

/// Evenly spaced stock grid on [0, x_max] with a strictly positive reference
/// level anchoring the relative cost integrals. Nodes are i * step.
class Grid {
public:
    Grid(double x_max, double step);              // x_ref defaults to step
    Grid(double x_max, double step, double x_ref);

    double x_max() const { return x_max_; }
    double step() const { return step_; }
    double x_ref() const { return x_ref_; }
    std::size_t size() const { return size_; }
    double node(std::size_t i) const { return static_cast<double>(i) * step_; }

    /// Clamp a stock level into [0, x_max].
    double clamp(double x) const;

    /// Piecewise-linear interpolation of node-sampled values at x (clamped).
    double interpolate(std::span<const double> values, double x) const;

    /// Index of the interpolation cell containing x, in [0, size-2].
    std::size_t cell_index(double x) const;

private:
    double x_max_, step_, x_ref_;
    std::size_t size_;
};

/// Number of seasons in a finite planning problem.
struct Horizon {
    int periods;
    explicit Horizon(int p);
};

/// Next-season stock from an escapement under a multiplicative recruitment
/// shock: (1-m)*s + w*r0*s/(1 + s/M). Nondecreasing and concave in s,
/// nondecreasing in w.
double recruit(double escapement, double shock, const BioModel& bio);

/// Positive fixed point of s -> recruit(s, shock): M*(w*r0 - m)/m.
/// Returns 0 when w*r0 <= m (the dynamics have no positive fixed point).
double carrying_capacity(double shock, const BioModel& bio);

/// Marginal harvesting cost c/(q*x^b) at stock level x > 0.
double marginal_cost(double stock, const EconModel& econ);

/// Effort required to harvest an amount from a starting stock, the closed
/// form of the marginal-effort integral. Zero-harvest costs nothing; with
/// b >= 1 exhausting the stock entirely takes unbounded effort and is
/// rejected.
double effort(double stock_before, double harvest, const EconModel& econ);

/// Stock level at which the marginal cost equals the price; harvesting below
/// it is unprofitable.
double zero_profit_level(const EconModel& econ);

/// Revenue-of-stock anchored at the grid reference level:
///   R_rel(x) = p*(x - x_ref) - integral of the marginal cost from x_ref to x.
/// Only differences R_rel(x) - R_rel(z) are economically meaningful; the
/// anchor keeps every value finite for b >= 1, where the unanchored integral
/// diverges at zero. R_rel(x_ref) = 0.
double revenue_rel(double stock, const Grid& grid, const EconModel& econ);

/// Utility of harvesting `harvest` out of `stock` in one event:
/// R_rel(x) - R_rel(x - h) - K for h > 0, zero for h = 0.
double harvest_utility(double stock, double harvest, const Grid& grid,
                       const EconModel& econ);

}  // namespace ssp
