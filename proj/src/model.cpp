#include "ssp/model.hpp"

#include <algorithm>
#include <cmath>

namespace ssp {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw validation_error(msg);
}

}  // namespace

BioModel::BioModel(double mortality_, double r0_, double half_saturation_,
                   double shock_lo_, double shock_hi_)
    : mortality(mortality_),
      r0(r0_),
      half_saturation(half_saturation_),
      shock_lo(shock_lo_),
      shock_hi(shock_hi_) {
    require(std::isfinite(mortality) && mortality >= 0.0 && mortality < 1.0,
            "bio.mortality must lie in [0, 1)");
    require(std::isfinite(r0) && r0 > 0.0, "bio.r0 must be positive");
    require(std::isfinite(half_saturation) && half_saturation > 0.0,
            "bio.half_saturation must be positive");
    require(std::isfinite(shock_lo) && std::isfinite(shock_hi) &&
                0.0 < shock_lo && shock_lo <= shock_hi,
            "bio.shock_lo/shock_hi must satisfy 0 < shock_lo <= shock_hi");
    require(shock_lo * r0 > mortality,
            "bio.shock_lo * r0 must exceed mortality (worst-case carrying "
            "capacity would not be positive)");
}

EconModel::EconModel(double price_, double fixed_cost_, double effort_cost_,
                     double catchability_, double elasticity_,
                     double discount_rate_)
    : price(price_),
      fixed_cost(fixed_cost_),
      effort_cost(effort_cost_),
      catchability(catchability_),
      elasticity(elasticity_),
      discount_rate(discount_rate_) {
    require(std::isfinite(price) && price > 0.0, "econ.price must be positive");
    require(std::isfinite(fixed_cost) && fixed_cost > 0.0,
            "econ.fixed_cost must be positive");
    require(std::isfinite(effort_cost) && effort_cost > 0.0,
            "econ.effort_cost must be positive");
    require(std::isfinite(catchability) && catchability > 0.0,
            "econ.catchability must be positive");
    require(std::isfinite(elasticity) && elasticity > 0.0,
            "econ.elasticity must be positive");
    require(std::isfinite(discount_rate) && discount_rate > 0.0,
            "econ.discount_rate must be positive");
}

Grid::Grid(double x_max, double step) : Grid(x_max, step, step) {}

Grid::Grid(double x_max, double step, double x_ref)
    : x_max_(x_max), step_(step), x_ref_(x_ref) {
    require(std::isfinite(step_) && step_ > 0.0, "grid.step must be positive");
    require(std::isfinite(x_max_) && x_max_ >= 2.0 * step_,
            "grid.x_max must be at least two steps");
    require(std::isfinite(x_ref_) && 0.0 < x_ref_ && x_ref_ <= x_max_,
            "grid.x_ref must lie in (0, x_max]");
    size_ = static_cast<std::size_t>(std::floor(x_max_ / step_ + 1e-9)) + 1;
}

double Grid::clamp(double x) const { return std::clamp(x, 0.0, x_max_); }

std::size_t Grid::cell_index(double x) const {
    auto i = static_cast<std::ptrdiff_t>(x / step_);
    i = std::clamp<std::ptrdiff_t>(i, 0, static_cast<std::ptrdiff_t>(size_) - 2);
    return static_cast<std::size_t>(i);
}

double Grid::interpolate(std::span<const double> values, double x) const {
    x = clamp(x);
    const std::size_t i = cell_index(x);
    const double frac = (x - node(i)) / step_;
    // endpoint-exact form: node hits return the stored sample bit-for-bit
    return values[i] * (1.0 - frac) + values[i + 1] * frac;
}

Horizon::Horizon(int p) : periods(p) {
    require(p >= 1, "horizon must be at least one period");
}

double recruit(double escapement, double shock, const BioModel& bio) {
    require(escapement >= 0.0, "recruit: escapement must be nonnegative");
    require(shock >= bio.shock_lo && shock <= bio.shock_hi,
            "recruit: shock outside the support");
    const double growth =
        shock * bio.r0 * escapement / (1.0 + escapement / bio.half_saturation);
    return (1.0 - bio.mortality) * escapement + growth;
}

double carrying_capacity(double shock, const BioModel& bio) {
    const double net = shock * bio.r0 - bio.mortality;
    if (net <= 0.0) return 0.0;
    return bio.half_saturation * net / bio.mortality;
}

double marginal_cost(double stock, const EconModel& econ) {
    if (stock <= 0.0)
        throw validation_error("marginal_cost: stock must be positive");
    return econ.effort_cost /
           (econ.catchability * std::pow(stock, econ.elasticity));
}

double effort(double stock_before, double harvest, const EconModel& econ) {
    require(harvest >= 0.0 && harvest <= stock_before,
            "effort: harvest must lie in [0, stock]");
    if (harvest == 0.0) return 0.0;
    const double b = econ.elasticity;
    const double z = stock_before - harvest;
    if (z <= 0.0 && b >= 1.0)
        throw validation_error(
            "effort: exhausting the stock requires unbounded effort (b >= 1)");
    if (b == 1.0)
        return std::log(stock_before / z) / econ.catchability;
    const double e = 1.0 - b;
    return (std::pow(stock_before, e) - std::pow(z, e)) /
           (econ.catchability * e);
}

double zero_profit_level(const EconModel& econ) {
    return std::pow(econ.effort_cost / (econ.catchability * econ.price),
                    1.0 / econ.elasticity);
}

namespace {

// Signed cost integral of the marginal cost from x_ref to x.
double cost_rel(double x, double x_ref, const EconModel& econ) {
    const double b = econ.elasticity;
    if (b == 1.0)
        return econ.effort_cost * std::log(x / x_ref) / econ.catchability;
    const double e = 1.0 - b;
    return econ.effort_cost * (std::pow(x, e) - std::pow(x_ref, e)) /
           (econ.catchability * e);
}

}  // namespace

double revenue_rel(double stock, const Grid& grid, const EconModel& econ) {
    if (stock <= 0.0) {
        if (econ.elasticity >= 1.0)
            throw validation_error(
                "revenue_rel: diverges at zero stock for b >= 1");
        if (stock < 0.0)
            throw validation_error("revenue_rel: stock must be nonnegative");
    }
    return econ.price * (stock - grid.x_ref()) -
           cost_rel(stock, grid.x_ref(), econ);
}

double harvest_utility(double stock, double harvest, const Grid& grid,
                       const EconModel& econ) {
    require(harvest >= 0.0 && harvest <= stock,
            "harvest_utility: harvest must lie in [0, stock]");
    if (harvest == 0.0) return 0.0;
    return revenue_rel(stock, grid, econ) -
           revenue_rel(stock - harvest, grid, econ) - econ.fixed_cost;
}

}  // namespace ssp
