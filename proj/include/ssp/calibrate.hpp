#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ssp/model.hpp"

namespace ssp {

/// One year of fishery observations: biomass and harvest in 10^6 pounds,
/// effort in 10^3 skate-soaks.
struct FisheryRecord {
    int year = 0;
    double biomass = 0;
    double harvest = 0;
    double effort = 0;
};

/// Read `year,biomass,harvest,effort` CSV (header required). Malformed rows
/// report their line number; invariant violations name the field and year.
std::vector<FisheryRecord> load_series(const std::string& path);
std::vector<FisheryRecord> parse_series(std::istream& in,
                                        const std::string& origin);

/// Search brackets for the deterministic fitting routines.
struct FitBounds {
    double m_lo = 1.0;        ///< half-saturation lower bound
    double m_hi_factor = 10;  ///< upper bound = factor * max biomass
    double b_lo = 1e-3;       ///< elasticity bracket
    double b_hi = 6.0;
    double rel_tol = 1e-10;   ///< bracket refinement target
};

struct RecruitmentFit {
    double r0 = 0;
    double half_saturation = 0;
    std::vector<double> residuals;
    double rmse = 0;
    bool converged = false;
};

struct EffortFit {
    double catchability = 0;
    double elasticity = 0;
    std::vector<double> residuals;
    double rmse = 0;
    bool converged = false;
};

/// Least-squares fit of the reproduction parameters (r0, M) to consecutive
/// (escapement, next-biomass) pairs, the mortality pinned externally. For a
/// fixed M the model is linear in r0, so the search is a bracketed
/// one-dimensional minimization over M with the profiled closed-form r0.
RecruitmentFit fit_recruitment(const std::vector<FisheryRecord>& series,
                               double mortality_fixed, FitBounds bounds = {});

/// Least-squares fit of the effort parameters (q, b). For a fixed b the model
/// is linear in 1/q (closed form); a bracketed scalar search runs over b.
EffortFit fit_effort(const std::vector<FisheryRecord>& series,
                     FitBounds bounds = {});

struct ShockSupportEstimate {
    double lo = 0;
    double hi = 0;
    std::vector<double> shocks;  ///< per-pair realized shock estimates
    int skipped = 0;             ///< pairs dropped for zero escapement
};

/// Realized-shock estimates from consecutive pairs under a fitted model:
/// w_t = (x_{t+1} - (1-m) s_t) / (r0 s_t / (1 + s_t / M)); the support is
/// their min/max envelope. Takes the fitted numbers directly so it can run
/// before a full BioModel (which requires the support) exists.
ShockSupportEstimate estimate_shock_support(
    const std::vector<FisheryRecord>& series, double mortality, double r0,
    double half_saturation);
ShockSupportEstimate estimate_shock_support(
    const std::vector<FisheryRecord>& series, const BioModel& bio);

/// Deterministic synthetic series generated from a model: varying harvest
/// fractions, shocks drawn from the support with both endpoints realized,
/// effort from the closed form. Stands in for the withheld historical data
/// in demos and round-trip tests.
std::vector<FisheryRecord> synthetic_series(const BioModel& bio,
                                            const EconModel& econ, double x1,
                                            int years, int first_year,
                                            std::uint32_t seed);

}  // namespace ssp
