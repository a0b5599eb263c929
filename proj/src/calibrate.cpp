#include "ssp/calibrate.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

namespace ssp {

namespace {

// Golden-section minimization of a unimodal objective on [lo, hi].
// Deterministic; refines until the bracket width drops below rel_tol times
// the midpoint scale.
template <class F>
double golden_min(F&& f, double lo, double hi, double rel_tol) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - (b - a) * inv_phi;
    double d = a + (b - a) * inv_phi;
    double fc = f(c), fd = f(d);
    while (b - a > rel_tol * std::max(1.0, std::abs(a) + std::abs(b))) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - (b - a) * inv_phi;
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + (b - a) * inv_phi;
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

struct Pair {
    double escapement;
    double next_biomass;
};

std::vector<Pair> consecutive_pairs(const std::vector<FisheryRecord>& series) {
    std::vector<Pair> out;
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
        if (series[i + 1].year != series[i].year + 1) continue;
        out.push_back({series[i].biomass - series[i].harvest,
                       series[i + 1].biomass});
    }
    return out;
}

}  // namespace

std::vector<FisheryRecord> parse_series(std::istream& in,
                                        const std::string& origin) {
    std::vector<FisheryRecord> records;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            std::string h = line;
            h.erase(std::remove_if(h.begin(), h.end(),
                                   [](unsigned char c) { return std::isspace(c); }),
                    h.end());
            if (h != "year,biomass,harvest,effort")
                throw validation_error(origin +
                                       ": expected header year,biomass,harvest,effort");
            header_seen = true;
            continue;
        }
        std::istringstream row(line);
        FisheryRecord rec;
        char c1, c2, c3;
        if (!(row >> rec.year >> c1 >> rec.biomass >> c2 >> rec.harvest >> c3 >>
              rec.effort) ||
            c1 != ',' || c2 != ',' || c3 != ',')
            throw validation_error(origin + ": malformed row at line " +
                                   std::to_string(line_no));
        if (!(rec.biomass >= 0.0))
            throw validation_error(origin + ": biomass must be nonnegative (year " +
                                   std::to_string(rec.year) + ")");
        if (!(rec.harvest >= 0.0 && rec.harvest <= rec.biomass))
            throw validation_error(origin +
                                   ": harvest must lie in [0, biomass] (year " +
                                   std::to_string(rec.year) + ")");
        if (!(rec.effort >= 0.0))
            throw validation_error(origin + ": effort must be nonnegative (year " +
                                   std::to_string(rec.year) + ")");
        if (!records.empty() && rec.year <= records.back().year)
            throw validation_error(origin +
                                   ": years must be strictly increasing (year " +
                                   std::to_string(rec.year) + ")");
        records.push_back(rec);
    }
    if (records.empty()) throw validation_error(origin + ": no records");
    return records;
}

std::vector<FisheryRecord> load_series(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open series file: " + path);
    return parse_series(in, path);
}

RecruitmentFit fit_recruitment(const std::vector<FisheryRecord>& series,
                               double mortality_fixed, FitBounds bounds) {
    if (!(mortality_fixed >= 0.0 && mortality_fixed < 1.0))
        throw validation_error("fit_recruitment: mortality must lie in [0, 1)");
    const auto pairs = consecutive_pairs(series);
    if (pairs.size() < 4)
        throw validation_error(
            "fit_recruitment: need at least 4 consecutive-year pairs");

    double s_min = pairs.front().escapement, s_max = s_min;
    double biomass_max = 0;
    for (const auto& pr : pairs) {
        s_min = std::min(s_min, pr.escapement);
        s_max = std::max(s_max, pr.escapement);
        biomass_max = std::max(biomass_max, pr.next_biomass);
    }
    if (s_max - s_min <= 1e-9 * std::max(1.0, s_max))
        throw validation_error(
            "fit_recruitment: escapements are constant, (r0, M) not "
            "identifiable (rank-deficient)");

    // Profiled closed-form r0 for a fixed M.
    auto r0_for = [&](double m_scale) {
        double num = 0, den = 0;
        for (const auto& pr : pairs) {
            const double u = pr.escapement / (1.0 + pr.escapement / m_scale);
            const double d =
                pr.next_biomass - (1.0 - mortality_fixed) * pr.escapement;
            num += u * d;
            den += u * u;
        }
        return den > 0 ? num / den : 0.0;
    };
    auto sse_for = [&](double m_scale) {
        const double r0 = r0_for(m_scale);
        double sse = 0;
        for (const auto& pr : pairs) {
            const double pred =
                (1.0 - mortality_fixed) * pr.escapement +
                r0 * pr.escapement / (1.0 + pr.escapement / m_scale);
            const double res = pr.next_biomass - pred;
            sse += res * res;
        }
        return sse;
    };

    // Coarse log-spaced bracket, then golden-section refinement.
    const double m_lo = bounds.m_lo;
    const double m_hi = bounds.m_hi_factor * biomass_max;
    const int coarse = 200;
    double best_m = m_lo, best_sse = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= coarse; ++i) {
        const double m_scale =
            m_lo * std::pow(m_hi / m_lo, static_cast<double>(i) / coarse);
        const double sse = sse_for(m_scale);
        if (sse < best_sse) {
            best_sse = sse;
            best_m = m_scale;
        }
    }
    const double lo = best_m / std::pow(m_hi / m_lo, 1.5 / coarse);
    const double hi = best_m * std::pow(m_hi / m_lo, 1.5 / coarse);
    const double m_star = golden_min(sse_for, std::max(m_lo, lo),
                                     std::min(m_hi, hi), bounds.rel_tol);

    RecruitmentFit fit;
    fit.half_saturation = m_star;
    fit.r0 = r0_for(m_star);
    for (const auto& pr : pairs) {
        const double pred = (1.0 - mortality_fixed) * pr.escapement +
                            fit.r0 * pr.escapement /
                                (1.0 + pr.escapement / m_star);
        fit.residuals.push_back(pr.next_biomass - pred);
    }
    double sse = 0;
    for (double r : fit.residuals) sse += r * r;
    fit.rmse = std::sqrt(sse / fit.residuals.size());
    fit.converged = fit.r0 > 0.0 && m_star > m_lo * 1.0000001 &&
                    m_star < m_hi * 0.9999999 && sse <= best_sse + 1e-12;
    return fit;
}

EffortFit fit_effort(const std::vector<FisheryRecord>& series,
                     FitBounds bounds) {
    struct Obs {
        double stock, escapement, effort;
    };
    std::vector<Obs> obs;
    for (const auto& rec : series) {
        if (rec.harvest <= 0.0) continue;
        if (rec.biomass - rec.harvest <= 0.0)
            throw validation_error(
                "fit_effort: record with zero escapement (year " +
                std::to_string(rec.year) + ") has no finite effort integral");
        obs.push_back({rec.biomass, rec.biomass - rec.harvest, rec.effort});
    }
    if (obs.empty())
        throw validation_error("fit_effort: no records with positive harvest");
    if (obs.size() < 4)
        throw validation_error(
            "fit_effort: need at least 4 records with positive harvest");

    // E = theta * A(b) with theta = 1/q: closed-form theta per candidate b.
    auto design = [&](double b, std::vector<double>& a) {
        a.resize(obs.size());
        for (std::size_t i = 0; i < obs.size(); ++i) {
            if (std::abs(b - 1.0) < 1e-12) {
                a[i] = std::log(obs[i].stock / obs[i].escapement);
            } else {
                const double e = 1.0 - b;
                a[i] = (std::pow(obs[i].stock, e) -
                        std::pow(obs[i].escapement, e)) /
                       e;
            }
        }
    };
    std::vector<double> a;
    auto theta_for = [&](double b) {
        design(b, a);
        double num = 0, den = 0;
        for (std::size_t i = 0; i < obs.size(); ++i) {
            num += a[i] * obs[i].effort;
            den += a[i] * a[i];
        }
        return den > 0 ? num / den : 0.0;
    };
    auto sse_for = [&](double b) {
        const double theta = theta_for(b);
        double sse = 0;
        for (std::size_t i = 0; i < obs.size(); ++i) {
            const double res = obs[i].effort - theta * a[i];
            sse += res * res;
        }
        return sse;
    };

    const int coarse = 240;
    double best_b = bounds.b_lo, best_sse = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= coarse; ++i) {
        const double b =
            bounds.b_lo + (bounds.b_hi - bounds.b_lo) * static_cast<double>(i) / coarse;
        const double sse = sse_for(b);
        if (sse < best_sse) {
            best_sse = sse;
            best_b = b;
        }
    }
    const double span = (bounds.b_hi - bounds.b_lo) * 1.5 / coarse;
    const double b_star =
        golden_min(sse_for, std::max(bounds.b_lo, best_b - span),
                   std::min(bounds.b_hi, best_b + span), bounds.rel_tol);

    EffortFit fit;
    fit.elasticity = b_star;
    const double theta = theta_for(b_star);
    if (theta <= 0.0)
        throw validation_error("fit_effort: fitted catchability not positive");
    fit.catchability = 1.0 / theta;
    for (std::size_t i = 0; i < obs.size(); ++i)
        fit.residuals.push_back(obs[i].effort - theta * a[i]);
    double sse = 0;
    for (double r : fit.residuals) sse += r * r;
    fit.rmse = std::sqrt(sse / fit.residuals.size());
    fit.converged = b_star > bounds.b_lo * 1.0000001 &&
                    b_star < bounds.b_hi * 0.9999999 && sse <= best_sse + 1e-12;
    return fit;
}

ShockSupportEstimate estimate_shock_support(
    const std::vector<FisheryRecord>& series, double mortality, double r0,
    double half_saturation) {
    ShockSupportEstimate est;
    for (std::size_t i = 0; i + 1 < series.size(); ++i) {
        if (series[i + 1].year != series[i].year + 1) continue;
        const double s = series[i].biomass - series[i].harvest;
        if (s <= 0.0) {
            ++est.skipped;
            continue;
        }
        const double growth = r0 * s / (1.0 + s / half_saturation);
        const double w =
            (series[i + 1].biomass - (1.0 - mortality) * s) / growth;
        est.shocks.push_back(w);
    }
    if (est.shocks.empty())
        throw validation_error(
            "estimate_shock_support: every pair had zero escapement");
    est.lo = *std::min_element(est.shocks.begin(), est.shocks.end());
    est.hi = *std::max_element(est.shocks.begin(), est.shocks.end());
    return est;
}

ShockSupportEstimate estimate_shock_support(
    const std::vector<FisheryRecord>& series, const BioModel& bio) {
    return estimate_shock_support(series, bio.mortality, bio.r0,
                                  bio.half_saturation);
}

std::vector<FisheryRecord> synthetic_series(const BioModel& bio,
                                            const EconModel& econ, double x1,
                                            int years, int first_year,
                                            std::uint32_t seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> frac_dist(0.05, 0.18);
    std::uniform_real_distribution<double> shock_dist(bio.shock_lo,
                                                      bio.shock_hi);
    std::vector<FisheryRecord> out;
    out.reserve(years);
    double x = x1;
    for (int t = 0; t < years; ++t) {
        // every fifth season closed; both support endpoints realized early
        const double frac = (t % 5 == 4) ? 0.0 : frac_dist(rng);
        double w;
        if (t == 0)
            w = bio.shock_lo;
        else if (t == 1)
            w = bio.shock_hi;
        else
            w = shock_dist(rng);
        FisheryRecord rec;
        rec.year = first_year + t;
        rec.biomass = x;
        rec.harvest = frac * x;
        rec.effort = effort(x, rec.harvest, econ);
        out.push_back(rec);
        x = recruit(x - rec.harvest, w, bio);
    }
    return out;
}

}  // namespace ssp
