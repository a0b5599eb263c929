#include "ssp/solver.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

namespace ssp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kPosInf = std::numeric_limits<double>::infinity();

// Precomputed interpolation coordinates of recruit(node_i, shock_k), so each
// stage evaluates the continuation by one fused multiply per (node, shock).
struct TransitionTable {
    std::vector<std::size_t> cell;  // lower node index per grid node
    std::vector<double> frac;       // in [0, 1]
};

struct SolverCore {
    const StageProblem& prob;
    std::size_t n_nodes;
    std::vector<double> revenue;             // R_rel at nodes; -inf sentinel at 0
    std::vector<TransitionTable> transitions;  // one per shock

    explicit SolverCore(const StageProblem& p)
        : prob(p), n_nodes(p.grid.size()) {
        if (p.shocks.empty())
            throw validation_error("stage problem: empty shock set");
        revenue.resize(n_nodes);
        // R_rel(0+) -> +inf when the cost integral diverges at zero; the
        // sentinel keeps node 0 out of every harvest-target maximization.
        revenue[0] = prob.revenue_finite_at_zero ? prob.revenue(0.0) : kPosInf;
        for (std::size_t i = 1; i < n_nodes; ++i)
            revenue[i] = prob.revenue(prob.grid.node(i));
        transitions.resize(prob.shocks.size());
        for (std::size_t k = 0; k < prob.shocks.size(); ++k) {
            auto& t = transitions[k];
            t.cell.resize(n_nodes);
            t.frac.resize(n_nodes);
            for (std::size_t i = 0; i < n_nodes; ++i) {
                const double next =
                    prob.grid.clamp(prob.recruit(prob.grid.node(i), prob.shocks[k]));
                const std::size_t c = prob.grid.cell_index(next);
                t.cell[i] = c;
                t.frac[i] = (next - prob.grid.node(c)) / prob.grid.step();
            }
        }
    }

    bool nondecreasing(const std::vector<double>& v) const {
        double scale = 1.0;
        for (double x : v) scale = std::max(scale, std::abs(x));
        const double tol = 1e-9 * scale;
        for (std::size_t i = 1; i < v.size(); ++i)
            if (v[i] < v[i - 1] - tol) return false;
        return true;
    }

    // Discounted worst-shock continuation alpha * min_w C(f(z_i, w)) at every
    // node, on the shock subset [0, n_shocks).
    void continuation(const std::vector<double>& value, std::size_t n_shocks,
                      std::vector<double>& out, StageStats& st) const {
        out.assign(n_nodes, std::numeric_limits<double>::infinity());
        for (std::size_t k = 0; k < n_shocks; ++k) {
            const auto& t = transitions[k];
            for (std::size_t i = 0; i < n_nodes; ++i) {
                const double v = value[t.cell[i]] * (1.0 - t.frac[i]) +
                                 value[t.cell[i] + 1] * t.frac[i];
                out[i] = std::min(out[i], v);
            }
            st.value_interps += n_nodes;
        }
        for (double& v : out) v *= prob.discount_factor;
    }

    // Single continuation query used by the fast solver's bisection probes.
    double continuation_at(const std::vector<double>& value, std::size_t node,
                           std::size_t n_shocks, StageStats& st) const {
        double worst = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < n_shocks; ++k) {
            const auto& t = transitions[k];
            const double v = value[t.cell[node]] * (1.0 - t.frac[node]) +
                             value[t.cell[node] + 1] * t.frac[node];
            worst = std::min(worst, v);
            ++st.bisection_interps;
        }
        return worst * prob.discount_factor;
    }
};

std::size_t largest_argmax(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] >= v[best]) best = i;
    return best;
}

void check_finite_stage(const std::vector<double>& w, int stage) {
    for (std::size_t i = 0; i < w.size(); ++i)
        if (!std::isfinite(w[i]))
            throw numeric_error("non-finite value at stage " +
                                std::to_string(stage) + ", node " +
                                std::to_string(i));
}

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

std::uint64_t SolverStats::total_p_evals() const {
    return std::accumulate(stages.begin(), stages.end(), std::uint64_t{0},
                           [](std::uint64_t a, const StageStats& s) {
                               return a + s.p_evals;
                           });
}

std::uint64_t SolverStats::total_value_interps() const {
    return std::accumulate(stages.begin(), stages.end(), std::uint64_t{0},
                           [](std::uint64_t a, const StageStats& s) {
                               return a + s.value_interps;
                           });
}

std::uint64_t SolverStats::total_bisection_interps() const {
    return std::accumulate(stages.begin(), stages.end(), std::uint64_t{0},
                           [](std::uint64_t a, const StageStats& s) {
                               return a + s.bisection_interps;
                           });
}

SolveResult solve_dense(const StageProblem& prob, Horizon horizon,
                        SolveOptions opts) {
    SolverCore core(prob);
    const std::size_t n = core.n_nodes;
    const double K = prob.fixed_cost;

    SolveResult res{.values = ValueTable{prob.grid, {std::vector<double>(n, 0.0)}}};

    std::vector<double> cont, p(n), prefix_max(n), value(n);
    std::vector<std::size_t> prefix_arg(n);

    for (int stage = 1; stage <= horizon.periods; ++stage) {
        const auto t0 = Clock::now();
        StageStats st;
        const auto& prev = res.values.stages.back();
        const bool shortcut = opts.monotone_shortcut && core.nondecreasing(prev);
        const std::size_t n_shocks = shortcut ? 1 : prob.shocks.size();
        st.monotone_shortcut = shortcut;

        core.continuation(prev, n_shocks, cont, st);
        for (std::size_t i = 0; i < n; ++i) p[i] = cont[i] - core.revenue[i];
        if (!prob.revenue_finite_at_zero) p[0] = kNegInf;
        st.p_evals += n;

        prefix_max[0] = p[0];
        prefix_arg[0] = 0;
        for (std::size_t i = 1; i < n; ++i) {
            if (p[i] >= prefix_max[i - 1]) {  // ties -> largest node
                prefix_max[i] = p[i];
                prefix_arg[i] = i;
            } else {
                prefix_max[i] = prefix_max[i - 1];
                prefix_arg[i] = prefix_arg[i - 1];
            }
        }

        std::vector<double> target(n);
        std::size_t last_no_harvest = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool harvest = i > 0 && prefix_max[i] - K > p[i];
            if (harvest) {
                value[i] = core.revenue[i] + prefix_max[i] - K;
                target[i] = prob.grid.node(prefix_arg[i]);
            } else {
                value[i] = cont[i];
                target[i] = prob.grid.node(i);
                last_no_harvest = i;
            }
        }
        check_finite_stage(value, stage);

        res.thresholds.by_remaining.push_back(
            {prob.grid.node(largest_argmax(p)), prob.grid.node(last_no_harvest)});
        res.p_tables.push_back(p);
        res.policy_target.push_back(std::move(target));
        res.values.stages.push_back(value);
        st.wall_ms = ms_since(t0);
        res.stats.stages.push_back(st);
    }
    return res;
}

SolveResult solve_fast(const StageProblem& prob, Horizon horizon,
                       SolveOptions opts) {
    SolverCore core(prob);
    const std::size_t n = core.n_nodes;
    const double K = prob.fixed_cost;

    SolveResult res{.values = ValueTable{prob.grid, {std::vector<double>(n, 0.0)}}};

    std::vector<double> cont, p(n), value(n);

    for (int stage = 1; stage <= horizon.periods; ++stage) {
        const auto t0 = Clock::now();
        StageStats st;
        const auto& prev = res.values.stages.back();
        const bool shortcut = opts.monotone_shortcut && core.nondecreasing(prev);
        const std::size_t n_shocks = shortcut ? 1 : prob.shocks.size();
        st.monotone_shortcut = shortcut;

        // Full scan over harvest-target candidates for the stage-global S_n.
        core.continuation(prev, n_shocks, cont, st);
        for (std::size_t i = 0; i < n; ++i) p[i] = cont[i] - core.revenue[i];
        if (!prob.revenue_finite_at_zero) p[0] = kNegInf;
        st.p_evals += n;
        const std::size_t s_idx = largest_argmax(p);
        const double level = p[s_idx] - K;

        // Locate the trigger by bisection on P_n(x) >= P_n(S_n) - K over
        // [S_n, x_max]; probes re-evaluate P_n so the counted work reflects
        // the log |X| probe count.
        std::size_t trig;
        auto probe = [&](std::size_t i) {
            const double pi =
                core.continuation_at(prev, i, n_shocks, st) - core.revenue[i];
            ++st.p_evals;
            return pi >= level;
        };
        if (probe(n - 1)) {
            trig = n - 1;  // never harvest at any stock level this stage
        } else {
            std::size_t lo = s_idx, hi = n - 1;  // probe(lo) true, probe(hi) false
            while (hi - lo > 1) {
                const std::size_t mid = lo + (hi - lo) / 2;
                if (probe(mid))
                    lo = mid;
                else
                    hi = mid;
            }
            trig = lo;
        }

        // The bisection is valid only if the predicate is monotone on
        // [S_n, x_max]; verify against the scanned table and fall back to the
        // dense rule when the stage function lacks the threshold structure.
        bool clean = true;
        for (std::size_t i = s_idx; i < n; ++i) {
            const bool pred = p[i] >= level;
            if (pred != (i <= trig)) {
                clean = false;
                break;
            }
        }
        if (clean) {
            // Stage value: no-harvest continuation at or below the trigger,
            // closed form above it.
            for (std::size_t i = 0; i <= trig; ++i) value[i] = cont[i];
            for (std::size_t i = trig + 1; i < n; ++i)
                value[i] = core.revenue[i] + p[s_idx] - K;
        } else {
            // Threshold structure absent: replay the dense per-node rule so
            // both solvers stay node-identical, and flag the stage.
            st.bisection_fallback = true;
            double run_max = p[0];
            trig = 0;
            for (std::size_t i = 0; i < n; ++i) {
                if (i > 0 && p[i] >= run_max) run_max = p[i];
                const bool harvest = i > 0 && run_max - K > p[i];
                value[i] = harvest ? core.revenue[i] + run_max - K : cont[i];
                if (!harvest) trig = i;
            }
        }
        check_finite_stage(value, stage);

        res.thresholds.by_remaining.push_back(
            {prob.grid.node(s_idx), prob.grid.node(trig)});
        res.p_tables.push_back(p);
        res.values.stages.push_back(value);
        st.wall_ms = ms_since(t0);
        res.stats.stages.push_back(st);
    }
    return res;
}

SolveResult solve_dense(const BioModel& bio, const EconModel& econ,
                        const Grid& grid, Horizon horizon, SolveOptions opts) {
    return solve_dense(make_stage_problem(bio, econ, grid, opts.shock_points),
                       horizon, opts);
}

SolveResult solve_fast(const BioModel& bio, const EconModel& econ,
                       const Grid& grid, Horizon horizon, SolveOptions opts) {
    return solve_fast(make_stage_problem(bio, econ, grid, opts.shock_points),
                      horizon, opts);
}

double p_fn(int n, double z, const ValueTable& values,
            const StageProblem& prob) {
    if (n < 1 || n > values.horizon())
        throw validation_error("p_fn: stage out of range");
    if (z < 0.0 || z > prob.grid.x_max())
        throw validation_error("p_fn: stock outside [0, x_max]");
    double worst = std::numeric_limits<double>::infinity();
    for (double w : prob.shocks)
        worst = std::min(worst,
                         values.value(n - 1, prob.grid.clamp(prob.recruit(z, w))));
    const double rev = (z == 0.0 && !prob.revenue_finite_at_zero)
                           ? kPosInf
                           : prob.revenue(z);
    return prob.discount_factor * worst - rev;
}

double rolling_horizon_action(double x, const BioModel& bio,
                              const EconModel& econ, const Grid& grid,
                              Horizon lookahead) {
    if (x < 0.0 || x > grid.x_max())
        throw validation_error("rolling_horizon_action: stock outside grid");
    const auto res = solve_fast(bio, econ, grid, lookahead);
    const Thresholds& th = res.thresholds.year(1);
    return x <= th.trigger ? 0.0 : x - th.harvest_to;
}

std::vector<double> discretize_shocks(const BioModel& bio, int points) {
    if (points < 2)
        throw validation_error("shock discretization needs at least 2 points");
    if (bio.shock_lo == bio.shock_hi) return {bio.shock_lo};
    std::vector<double> out(points);
    for (int k = 0; k < points; ++k)
        out[k] = bio.shock_lo + (bio.shock_hi - bio.shock_lo) * k / (points - 1);
    return out;
}

StageProblem make_stage_problem(const BioModel& bio, const EconModel& econ,
                                const Grid& grid, int shock_points) {
    StageProblem prob{grid,
                      econ.discount_factor(),
                      econ.fixed_cost,
                      discretize_shocks(bio, shock_points),
                      [bio](double s, double w) { return recruit(s, w, bio); },
                      [grid, econ](double x) { return revenue_rel(x, grid, econ); },
                      econ.elasticity < 1.0};
    return prob;
}

Grid default_grid(const BioModel& bio, double step) {
    const double cap = carrying_capacity(bio.shock_hi, bio);
    const double x_max = std::ceil(cap / step - 1e-9) * step;
    return Grid(x_max, step);
}

}  // namespace ssp
