// Command-line front end: fit / solve / simulate / compare / check over JSON
// model configs and CSV data. Exit codes: 0 success, 1 validation error,
// 2 numerical failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "ssp/calibrate.hpp"
#include "ssp/config.hpp"
#include "ssp/evaluate.hpp"
#include "ssp/kconcave.hpp"
#include "ssp/model.hpp"
#include "ssp/solver.hpp"
#include "ssp/stage.hpp"

namespace {

namespace fs = std::filesystem;

fs::path output_dir(const std::string& flag_value) {
    if (!flag_value.empty()) return flag_value;
    if (const char* env = std::getenv("SSPOLICY_OUTDIR")) return env;
    return ".";
}

ssp::ModelConfig resolve_model(const std::string& model_path,
                               const std::string& params) {
    if (params == "table1") return ssp::table1();
    if (!params.empty())
        throw ssp::validation_error("unknown --params shortcut: " + params);
    if (model_path.empty())
        throw ssp::validation_error("model: provide a model.json or --params table1");
    return ssp::load_model_config(model_path);
}

void apply_grid_overrides(ssp::ModelConfig& cfg, double grid_step,
                          double grid_x_max) {
    if (grid_step > 0) cfg.grid_step = grid_step;
    if (grid_x_max > 0) cfg.grid_x_max = grid_x_max;
}

ssp::Policy parse_policy_spec(const std::string& spec,
                              const ssp::ModelConfig& cfg,
                              const ssp::Grid& grid, int years) {
    if (spec == "threshold" || spec == "optimal") {
        auto res = ssp::solve_fast(cfg.bio, cfg.econ, grid, ssp::Horizon(years));
        return ssp::ThresholdPolicy{std::move(res.thresholds)};
    }
    if (spec.rfind("cpp:", 0) == 0)
        return ssp::ProportionalPolicy{std::stod(spec.substr(4))};
    if (spec.rfind("rolling:", 0) == 0)
        return ssp::RollingHorizonPolicy{std::stoi(spec.substr(8))};
    if (spec.rfind("sequence:", 0) == 0) {
        const std::string path = spec.substr(9);
        std::vector<double> fractions;
        std::ifstream in(path);
        if (!in)
            throw ssp::validation_error("cannot open fraction file: " + path);
        double f;
        while (in >> f) fractions.push_back(f);
        if (fractions.empty())
            throw ssp::validation_error("fraction file is empty: " + path);
        return ssp::SequencePolicy{std::move(fractions)};
    }
    throw ssp::validation_error(
        "policy spec must be threshold | cpp:<rate> | rolling:<years> | "
        "sequence:<file>");
}

ssp::ShockRule parse_shock_rule(const std::string& spec) {
    if (spec == "worst") return ssp::WorstGreedy{};
    if (spec.rfind("const:", 0) == 0)
        return ssp::ConstantShock{std::stod(spec.substr(6))};
    if (spec.rfind("seq:", 0) == 0) {
        const std::string path = spec.substr(4);
        std::ifstream in(path);
        if (!in) throw ssp::validation_error("cannot open shock file: " + path);
        std::vector<double> ws;
        double w;
        while (in >> w) ws.push_back(w);
        if (ws.empty())
            throw ssp::validation_error("shock file is empty: " + path);
        return ssp::GivenSequence{std::move(ws)};
    }
    throw ssp::validation_error(
        "shock rule must be worst | const:<w> | seq:<file>");
}

void write_out(const fs::path& dir, const std::string& name,
               const std::string& contents) {
    const fs::path path = dir / name;
    ssp::atomic_write(path.string(), contents);
    std::cout << "wrote " << path.string() << "\n";
}

int run_fit(const std::string& series_path, double mortality,
            const std::string& out_flag) {
    const auto series = ssp::load_series(series_path);
    const auto rec = ssp::fit_recruitment(series, mortality);
    const auto eff = ssp::fit_effort(series);
    const auto support =
        ssp::estimate_shock_support(series, mortality, rec.r0, rec.half_saturation);

    // Prices, costs and discounting are exogenous to the series; the base
    // case supplies them while the fit pins the biology and effort curve.
    const ssp::ModelConfig base = ssp::table1();
    ssp::BioModel fitted(mortality, rec.r0, rec.half_saturation, support.lo,
                         support.hi);
    ssp::EconModel econ(base.econ.price, base.econ.fixed_cost,
                        base.econ.effort_cost, eff.catchability,
                        eff.elasticity, base.econ.discount_rate);
    ssp::ModelConfig cfg{.bio = fitted, .econ = econ};
    cfg.horizon = static_cast<int>(series.size());

    const fs::path dir = output_dir(out_flag);
    write_out(dir, "model.json", ssp::model_config_to_json(cfg));
    std::vector<double> all_res = rec.residuals;
    all_res.insert(all_res.end(), eff.residuals.begin(), eff.residuals.end());
    write_out(dir, "residuals.csv", ssp::residuals_to_csv(all_res));
    std::cout << "r0=" << ssp::format_double(rec.r0)
              << " M=" << ssp::format_double(rec.half_saturation)
              << " rmse=" << ssp::format_double(rec.rmse) << "\n"
              << "q=" << ssp::format_double(eff.catchability)
              << " b=" << ssp::format_double(eff.elasticity)
              << " rmse=" << ssp::format_double(eff.rmse) << "\n"
              << "shock support=[" << ssp::format_double(support.lo) << ", "
              << ssp::format_double(support.hi) << "]"
              << " (skipped " << support.skipped << " pairs)\n";
    return 0;
}

int run_solve(const std::string& model_path, const std::string& params,
              double grid_step, double grid_x_max, int horizon_flag,
              const std::string& solver, const std::string& out_flag) {
    ssp::ModelConfig cfg = resolve_model(model_path, params);
    apply_grid_overrides(cfg, grid_step, grid_x_max);
    if (horizon_flag > 0) cfg.horizon = horizon_flag;
    const ssp::Grid grid = cfg.make_grid();
    const ssp::Horizon horizon(cfg.horizon);
    const fs::path dir = output_dir(out_flag);

    std::optional<ssp::SolveResult> dense, fast;
    if (solver == "dense" || solver == "both")
        dense = ssp::solve_dense(cfg.bio, cfg.econ, grid, horizon);
    if (solver == "fast" || solver == "both")
        fast = ssp::solve_fast(cfg.bio, cfg.econ, grid, horizon);
    if (!dense && !fast)
        throw ssp::validation_error("--solver must be dense, fast or both");

    const ssp::SolveResult& primary = fast ? *fast : *dense;
    write_out(dir, "thresholds.csv", ssp::thresholds_to_csv(primary.thresholds));
    write_out(dir, "values.csv", ssp::values_to_csv(primary.values));
    if (fast) write_out(dir, "stats_fast.json", ssp::stats_to_json(fast->stats, "fast"));
    if (dense)
        write_out(dir, "stats_dense.json", ssp::stats_to_json(dense->stats, "dense"));

    const ssp::Thresholds& th = primary.thresholds.year(1);
    std::cout << "year-1 thresholds: S=" << ssp::format_double(th.harvest_to)
              << " s=" << ssp::format_double(th.trigger) << "\n";
    if (cfg.initial_stock) {
        const double v =
            primary.values.value(horizon.periods, *cfg.initial_stock);
        std::cout << "worst-case value at x1=" << *cfg.initial_stock << ": "
                  << ssp::format_double(v) << "\n";
    }
    return 0;
}

int run_simulate(const std::string& model_path, const std::string& params,
                 const std::string& policy_spec, double x1,
                 const std::string& shock_spec, int years_flag,
                 const std::string& out_flag) {
    ssp::ModelConfig cfg = resolve_model(model_path, params);
    const ssp::Grid grid = cfg.make_grid();
    const int years = years_flag > 0 ? years_flag : cfg.horizon;
    const double start = x1 >= 0 ? x1 : cfg.initial_stock.value_or(-1);
    if (start < 0)
        throw ssp::validation_error("simulate: provide --x1 or initial_stock");

    const ssp::Policy policy = parse_policy_spec(policy_spec, cfg, grid, years);
    const ssp::ShockRule rule = parse_shock_rule(shock_spec);
    ssp::EvalContext ctx(cfg.bio, cfg.econ, grid);
    const auto traj = ssp::simulate(policy, start, ssp::Horizon(years), rule, ctx);

    const fs::path dir = output_dir(out_flag);
    write_out(dir, "trajectory.csv", ssp::trajectory_to_csv(traj));
    std::cout << "policy " << ssp::policy_name(policy)
              << " total discounted revenue: " << ssp::format_double(traj.total)
              << "\n";
    return 0;
}

int run_compare(const std::string& model_path, const std::string& params,
                double x1, int years_flag, double cpp_rate,
                const std::string& sequence_file, const std::string& out_flag) {
    ssp::ModelConfig cfg = resolve_model(model_path, params);
    const ssp::Grid grid = cfg.make_grid();
    const int years = years_flag > 0 ? years_flag : cfg.horizon;
    const double start = x1 >= 0 ? x1 : cfg.initial_stock.value_or(-1);
    if (start < 0)
        throw ssp::validation_error("compare: provide --x1 or initial_stock");

    auto solved = ssp::solve_fast(cfg.bio, cfg.econ, grid, ssp::Horizon(years));
    std::vector<std::pair<std::string, ssp::Policy>> policies;
    policies.emplace_back("optimal (S-s)",
                          ssp::ThresholdPolicy{std::move(solved.thresholds)});
    policies.emplace_back("cpp a=" + ssp::format_double(cpp_rate),
                          ssp::ProportionalPolicy{cpp_rate});
    policies.emplace_back("rolling horizon",
                          ssp::RollingHorizonPolicy{years});
    if (!sequence_file.empty()) {
        const auto policy = parse_policy_spec("sequence:" + sequence_file, cfg,
                                              grid, years);
        policies.emplace_back("sequence", policy);
    }

    ssp::EvalContext ctx(cfg.bio, cfg.econ, grid);
    const auto rows = ssp::compare(policies, start, ssp::Horizon(years), ctx);

    const fs::path dir = output_dir(out_flag);
    write_out(dir, "comparison.csv", ssp::comparison_to_csv(rows));
    write_out(dir, "comparison.json", ssp::comparison_to_json(rows));
    for (const auto& r : rows)
        std::cout << r.name << ": adversarial "
                  << ssp::format_double(r.adversarial) << ", simulated "
                  << ssp::format_double(r.simulated) << "\n";
    return 0;
}

int run_check(const std::string& samples_path, double k, double tol,
              const std::string& out_flag) {
    const auto samples = ssp::load_samples_csv(samples_path);
    const double tolerance = tol >= 0 ? tol : ssp::default_k_tolerance(k);
    const auto report = ssp::check_k_concave(samples, k, tolerance);
    const std::string j = ssp::concavity_report_to_json(report, k, tolerance);
    if (!out_flag.empty() || std::getenv("SSPOLICY_OUTDIR")) {
        write_out(output_dir(out_flag), "concavity.json", j);
    }
    std::cout << j;  // the verdict lives in the JSON; a clean "false" is success
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Worst-case optimal harvesting: threshold-policy solver, model "
        "calibration and policy comparison for renewable-resource models"};
    app.require_subcommand(1);

    std::string model_path, params, out_flag;
    std::string series_path, policy_spec = "threshold", shock_spec = "worst";
    std::string solver = "both", samples_path, sequence_file;
    double mortality = 0.15, grid_step = -1, grid_x_max = -1;
    double x1 = -1, cpp_rate = 0.1277, check_k = 0, check_tol = -1;
    int horizon_flag = -1, years_flag = -1;

    auto* fit = app.add_subcommand("fit", "fit model parameters to a series CSV");
    fit->add_option("series", series_path, "year,biomass,harvest,effort CSV")
        ->required();
    fit->add_option("-m,--mortality", mortality, "pinned mortality rate");
    fit->add_option("-o,--out", out_flag, "output directory");

    auto* solve = app.add_subcommand("solve", "solve for the threshold policy");
    solve->add_option("model", model_path, "model JSON path");
    solve->add_option("--params", params, "built-in parameter set (table1)");
    solve->add_option("--grid-step", grid_step, "grid step override");
    solve->add_option("--grid-x-max", grid_x_max, "grid upper bound override");
    solve->add_option("--horizon", horizon_flag, "planning horizon override");
    solve->add_option("--solver", solver, "dense | fast | both");
    solve->add_option("-o,--out", out_flag, "output directory");

    auto* sim = app.add_subcommand("simulate", "roll a policy forward");
    sim->add_option("model", model_path, "model JSON path");
    sim->add_option("--params", params, "built-in parameter set (table1)");
    sim->add_option("--policy", policy_spec,
                    "threshold | cpp:<rate> | rolling:<L> | sequence:<file>");
    sim->add_option("--x1", x1, "initial stock");
    sim->add_option("--shocks", shock_spec, "worst | const:<w> | seq:<file>");
    sim->add_option("--years", years_flag, "simulation length");
    sim->add_option("-o,--out", out_flag, "output directory");

    auto* cmp = app.add_subcommand("compare", "worst-case policy comparison");
    cmp->add_option("model", model_path, "model JSON path");
    cmp->add_option("--params", params, "built-in parameter set (table1)");
    cmp->add_option("--x1", x1, "initial stock");
    cmp->add_option("--years", years_flag, "comparison horizon");
    cmp->add_option("--cpp-rate", cpp_rate, "proportional policy rate");
    cmp->add_option("--sequence", sequence_file, "per-year fraction file");
    cmp->add_option("-o,--out", out_flag, "output directory");

    auto* chk = app.add_subcommand("check", "K-concavity check of sampled values");
    chk->add_option("samples", samples_path, "x,value CSV")->required();
    chk->add_option("-k,--k", check_k, "allowed secant slack K")->required();
    chk->add_option("--tol", check_tol, "slack tolerance");
    chk->add_option("-o,--out", out_flag, "output directory");

    CLI11_PARSE(app, argc, argv);

    try {
        if (fit->parsed()) return run_fit(series_path, mortality, out_flag);
        if (solve->parsed())
            return run_solve(model_path, params, grid_step, grid_x_max,
                             horizon_flag, solver, out_flag);
        if (sim->parsed())
            return run_simulate(model_path, params, policy_spec, x1, shock_spec,
                                years_flag, out_flag);
        if (cmp->parsed())
            return run_compare(model_path, params, x1, years_flag, cpp_rate,
                               sequence_file, out_flag);
        if (chk->parsed())
            return run_check(samples_path, check_k, check_tol, out_flag);
    } catch (const ssp::validation_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
