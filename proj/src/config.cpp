#include "ssp/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "ssp/stage.hpp"

namespace ssp {

using nlohmann::json;

Grid ModelConfig::make_grid() const {
    const double cap = carrying_capacity(bio.shock_hi, bio);
    const double x_max =
        grid_x_max.value_or(std::ceil(cap / grid_step - 1e-9) * grid_step);
    return Grid(x_max, grid_step, grid_x_ref.value_or(grid_step));
}

ModelConfig table1() {
    BioModel bio(0.15, 0.543365, 196.3923, 1.0 - 0.11, 1.0 + 0.06);
    EconModel econ(4.3e6, 5.0e6, 2.0e5, 9.07979e-7, 2.55465, 0.05);
    ModelConfig cfg{.bio = bio, .econ = econ};
    cfg.horizon = 33;
    cfg.initial_stock = 90.989;
    return cfg;
}

namespace {

double get_num(const json& j, const char* section, const char* key) {
    if (!j.contains(key))
        throw validation_error(std::string("model config: missing ") + section +
                               "." + key);
    if (!j[key].is_number())
        throw validation_error(std::string("model config: ") + section + "." +
                               key + " must be a number");
    return j[key].get<double>();
}

}  // namespace

ModelConfig load_model_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open model config: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw validation_error("model config " + path + ": " + e.what());
    }
    if (!j.contains("bio") || !j.contains("econ"))
        throw validation_error("model config: missing bio/econ sections");
    const json& jb = j["bio"];
    const json& je = j["econ"];
    BioModel bio(get_num(jb, "bio", "mortality"), get_num(jb, "bio", "r0"),
                 get_num(jb, "bio", "half_saturation"),
                 get_num(jb, "bio", "shock_lo"), get_num(jb, "bio", "shock_hi"));
    EconModel econ(get_num(je, "econ", "price"),
                   get_num(je, "econ", "fixed_cost"),
                   get_num(je, "econ", "effort_cost"),
                   get_num(je, "econ", "catchability"),
                   get_num(je, "econ", "elasticity"),
                   get_num(je, "econ", "discount_rate"));
    ModelConfig cfg{.bio = bio, .econ = econ};
    if (j.contains("grid")) {
        const json& jg = j["grid"];
        if (jg.contains("step")) cfg.grid_step = get_num(jg, "grid", "step");
        if (jg.contains("x_max")) cfg.grid_x_max = get_num(jg, "grid", "x_max");
        if (jg.contains("x_ref")) cfg.grid_x_ref = get_num(jg, "grid", "x_ref");
    }
    if (j.contains("horizon")) {
        if (!j["horizon"].is_number_integer())
            throw validation_error("model config: horizon must be an integer");
        cfg.horizon = j["horizon"].get<int>();
        Horizon check(cfg.horizon);
        (void)check;
    }
    if (j.contains("initial_stock"))
        cfg.initial_stock = get_num(j, "<root>", "initial_stock");
    cfg.make_grid();  // surfaces grid invariant violations at load time
    return cfg;
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

namespace {

// nlohmann dumps doubles in shortest round-trip form; non-finite becomes null.
json to_json_full(double v) { return json(v); }

}  // namespace

std::string model_config_to_json(const ModelConfig& cfg) {
    json j;
    j["bio"] = {{"mortality", to_json_full(cfg.bio.mortality)},
                {"r0", to_json_full(cfg.bio.r0)},
                {"half_saturation", to_json_full(cfg.bio.half_saturation)},
                {"shock_lo", to_json_full(cfg.bio.shock_lo)},
                {"shock_hi", to_json_full(cfg.bio.shock_hi)}};
    j["econ"] = {{"price", to_json_full(cfg.econ.price)},
                 {"fixed_cost", to_json_full(cfg.econ.fixed_cost)},
                 {"effort_cost", to_json_full(cfg.econ.effort_cost)},
                 {"catchability", to_json_full(cfg.econ.catchability)},
                 {"elasticity", to_json_full(cfg.econ.elasticity)},
                 {"discount_rate", to_json_full(cfg.econ.discount_rate)}};
    json grid = {{"step", to_json_full(cfg.grid_step)}};
    if (cfg.grid_x_max) grid["x_max"] = to_json_full(*cfg.grid_x_max);
    if (cfg.grid_x_ref) grid["x_ref"] = to_json_full(*cfg.grid_x_ref);
    j["grid"] = grid;
    j["horizon"] = cfg.horizon;
    if (cfg.initial_stock) j["initial_stock"] = to_json_full(*cfg.initial_stock);
    return j.dump(2) + "\n";
}

void save_model_config(const ModelConfig& cfg, const std::string& path) {
    atomic_write(path, model_config_to_json(cfg));
}

void atomic_write(const std::string& path, const std::string& contents) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw numeric_error("cannot write " + tmp.string());
        out << contents;
        if (!out) throw numeric_error("short write to " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::string thresholds_to_csv(const ThresholdSchedule& schedule) {
    std::string out = "stage,S,s\n";
    for (int t = 1; t <= schedule.horizon(); ++t) {
        const Thresholds& th = schedule.year(t);
        out += std::to_string(t) + "," + format_double(th.harvest_to) + "," +
               format_double(th.trigger) + "\n";
    }
    return out;
}

std::string values_to_csv(const ValueTable& values) {
    std::string out = "x";
    for (int n = 0; n <= values.horizon(); ++n)
        out += ",C" + std::to_string(n);
    out += "\n";
    for (std::size_t i = 0; i < values.grid.size(); ++i) {
        out += format_double(values.grid.node(i));
        for (int n = 0; n <= values.horizon(); ++n)
            out += "," + format_double(values.at(n)[i]);
        out += "\n";
    }
    return out;
}

std::string stats_to_json(const SolverStats& stats, const std::string& solver) {
    json j;
    j["solver"] = solver;
    j["totals"] = {{"p_evals", stats.total_p_evals()},
                   {"value_interps", stats.total_value_interps()},
                   {"bisection_interps", stats.total_bisection_interps()}};
    json stages = json::array();
    for (std::size_t i = 0; i < stats.stages.size(); ++i) {
        const StageStats& s = stats.stages[i];
        stages.push_back({{"remaining", i + 1},
                          {"p_evals", s.p_evals},
                          {"value_interps", s.value_interps},
                          {"bisection_interps", s.bisection_interps},
                          {"monotone_shortcut", s.monotone_shortcut},
                          {"bisection_fallback", s.bisection_fallback},
                          {"wall_ms", s.wall_ms}});
    }
    j["stages"] = stages;
    return j.dump(2) + "\n";
}

std::string trajectory_to_csv(const Trajectory& traj) {
    std::string out = "year,stock,harvest,shock,stock_after,utility\n";
    for (const auto& yr : traj.years) {
        out += std::to_string(yr.year) + "," + format_double(yr.stock_before) +
               "," + format_double(yr.harvest) + "," + format_double(yr.shock) +
               "," + format_double(yr.stock_after) + "," +
               format_double(yr.discounted_utility) + "\n";
    }
    return out;
}

std::string comparison_to_csv(const std::vector<ComparisonRow>& rows) {
    std::string out =
        "policy,adversarial_revenue,adversarial_loss,simulated_revenue,"
        "simulated_loss\n";
    for (const auto& r : rows) {
        out += r.name + "," + format_double(r.adversarial) + "," +
               format_double(r.adversarial_loss) + "," +
               format_double(r.simulated) + "," +
               format_double(r.simulated_loss) + "\n";
    }
    return out;
}

std::string comparison_to_json(const std::vector<ComparisonRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"policy", r.name},
                       {"adversarial_revenue", to_json_full(r.adversarial)},
                       {"adversarial_loss", to_json_full(r.adversarial_loss)},
                       {"simulated_revenue", to_json_full(r.simulated)},
                       {"simulated_loss", to_json_full(r.simulated_loss)}});
    }
    json j;
    j["comparison"] = arr;
    j["note"] =
        "adversarial = exact worst case by backward induction over the shock "
        "support; simulated = realization with the low shock endpoint every "
        "year";
    return j.dump(2) + "\n";
}

std::string concavity_report_to_json(const ConcavityReport& report, double k,
                                     double tol) {
    json j;
    j["k"] = to_json_full(k);
    j["tolerance"] = to_json_full(tol);
    j["is_k_concave"] = report.is_k_concave;
    j["worst_slack"] = to_json_full(report.worst_slack);
    if (!report.is_k_concave) {
        j["witness"] = {{"x", to_json_full(report.witness.x)},
                        {"y", to_json_full(report.witness.y)},
                        {"b", to_json_full(report.witness.b)}};
    }
    return j.dump(2) + "\n";
}

std::string residuals_to_csv(const std::vector<double>& residuals) {
    std::string out = "index,residual\n";
    for (std::size_t i = 0; i < residuals.size(); ++i)
        out += std::to_string(i) + "," + format_double(residuals[i]) + "\n";
    return out;
}

std::string series_to_csv(const std::vector<FisheryRecord>& series) {
    std::string out = "year,biomass,harvest,effort\n";
    for (const auto& rec : series) {
        out += std::to_string(rec.year) + "," + format_double(rec.biomass) +
               "," + format_double(rec.harvest) + "," +
               format_double(rec.effort) + "\n";
    }
    return out;
}

SampledFunction load_samples_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw validation_error("cannot open samples file: " + path);
    std::vector<double> xs, vs;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        double x, v;
        char comma;
        if (!(row >> x >> comma >> v) || comma != ',') {
            if (line_no == 1) continue;  // tolerate a header line
            throw validation_error(path + ": malformed row at line " +
                                   std::to_string(line_no));
        }
        xs.push_back(x);
        vs.push_back(v);
    }
    return SampledFunction(std::move(xs), std::move(vs));
}

}  // namespace ssp
