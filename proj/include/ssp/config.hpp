#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ssp/calibrate.hpp"
#include "ssp/evaluate.hpp"
#include "ssp/kconcave.hpp"
#include "ssp/model.hpp"
#include "ssp/solver.hpp"

namespace ssp {

/// A solvable model description: biology, economics, grid overrides, horizon
/// and initial stock. Serialized as JSON with keys mirroring the field names
/// (see the repository README for the exact schema).
struct ModelConfig {
    BioModel bio;
    EconModel econ;
    double grid_step = 0.25;
    std::optional<double> grid_x_max;
    std::optional<double> grid_x_ref;
    int horizon = 33;
    std::optional<double> initial_stock;

    Grid make_grid() const;
};

/// The halibut base case (Table-1 parameter set of the fishery study).
ModelConfig table1();

ModelConfig load_model_config(const std::string& path);
std::string model_config_to_json(const ModelConfig& cfg);
void save_model_config(const ModelConfig& cfg, const std::string& path);

/// Shortest round-trip decimal form of a double (full precision, no display
/// rounding).
std::string format_double(double v);

/// Write via a temp file in the same directory, then rename.
void atomic_write(const std::string& path, const std::string& contents);

std::string thresholds_to_csv(const ThresholdSchedule& schedule);
std::string values_to_csv(const ValueTable& values);
std::string stats_to_json(const SolverStats& stats, const std::string& solver);
std::string trajectory_to_csv(const Trajectory& traj);
std::string comparison_to_csv(const std::vector<ComparisonRow>& rows);
std::string comparison_to_json(const std::vector<ComparisonRow>& rows);
std::string concavity_report_to_json(const ConcavityReport& report, double k,
                                     double tol);
std::string residuals_to_csv(const std::vector<double>& residuals);
std::string series_to_csv(const std::vector<FisheryRecord>& series);

/// Read a two-column `x,value` CSV (optional header) for the check command.
SampledFunction load_samples_csv(const std::string& path);

}  // namespace ssp
