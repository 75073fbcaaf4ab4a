// report.hpp - CSV/JSON serialization of results and atomic file output.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "fockgen/config.hpp"
#include "fockgen/ensemble.hpp"
#include "fockgen/trajectory.hpp"

namespace fockgen {

// Writes to a sibling temp file and renames it over `path`, so readers see
// either the old file or the complete new one.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

// Header: time,cavity_flux,cavity_flux_se,spont_flux,spont_flux_se
[[nodiscard]] std::string ensemble_csv(const EnsembleStats& stats);
// Every EnsembleStats scalar plus the resolved config under "config".
[[nodiscard]] std::string ensemble_summary_json(const EnsembleStats& stats,
                                                const SimulationConfig& config);

// Header: axis_value,fractional_loss,fractional_loss_se,photons_out,n_s
// Failed points print nan.
[[nodiscard]] std::string sweep_csv(const std::vector<SweepRow>& rows);
[[nodiscard]] std::string sweep_summary_json(const std::vector<SweepRow>& rows, SweepAxis axis,
                                             bool proportional_ramp,
                                             const SimulationConfig& config);

// Header: t,exp_photons,exp_excited,norm
[[nodiscard]] std::string trajectory_csv(const TrajectoryRecord& record);
[[nodiscard]] std::string jump_log_json(const TrajectoryRecord& record, std::uint64_t seed);

// Shortest decimal form that reads back to the same double.
[[nodiscard]] std::string format_double(double v);

}  // namespace fockgen
