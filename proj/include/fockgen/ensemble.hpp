// ensemble.hpp - trajectory ensembles, flux/loss statistics and parameter sweeps.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "fockgen/trajectory.hpp"

namespace fockgen {

struct EnsembleConfig {
    TrajectoryConfig trajectory{};
    std::size_t trajectories{5000};
    std::uint64_t master_seed{0};
    // 0: FOCKGEN_THREADS from the environment, else hardware concurrency.
    unsigned threads{0};

    void validate() const;
};

struct EnsembleStats {
    std::size_t trajectories{0};
    int n_initial{0};
    double dt{0.0};
    std::vector<double> times;  // common sample grid, 1/g units
    std::vector<double> cavity_flux;
    std::vector<double> cavity_flux_se;
    std::vector<double> spont_flux;
    std::vector<double> spont_flux_se;

    double photons_out{0.0};  // 2 kappa int <a+a> dt
    double photons_out_se{0.0};
    double n_s{0.0};  // 2 gamma int <b1+b1> dt
    double n_s_se{0.0};
    double mean_cavity_jumps{0.0};
    double mean_cavity_jumps_se{0.0};
    double mean_spont_jumps{0.0};
    double mean_spont_jumps_se{0.0};
    // Standard error of the per-trajectory difference (integral - jump count).
    double estimator_difference_se{0.0};
    double residual_quanta{0.0};
    double residual_quanta_se{0.0};
    double fractional_loss{0.0};  // n_s / n_initial
    double fractional_loss_se{0.0};

    double mean_final_time{0.0};
    double max_final_time{0.0};
    std::size_t max_substeps{1};
    std::size_t aborted{0};
    std::size_t max_steps_exceeded{0};
    std::vector<std::string> diagnostics;  // first few abort messages

    // |photons_out - mean_cavity_jumps| <= n_sigma * estimator_difference_se
    [[nodiscard]] bool estimators_agree(double n_sigma = 3.0) const noexcept;
    [[nodiscard]] bool failed() const noexcept;  // more than 1% aborted
};

unsigned resolve_thread_count(unsigned requested);

// Bit-identical for fixed (config, master_seed) whatever the thread count:
// trajectories are grouped in fixed index blocks and reduced in index order.
[[nodiscard]] EnsembleStats run_ensemble(const EnsembleConfig& config);

enum class SweepAxis { delta, ramp_rate, g, n_atoms, pulse_kind };

[[nodiscard]] std::string to_string(SweepAxis axis);
// "delta", "ramp_rate", "g", "N" (or "n_atoms"), "pulse_kind"
[[nodiscard]] SweepAxis parse_sweep_axis(const std::string& name);

struct SweepOptions {
    // g axis: scale the pulse by g/g_base and dt by g_base/g.
    bool proportional_ramp{false};
};

struct SweepRow {
    std::string axis_value;  // as given (numbers are re-printed at full precision)
    bool ok{false};
    std::string error;
    EnsembleStats stats;
};

// Base config with the axis set to `value`. Throws InvalidArgument for values
// that do not fit the axis.
[[nodiscard]] EnsembleConfig apply_axis(const EnsembleConfig& base, SweepAxis axis,
                                        const std::string& value, const SweepOptions& opts,
                                        std::size_t point_index);

// One ensemble per value; failures are recorded in the row and the sweep continues.
[[nodiscard]] std::vector<SweepRow> sweep(const EnsembleConfig& base, SweepAxis axis,
                                          const std::vector<std::string>& values,
                                          const SweepOptions& opts = {});

}  // namespace fockgen
