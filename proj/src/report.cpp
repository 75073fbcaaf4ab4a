#include "fockgen/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <json.hpp>

#include "fockgen/errors.hpp"

namespace fockgen {

using json = nlohmann::json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "' for writing");
        out << content;
        out.flush();
        if (!out) throw std::runtime_error("write to '" + tmp.string() + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot move '" + tmp.string() + "' to '" + path.string() +
                                 "': " + ec.message());
    }
}

std::string ensemble_csv(const EnsembleStats& s) {
    std::string out = "time,cavity_flux,cavity_flux_se,spont_flux,spont_flux_se\n";
    for (std::size_t i = 0; i < s.times.size(); ++i) {
        out += format_double(s.times[i]) + ',' + format_double(s.cavity_flux[i]) + ',' +
               format_double(s.cavity_flux_se[i]) + ',' + format_double(s.spont_flux[i]) + ',' +
               format_double(s.spont_flux_se[i]) + '\n';
    }
    return out;
}

namespace {

json stats_scalars(const EnsembleStats& s) {
    json j;
    j["trajectories"] = s.trajectories;
    j["n_initial"] = s.n_initial;
    j["photons_out"] = s.photons_out;
    j["photons_out_se"] = s.photons_out_se;
    j["n_s"] = s.n_s;
    j["n_s_se"] = s.n_s_se;
    j["mean_cavity_jumps"] = s.mean_cavity_jumps;
    j["mean_cavity_jumps_se"] = s.mean_cavity_jumps_se;
    j["mean_spont_jumps"] = s.mean_spont_jumps;
    j["mean_spont_jumps_se"] = s.mean_spont_jumps_se;
    j["estimator_difference_se"] = s.estimator_difference_se;
    j["estimators_agree_3sigma"] = s.estimators_agree();
    j["residual_quanta"] = s.residual_quanta;
    j["residual_quanta_se"] = s.residual_quanta_se;
    j["fractional_loss"] = s.fractional_loss;
    j["fractional_loss_se"] = s.fractional_loss_se;
    j["mean_final_time"] = s.mean_final_time;
    j["max_final_time"] = s.max_final_time;
    j["samples"] = s.times.size();
    j["max_substeps"] = s.max_substeps;
    j["aborted"] = s.aborted;
    j["max_steps_exceeded"] = s.max_steps_exceeded;
    j["diagnostics"] = s.diagnostics;
    j["failed"] = s.failed();
    return j;
}

json units() {
    return {{"rates", "g"}, {"times", "1/g"}, {"fluxes", "photons per 1/g"}};
}

}  // namespace

std::string ensemble_summary_json(const EnsembleStats& stats, const SimulationConfig& config) {
    json j;
    j["units"] = units();
    j["stats"] = stats_scalars(stats);
    j["config"] = json::parse(config_to_json(config));
    return j.dump(2) + '\n';
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::string out = "axis_value,fractional_loss,fractional_loss_se,photons_out,n_s\n";
    const double nan = std::nan("");
    for (const auto& r : rows) {
        const bool have = r.stats.trajectories > 0;
        out += r.axis_value + ',' + format_double(have ? r.stats.fractional_loss : nan) + ',' +
               format_double(have ? r.stats.fractional_loss_se : nan) + ',' +
               format_double(have ? r.stats.photons_out : nan) + ',' +
               format_double(have ? r.stats.n_s : nan) + '\n';
    }
    return out;
}

std::string sweep_summary_json(const std::vector<SweepRow>& rows, SweepAxis axis,
                               bool proportional_ramp, const SimulationConfig& config) {
    json j;
    j["units"] = units();
    j["axis"] = to_string(axis);
    j["proportional_ramp"] = proportional_ramp;
    bool complete = true;
    json points = json::array();
    for (const auto& r : rows) {
        json p;
        p["axis_value"] = r.axis_value;
        p["ok"] = r.ok;
        if (!r.error.empty()) p["error"] = r.error;
        if (r.stats.trajectories > 0) p["stats"] = stats_scalars(r.stats);
        complete = complete && r.ok;
        points.push_back(std::move(p));
    }
    j["complete"] = complete;
    j["points"] = std::move(points);
    j["config"] = json::parse(config_to_json(config));
    return j.dump(2) + '\n';
}

std::string trajectory_csv(const TrajectoryRecord& r) {
    std::string out = "t,exp_photons,exp_excited,norm\n";
    for (std::size_t i = 0; i < r.times.size(); ++i) {
        out += format_double(r.times[i]) + ',' + format_double(r.photons[i]) + ',' +
               format_double(r.excited[i]) + ',' + format_double(r.norm[i]) + '\n';
    }
    return out;
}

std::string jump_log_json(const TrajectoryRecord& r, std::uint64_t seed) {
    json j;
    j["seed"] = seed;
    json jumps = json::array();
    for (const auto& e : r.jumps) {
        jumps.push_back({{"t", e.t}, {"channel", to_string(e.channel)}});
    }
    j["jumps"] = std::move(jumps);
    j["n_initial"] = r.n_initial;
    j["cavity_jumps"] = r.cavity_jumps;
    j["spont_jumps"] = r.spont_jumps;
    j["final_n_alive"] = r.final_n_alive;
    j["final_k"] = r.final_k;
    j["final_time"] = r.final_time;
    j["steps"] = r.steps;
    j["max_substeps"] = r.max_substeps;
    j["residual_quanta"] = r.residual_quanta;
    j["max_steps_exceeded"] = r.max_steps_exceeded;
    j["aborted"] = r.aborted;
    if (!r.diagnostic.empty()) j["diagnostic"] = r.diagnostic;
    return j.dump(2) + '\n';
}

}  // namespace fockgen
