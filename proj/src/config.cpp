#include "fockgen/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fockgen/errors.hpp"

namespace fockgen {

namespace {

using json = nlohmann::json;

void require_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    if (!obj.is_object()) {
        throw ConfigError(where + " must be a JSON object");
    }
    for (const auto& item : obj.items()) {
        if (!allowed.contains(item.key())) {
            throw ConfigError("unknown key '" + item.key() + "' in " + where);
        }
    }
}

double get_number(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError(std::string("'") + key + "' must be a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(std::string("'") + key + "' must be finite");
    return d;
}

std::uint64_t get_unsigned(const json& obj, const char* key, std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned()) {
        throw ConfigError(std::string("'") + key + "' must be a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

std::string get_string(const json& obj, const char* key, const std::string& fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_string()) throw ConfigError(std::string("'") + key + "' must be a string");
    return v.get<std::string>();
}

PulseSchedule parse_pulse(const json& j, double g) {
    if (j.is_null()) {
        return PulseSchedule::linear(g / 30.0);
    }
    require_keys(j, {"type", "rate", "peak", "t0", "tau", "cap", "knots"}, "pulse");
    const std::string type = get_string(j, "type", "linear");
    PulseKind kind;
    try {
        kind = parse_pulse_kind(type);
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("pulse.type: ") + e.what());
    }
    std::set<std::string> allowed;
    switch (kind) {
        case PulseKind::linear: allowed = {"type", "rate", "cap"}; break;
        case PulseKind::gaussian: allowed = {"type", "peak", "t0", "tau"}; break;
        case PulseKind::constant: allowed = {"type", "peak"}; break;
        case PulseKind::piecewise_linear: allowed = {"type", "knots"}; break;
    }
    for (const auto& item : j.items()) {
        if (!allowed.contains(item.key())) {
            throw ConfigError("pulse key '" + item.key() + "' does not apply to type '" + type +
                              "'");
        }
    }
    try {
        switch (kind) {
            case PulseKind::linear: {
                std::optional<double> cap;
                if (j.contains("cap")) cap = get_number(j, "cap", 0.0);
                return PulseSchedule::linear(get_number(j, "rate", g / 30.0), cap);
            }
            case PulseKind::gaussian: {
                const double tau = get_number(j, "tau", 50.0 / g);
                return PulseSchedule::gaussian(get_number(j, "peak", g), get_number(j, "t0", 4.0 * tau),
                                               tau);
            }
            case PulseKind::constant:
                return PulseSchedule::constant(get_number(j, "peak", g));
            case PulseKind::piecewise_linear: {
                if (!j.contains("knots") || !j.at("knots").is_array()) {
                    throw ConfigError("piecewise pulse needs a 'knots' array of [t, r] pairs");
                }
                std::vector<Knot> knots;
                for (const auto& kj : j.at("knots")) {
                    if (!kj.is_array() || kj.size() != 2 || !kj[0].is_number() ||
                        !kj[1].is_number()) {
                        throw ConfigError("each knot must be a [t, r] pair of numbers");
                    }
                    knots.push_back({kj[0].get<double>(), kj[1].get<double>()});
                }
                return PulseSchedule::piecewise(std::move(knots));
            }
        }
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("pulse: ") + e.what());
    }
    throw ConfigError("unreachable pulse kind");
}

json pulse_to_json(const PulseSchedule& p) {
    json j;
    j["type"] = to_string(p.kind());
    switch (p.kind()) {
        case PulseKind::linear:
            j["rate"] = p.rate();
            if (p.cap()) j["cap"] = *p.cap();
            break;
        case PulseKind::gaussian:
            j["peak"] = p.peak();
            j["t0"] = p.t0();
            j["tau"] = p.tau();
            break;
        case PulseKind::constant:
            j["peak"] = p.peak();
            break;
        case PulseKind::piecewise_linear: {
            json knots = json::array();
            for (const auto& k : p.knots()) knots.push_back({k.t, k.r});
            j["knots"] = knots;
            break;
        }
    }
    return j;
}

std::vector<cplx> parse_initial_state(const json& j) {
    if (!j.is_array()) throw ConfigError("initial_state must be an array");
    std::vector<cplx> out;
    for (const auto& v : j) {
        if (v.is_number()) {
            out.emplace_back(v.get<double>(), 0.0);
        } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
            out.emplace_back(v[0].get<double>(), v[1].get<double>());
        } else {
            throw ConfigError("initial_state entries must be numbers or [re, im] pairs");
        }
    }
    return out;
}

}  // namespace

SimulationConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    require_keys(j,
                 {"n_atoms", "g", "kappa", "gamma", "delta", "pulse", "dt", "trajectories",
                  "master_seed", "stop_threshold", "max_steps", "sample_stride", "jump_scheme",
                  "min_time", "initial_state", "output_dir"},
                 "config");

    SimulationConfig cfg;
    EnsembleConfig& ens = cfg.ensemble;
    TrajectoryConfig& tc = ens.trajectory;

    const std::uint64_t n_atoms = get_unsigned(j, "n_atoms", 1);
    if (n_atoms < 1 || n_atoms > 1000) throw ConfigError("n_atoms must be in [1, 1000]");
    tc.n_atoms = static_cast<int>(n_atoms);

    const double g = get_number(j, "g", 1.0);
    if (!(g > 0.0)) throw ConfigError("g must be > 0");
    tc.params.g = g;
    tc.params.kappa = get_number(j, "kappa", g / 10.0);
    tc.params.gamma = get_number(j, "gamma", g / 20.0);
    tc.params.delta = get_number(j, "delta", -2.0 * g);
    tc.pulse = parse_pulse(j.contains("pulse") ? j.at("pulse") : json(), g);
    tc.dt = get_number(j, "dt", 0.1 / g);
    tc.stop_threshold = get_number(j, "stop_threshold", 1e-6 * g);
    tc.min_time = get_number(j, "min_time", 0.0);
    tc.max_steps = get_unsigned(j, "max_steps", tc.max_steps);
    tc.sample_stride = get_unsigned(j, "sample_stride", 1);
    try {
        tc.jump_scheme = parse_jump_scheme(get_string(j, "jump_scheme", "threshold"));
    } catch (const InvalidArgument& e) {
        throw ConfigError(std::string("jump_scheme: ") + e.what());
    }
    if (j.contains("initial_state")) tc.initial_state = parse_initial_state(j.at("initial_state"));

    ens.trajectories = get_unsigned(j, "trajectories", 5000);
    ens.master_seed = get_unsigned(j, "master_seed", 0);
    cfg.output_dir = get_string(j, "output_dir", ".");

    try {
        ens.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

SimulationConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string config_to_json(const SimulationConfig& config, int indent) {
    const TrajectoryConfig& tc = config.trajectory();
    json j;
    j["n_atoms"] = tc.n_atoms;
    j["g"] = tc.params.g;
    j["kappa"] = tc.params.kappa;
    j["gamma"] = tc.params.gamma;
    j["delta"] = tc.params.delta;
    j["pulse"] = pulse_to_json(tc.pulse);
    j["dt"] = tc.dt;
    j["trajectories"] = config.ensemble.trajectories;
    j["master_seed"] = config.ensemble.master_seed;
    j["stop_threshold"] = tc.stop_threshold;
    j["max_steps"] = tc.max_steps;
    j["sample_stride"] = tc.sample_stride;
    j["jump_scheme"] = to_string(tc.jump_scheme);
    j["min_time"] = tc.min_time;
    if (!tc.initial_state.empty()) {
        json s = json::array();
        for (const auto& c : tc.initial_state) s.push_back({c.real(), c.imag()});
        j["initial_state"] = s;
    }
    j["output_dir"] = config.output_dir;
    return j.dump(indent);
}

}  // namespace fockgen
