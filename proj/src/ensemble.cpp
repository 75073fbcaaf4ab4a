#include "fockgen/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "fockgen/errors.hpp"

namespace fockgen {

namespace {

// Fixed partition of trajectory indices; independent of the worker count so
// the reduction order never changes.
constexpr std::size_t kBlockSize = 32;
constexpr std::size_t kMaxDiagnostics = 8;

struct Moments {
    double sum{0.0};
    double sum_sq{0.0};

    void add(double v) noexcept {
        sum += v;
        sum_sq += v * v;
    }
    void merge(const Moments& o) noexcept {
        sum += o.sum;
        sum_sq += o.sum_sq;
    }
    [[nodiscard]] double mean(std::size_t n) const noexcept {
        return n == 0 ? 0.0 : sum / static_cast<double>(n);
    }
    // standard error of the mean
    [[nodiscard]] double se(std::size_t n) const noexcept {
        if (n < 2) return 0.0;
        const double m = mean(n);
        const double var = (sum_sq - static_cast<double>(n) * m * m) / static_cast<double>(n - 1);
        return var > 0.0 ? std::sqrt(var / static_cast<double>(n)) : 0.0;
    }
};

struct SeriesMoments {
    std::vector<double> sum;
    std::vector<double> sum_sq;

    void add(std::size_t i, double v) {
        if (i >= sum.size()) {
            sum.resize(i + 1, 0.0);
            sum_sq.resize(i + 1, 0.0);
        }
        sum[i] += v;
        sum_sq[i] += v * v;
    }
    void merge(const SeriesMoments& o) {
        if (o.sum.size() > sum.size()) {
            sum.resize(o.sum.size(), 0.0);
            sum_sq.resize(o.sum.size(), 0.0);
        }
        for (std::size_t i = 0; i < o.sum.size(); ++i) {
            sum[i] += o.sum[i];
            sum_sq[i] += o.sum_sq[i];
        }
    }
};

struct Partial {
    std::size_t used{0};
    std::size_t aborted{0};
    std::size_t max_steps_exceeded{0};
    std::size_t max_substeps{1};
    double max_final_time{0.0};
    SeriesMoments cavity;
    SeriesMoments spont;
    Moments photons_out;
    Moments n_s;
    Moments cavity_jumps;
    Moments spont_jumps;
    Moments difference;
    Moments residual;
    Moments final_time;
    std::vector<std::string> diagnostics;

    void merge(const Partial& o) {
        used += o.used;
        aborted += o.aborted;
        max_steps_exceeded += o.max_steps_exceeded;
        max_substeps = std::max(max_substeps, o.max_substeps);
        max_final_time = std::max(max_final_time, o.max_final_time);
        cavity.merge(o.cavity);
        spont.merge(o.spont);
        photons_out.merge(o.photons_out);
        n_s.merge(o.n_s);
        cavity_jumps.merge(o.cavity_jumps);
        spont_jumps.merge(o.spont_jumps);
        difference.merge(o.difference);
        residual.merge(o.residual);
        final_time.merge(o.final_time);
        for (const auto& d : o.diagnostics) {
            if (diagnostics.size() < kMaxDiagnostics) diagnostics.push_back(d);
        }
    }
};

double trapezoid(const std::vector<double>& y, double h) {
    if (y.size() < 2) return 0.0;
    double s = 0.5 * (y.front() + y.back());
    for (std::size_t i = 1; i + 1 < y.size(); ++i) s += y[i];
    return s * h;
}

Partial run_block(const EnsembleConfig& cfg, std::size_t first, std::size_t last) {
    Partial part;
    const double two_kappa = 2.0 * cfg.trajectory.params.kappa;
    const double two_gamma = 2.0 * cfg.trajectory.params.gamma;
    const double h = cfg.trajectory.dt * static_cast<double>(cfg.trajectory.sample_stride);
    for (std::size_t idx = first; idx < last; ++idx) {
        const TrajectoryRecord rec =
            run_trajectory(cfg.trajectory, trajectory_seed(cfg.master_seed, idx));
        if (rec.max_steps_exceeded) ++part.max_steps_exceeded;
        part.max_substeps = std::max(part.max_substeps, rec.max_substeps);
        if (rec.aborted) {
            ++part.aborted;
            if (part.diagnostics.size() < kMaxDiagnostics) {
                part.diagnostics.push_back("trajectory " + std::to_string(idx) + ": " +
                                           rec.diagnostic);
            }
            continue;
        }
        ++part.used;
        std::vector<double> cav(rec.photons.size());
        std::vector<double> sp(rec.excited.size());
        for (std::size_t i = 0; i < cav.size(); ++i) {
            cav[i] = two_kappa * rec.photons[i];
            sp[i] = two_gamma * rec.excited[i];
            part.cavity.add(i, cav[i]);
            part.spont.add(i, sp[i]);
        }
        const double out = trapezoid(cav, h);
        part.photons_out.add(out);
        part.n_s.add(trapezoid(sp, h));
        part.cavity_jumps.add(rec.cavity_jumps);
        part.spont_jumps.add(rec.spont_jumps);
        part.difference.add(out - rec.cavity_jumps);
        part.residual.add(rec.residual_quanta);
        part.final_time.add(rec.final_time);
        part.max_final_time = std::max(part.max_final_time, rec.final_time);
    }
    return part;
}

}  // namespace

void EnsembleConfig::validate() const {
    trajectory.validate();
    if (trajectories < 1) throw InvalidArgument("trajectories must be >= 1");
}

bool EnsembleStats::estimators_agree(double n_sigma) const noexcept {
    const double diff = std::abs(photons_out - mean_cavity_jumps);
    // A zero SE only happens when every trajectory gives the same pair.
    return diff <= n_sigma * estimator_difference_se + 1e-12 * std::max(1.0, mean_cavity_jumps);
}

bool EnsembleStats::failed() const noexcept {
    return static_cast<double>(aborted) > 0.01 * static_cast<double>(trajectories);
}

unsigned resolve_thread_count(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("FOCKGEN_THREADS")) {
        unsigned v = 0;
        const char* end = env + std::char_traits<char>::length(env);
        const auto [ptr, ec] = std::from_chars(env, end, v);
        if (ec == std::errc{} && ptr == end && v > 0) return v;
        throw ConfigError(std::string("FOCKGEN_THREADS must be a positive integer, got '") + env +
                          "'");
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

EnsembleStats run_ensemble(const EnsembleConfig& config) {
    config.validate();
    const std::size_t m = config.trajectories;
    const std::size_t n_blocks = (m + kBlockSize - 1) / kBlockSize;
    std::vector<Partial> partials(n_blocks);

    const unsigned workers =
        static_cast<unsigned>(std::min<std::size_t>(resolve_thread_count(config.threads), n_blocks));
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= n_blocks) return;
            try {
                partials[b] = run_block(config, b * kBlockSize, std::min(m, (b + 1) * kBlockSize));
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(n_blocks);
                return;
            }
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    Partial total;
    for (const auto& p : partials) total.merge(p);

    EnsembleStats st;
    st.trajectories = m;
    st.n_initial = config.trajectory.n_atoms;
    st.dt = config.trajectory.dt;
    st.aborted = total.aborted;
    st.max_steps_exceeded = total.max_steps_exceeded;
    st.max_substeps = total.max_substeps;
    st.diagnostics = total.diagnostics;

    const std::size_t n = total.used;
    const double h = config.trajectory.dt * static_cast<double>(config.trajectory.sample_stride);
    const std::size_t samples = total.cavity.sum.size();
    st.times.resize(samples);
    st.cavity_flux.resize(samples);
    st.cavity_flux_se.resize(samples);
    st.spont_flux.resize(samples);
    st.spont_flux_se.resize(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        st.times[i] = static_cast<double>(i) * h;
        const Moments c{total.cavity.sum[i], total.cavity.sum_sq[i]};
        const Moments s{total.spont.sum[i], total.spont.sum_sq[i]};
        st.cavity_flux[i] = c.mean(n);
        st.cavity_flux_se[i] = c.se(n);
        st.spont_flux[i] = s.mean(n);
        st.spont_flux_se[i] = s.se(n);
    }
    st.photons_out = total.photons_out.mean(n);
    st.photons_out_se = total.photons_out.se(n);
    st.n_s = total.n_s.mean(n);
    st.n_s_se = total.n_s.se(n);
    st.mean_cavity_jumps = total.cavity_jumps.mean(n);
    st.mean_cavity_jumps_se = total.cavity_jumps.se(n);
    st.mean_spont_jumps = total.spont_jumps.mean(n);
    st.mean_spont_jumps_se = total.spont_jumps.se(n);
    st.estimator_difference_se = total.difference.se(n);
    st.residual_quanta = total.residual.mean(n);
    st.residual_quanta_se = total.residual.se(n);
    st.fractional_loss = st.n_s / st.n_initial;
    st.fractional_loss_se = st.n_s_se / st.n_initial;
    st.mean_final_time = total.final_time.mean(n);
    st.max_final_time = total.max_final_time;
    return st;
}

std::string to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::delta: return "delta";
        case SweepAxis::ramp_rate: return "ramp_rate";
        case SweepAxis::g: return "g";
        case SweepAxis::n_atoms: return "N";
        case SweepAxis::pulse_kind: return "pulse_kind";
    }
    return "?";
}

SweepAxis parse_sweep_axis(const std::string& name) {
    if (name == "delta") return SweepAxis::delta;
    if (name == "ramp_rate" || name == "ramp-rate") return SweepAxis::ramp_rate;
    if (name == "g") return SweepAxis::g;
    if (name == "N" || name == "n_atoms") return SweepAxis::n_atoms;
    if (name == "pulse_kind" || name == "pulse-kind") return SweepAxis::pulse_kind;
    throw InvalidArgument("unknown sweep axis '" + name + "'");
}

namespace {

double parse_number(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw InvalidArgument("not a number: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) {
        throw InvalidArgument("not a finite number: '" + s + "'");
    }
    return v;
}

}  // namespace

EnsembleConfig apply_axis(const EnsembleConfig& base, SweepAxis axis, const std::string& value,
                          const SweepOptions& opts, std::size_t point_index) {
    EnsembleConfig cfg = base;
    cfg.master_seed = base.master_seed ^ mix_seed(point_index + 1);
    TrajectoryConfig& tc = cfg.trajectory;
    switch (axis) {
        case SweepAxis::delta:
            tc.params.delta = parse_number(value);
            break;
        case SweepAxis::ramp_rate: {
            const double rate = parse_number(value);
            if (tc.pulse.kind() != PulseKind::linear) {
                throw InvalidArgument("ramp_rate axis needs a linear pulse");
            }
            tc.pulse = PulseSchedule::linear(rate, tc.pulse.cap());
            break;
        }
        case SweepAxis::g: {
            const double g = parse_number(value);
            if (!(g > 0.0)) throw InvalidArgument("g must be > 0");
            if (opts.proportional_ramp) {
                const double g0 = base.trajectory.params.g;
                if (!(g0 > 0.0)) throw InvalidArgument("proportional ramp needs base g > 0");
                const double s = g / g0;
                tc.pulse = tc.pulse.scaled(s);
                tc.dt /= s;
                tc.stop_threshold *= s;
                tc.min_time /= s;
            }
            tc.params.g = g;
            break;
        }
        case SweepAxis::n_atoms: {
            const double v = parse_number(value);
            if (v < 1.0 || v != std::floor(v) || v > 1e6) {
                throw InvalidArgument("N must be a positive integer, got '" + value + "'");
            }
            tc.n_atoms = static_cast<int>(v);
            if (!tc.initial_state.empty() &&
                tc.initial_state.size() != Manifold::expected_dim(tc.n_atoms, 0)) {
                throw InvalidArgument("initial_state does not fit N = " + value);
            }
            break;
        }
        case SweepAxis::pulse_kind: {
            const PulseKind kind = parse_pulse_kind(value);
            if (kind == tc.pulse.kind()) break;
            const double g = tc.params.g;
            if (kind == PulseKind::linear) {
                tc.pulse = PulseSchedule::linear(g / 30.0);
            } else if (kind == PulseKind::gaussian) {
                const double tau = 50.0 / g;
                tc.pulse = PulseSchedule::gaussian(g, 4.0 * tau, tau);
            } else {
                throw InvalidArgument("pulse_kind '" + value +
                                      "' has no default parameters; set it in the base config");
            }
            break;
        }
    }
    cfg.validate();
    return cfg;
}

std::vector<SweepRow> sweep(const EnsembleConfig& base, SweepAxis axis,
                            const std::vector<std::string>& values, const SweepOptions& opts) {
    if (values.empty()) throw InvalidArgument("sweep: empty value list");
    std::vector<SweepRow> rows;
    rows.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        SweepRow row;
        row.axis_value = values[i];
        try {
            row.stats = run_ensemble(apply_axis(base, axis, values[i], opts, i));
            row.ok = !row.stats.failed();
            if (!row.ok) {
                row.error = std::to_string(row.stats.aborted) + " trajectories aborted";
            }
        } catch (const std::exception& err) {
            row.error = err.what();
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace fockgen
