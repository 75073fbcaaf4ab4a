#include "fockgen/trajectory.hpp"

#include <algorithm>
#include <cmath>

#include "fockgen/errors.hpp"

namespace fockgen {

namespace {

// RK4 is stable for |w| dt < 2.83 on the imaginary axis; substeps keep the
// Gershgorin bound on |w| dt below this value.
constexpr double kMaxPhasePerStep = 2.5;
constexpr double kNormGrowthTolerance = 1e-6;
constexpr int kMaxHalvings = 20;

}  // namespace

std::string to_string(JumpScheme s) {
    return s == JumpScheme::threshold ? "threshold" : "per-step";
}

JumpScheme parse_jump_scheme(const std::string& name) {
    if (name == "threshold") return JumpScheme::threshold;
    if (name == "per-step" || name == "per_step") return JumpScheme::per_step;
    throw InvalidArgument("unknown jump scheme '" + name + "'");
}

std::string to_string(JumpChannel c) {
    return c == JumpChannel::cavity ? "cavity" : "spontaneous";
}

void TrajectoryConfig::validate() const {
    params.validate();
    if (n_atoms < 1) throw InvalidArgument("n_atoms must be >= 1");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw InvalidArgument("dt must be > 0");
    if (!(stop_threshold > 0.0)) throw InvalidArgument("stop_threshold must be > 0");
    if (!(min_time >= 0.0)) throw InvalidArgument("min_time must be >= 0");
    if (sample_stride < 1) throw InvalidArgument("sample_stride must be >= 1");
    if (max_steps < 1) throw InvalidArgument("max_steps must be >= 1");
    if (!initial_state.empty() &&
        initial_state.size() != Manifold::expected_dim(n_atoms, 0)) {
        throw InvalidArgument("initial_state length must equal dim e(N,0) = " +
                              std::to_string(Manifold::expected_dim(n_atoms, 0)));
    }
    if (!initial_state.empty()) {
        double nrm2 = 0.0;
        for (const auto& c : initial_state) nrm2 += std::norm(c);
        if (!(nrm2 > 0.0) || !std::isfinite(nrm2)) {
            throw InvalidArgument("initial_state must be a finite nonzero vector");
        }
    }
}

std::uint64_t mix_seed(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index) noexcept {
    return mix_seed(master_seed ^ mix_seed(index));
}

double uniform01(std::mt19937_64& rng) noexcept {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

TrajectoryState::TrajectoryState(int n, std::uint64_t seed, std::vector<cplx> psi0)
    : n_initial(n), n_alive(n), k(0), rng(seed) {
    const std::size_t dim = Manifold::expected_dim(n, 0);
    if (psi0.empty()) {
        psi.assign(dim, cplx{});
        psi[0] = 1.0;
    } else {
        if (psi0.size() != dim) {
            throw InvalidArgument("TrajectoryState: initial vector has wrong dimension");
        }
        psi = std::move(psi0);
        const double nrm = std::sqrt(norm2());
        if (!(nrm > 0.0)) {
            throw InvalidArgument("TrajectoryState: initial vector is zero");
        }
        for (auto& c : psi) c /= nrm;
    }
    jump_level = 1.0 - uniform01(rng);  // (0, 1]
}

double TrajectoryState::norm2() const noexcept {
    double s = 0.0;
    for (const auto& c : psi) s += std::norm(c);
    return s;
}

ManifoldOperators::ManifoldOperators(int n_atoms, int k, const SystemParams& p)
    : manifold(n_atoms, k),
      fixed(build_conditional(manifold, 0.0, p)),
      drive(build_hamiltonian(manifold, 1.0, SystemParams{0.0, 0.0, 0.0, 0.0})) {
    if (k < n_atoms) {
        cavity_jump = std::make_unique<SparseOperator>(build_cavity_jump(manifold));
        spont_jump = std::make_unique<SparseOperator>(build_spont_jump(manifold));
    }
    fixed_radius = fixed.gershgorin_radius();
    drive_radius = drive.gershgorin_radius();
}

const ManifoldOperators& OperatorCache::get(int n_atoms, int k) {
    auto& slot = cache_[{n_atoms, k}];
    if (!slot) {
        slot = std::make_unique<ManifoldOperators>(n_atoms, k, params_);
    }
    return *slot;
}

namespace {

// out = -i (fixed + r drive) in
void generator(const ManifoldOperators& ops, double r, std::span<const cplx> in,
               std::span<cplx> out) {
    ops.fixed.apply(in, out);
    if (r != 0.0) {
        ops.drive.apply_add(in, out, r);
    }
    for (auto& v : out) {
        v = cplx{v.imag(), -v.real()};
    }
}

}  // namespace

void propagate_step(TrajectoryState& state, const PulseSchedule& pulse, OperatorCache& cache,
                    double dt) {
    if (!(dt > 0.0)) {
        throw InvalidArgument("propagate_step: dt must be > 0");
    }
    const ManifoldOperators& ops = cache.get(state.n_alive, state.k);
    const std::size_t n = state.psi.size();
    const double r0 = pulse.value(state.t);
    const double rh = pulse.value(state.t + 0.5 * dt);
    const double r1 = pulse.value(state.t + dt);

    std::vector<cplx> k1(n), k2(n), k3(n), k4(n), tmp(n);
    generator(ops, r0, state.psi, k1);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = state.psi[i] + 0.5 * dt * k1[i];
    generator(ops, rh, tmp, k2);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = state.psi[i] + 0.5 * dt * k2[i];
    generator(ops, rh, tmp, k3);
    for (std::size_t i = 0; i < n; ++i) tmp[i] = state.psi[i] + dt * k3[i];
    generator(ops, r1, tmp, k4);

    const double before = state.norm2();
    for (std::size_t i = 0; i < n; ++i) {
        tmp[i] = state.psi[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    double after = 0.0;
    for (const auto& c : tmp) after += std::norm(c);
    if (after > before * (1.0 + kNormGrowthTolerance) || !std::isfinite(after)) {
        throw NumericalError("propagate_step: norm grew from " + std::to_string(before) + " to " +
                             std::to_string(after) + "; dt too large");
    }
    state.psi.swap(tmp);
    state.t += dt;
}

void propagate_step(TrajectoryState& state, const PulseSchedule& pulse, const SystemParams& p,
                    double dt) {
    OperatorCache cache(p);
    propagate_step(state, pulse, cache, dt);
}

Expectations normalized_expectations(const TrajectoryState& state, const Manifold& m) {
    Expectations e;
    double total = 0.0;
    for (std::size_t i = 0; i < state.psi.size(); ++i) {
        const double w = std::norm(state.psi[i]);
        total += w;
        e.photons += w * m[i].l;
        e.excited += w * m[i].n1;
        e.ground += w * m[i].n0;
    }
    if (total > 0.0) {
        e.photons /= total;
        e.excited /= total;
        e.ground /= total;
    }
    return e;
}

void apply_jump(TrajectoryState& state, OperatorCache& cache, JumpChannel channel) {
    const ManifoldOperators& ops = cache.get(state.n_alive, state.k);
    const SparseOperator* op =
        channel == JumpChannel::cavity ? ops.cavity_jump.get() : ops.spont_jump.get();
    if (op == nullptr) {
        throw NumericalError("apply_jump: no " + to_string(channel) + " jump from e(" +
                             std::to_string(state.n_alive) + "," + std::to_string(state.k) + ")");
    }
    std::vector<cplx> next = (*op) * std::span<const cplx>(state.psi);
    double nrm2 = 0.0;
    for (const auto& c : next) nrm2 += std::norm(c);
    if (!(nrm2 > 0.0)) {
        throw NumericalError("apply_jump: " + to_string(channel) + " jump annihilates the state");
    }
    const double inv = 1.0 / std::sqrt(nrm2);
    for (auto& c : next) c *= inv;
    state.psi = std::move(next);
    if (channel == JumpChannel::cavity) {
        ++state.k;
        ++state.cavity_jumps;
    } else {
        --state.n_alive;
        ++state.spont_jumps;
    }
}

namespace {

JumpChannel draw_channel(TrajectoryState& state, OperatorCache& cache) {
    const ManifoldOperators& ops = cache.get(state.n_alive, state.k);
    const SystemParams& p = cache.params();
    double photons = 0.0;
    double excited = 0.0;
    for (std::size_t i = 0; i < state.psi.size(); ++i) {
        const double w = std::norm(state.psi[i]);
        photons += w * ops.manifold[i].l;
        excited += w * ops.manifold[i].n1;
    }
    const double w_cav = 2.0 * p.kappa * photons;
    const double w_sp = 2.0 * p.gamma * excited;
    if (!(w_cav + w_sp > 0.0)) {
        throw NumericalError("impossible jump: both channel weights vanish at t=" +
                             std::to_string(state.t));
    }
    return uniform01(state.rng) * (w_cav + w_sp) < w_cav ? JumpChannel::cavity
                                                         : JumpChannel::spontaneous;
}

}  // namespace

std::optional<JumpChannel> maybe_jump(TrajectoryState& state, OperatorCache& cache) {
    if (state.norm2() > state.jump_level) {
        return std::nullopt;
    }
    const JumpChannel ch = draw_channel(state, cache);
    apply_jump(state, cache, ch);
    state.jump_level = 1.0 - uniform01(state.rng);
    return ch;
}

std::optional<JumpChannel> maybe_jump_per_step(TrajectoryState& state, OperatorCache& cache) {
    const double n2 = state.norm2();
    const double lost = 1.0 - n2;
    if (uniform01(state.rng) < lost) {
        const JumpChannel ch = draw_channel(state, cache);
        apply_jump(state, cache, ch);
        return ch;
    }
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& c : state.psi) c *= inv;
    return std::nullopt;
}

namespace {

class TrajectoryRunner {
  public:
    TrajectoryRunner(const TrajectoryConfig& cfg, std::uint64_t seed)
        : cfg_(cfg),
          cache_(cfg.params),
          state_(cfg.n_atoms, seed, cfg.initial_state),
          open_(cfg.params.kappa > 0.0 || cfg.params.gamma > 0.0) {}

    TrajectoryRecord run() {
        TrajectoryRecord rec;
        rec.dt = cfg_.dt;
        rec.sample_stride = cfg_.sample_stride;
        rec.n_initial = cfg_.n_atoms;
        sample(rec);

        const double earliest_stop = std::max(cfg_.min_time, cfg_.pulse.settle_time());
        bool armed = false;
        try {
            for (std::size_t step = 1;; ++step) {
                const double t_start = static_cast<double>(step - 1) * cfg_.dt;
                state_.t = t_start;
                const int n_sub = substeps_for(t_start);
                const double h = cfg_.dt / n_sub;
                for (int s = 0; s < n_sub; ++s) {
                    advance(h, 0, rec);
                }
                state_.t = static_cast<double>(step) * cfg_.dt;
                rec.steps = step;
                rec.max_substeps = std::max<std::size_t>(rec.max_substeps, n_sub);

                if (step % cfg_.sample_stride == 0) {
                    sample(rec);
                }
                const ManifoldOperators& ops = cache_.get(state_.n_alive, state_.k);
                if (ops.manifold.dim() == 1) {
                    break;
                }
                const Expectations e = normalized_expectations(state_, ops.manifold);
                const double cav = 2.0 * cfg_.params.kappa * e.photons;
                const double sp = 2.0 * cfg_.params.gamma * e.excited;
                const bool quiet = cav < cfg_.stop_threshold && sp < cfg_.stop_threshold;
                armed = armed || !quiet;
                if (armed && quiet && state_.t >= earliest_stop) {
                    break;
                }
                if (step >= cfg_.max_steps) {
                    rec.max_steps_exceeded = true;
                    break;
                }
            }
        } catch (const NumericalError& err) {
            rec.aborted = true;
            rec.diagnostic = err.what();
        }

        const ManifoldOperators& ops = cache_.get(state_.n_alive, state_.k);
        const Expectations e = normalized_expectations(state_, ops.manifold);
        rec.residual_quanta = e.ground + e.excited + e.photons;
        rec.cavity_jumps = state_.cavity_jumps;
        rec.spont_jumps = state_.spont_jumps;
        rec.final_n_alive = state_.n_alive;
        rec.final_k = state_.k;
        rec.final_time = state_.t;
        return rec;
    }

  private:
    int substeps_for(double t) {
        const ManifoldOperators& ops = cache_.get(state_.n_alive, state_.k);
        const double r_max = std::max({cfg_.pulse.value(t), cfg_.pulse.value(t + 0.5 * cfg_.dt),
                                       cfg_.pulse.value(t + cfg_.dt)});
        const double radius = ops.fixed_radius + r_max * ops.drive_radius;
        return std::max(1, static_cast<int>(std::ceil(radius * cfg_.dt / kMaxPhasePerStep)));
    }

    // One substep of length h, split in halves while the norm guard trips.
    void advance(double h, int depth, TrajectoryRecord& rec) {
        const std::vector<cplx> saved = state_.psi;
        const double t0 = state_.t;
        try {
            propagate_step(state_, cfg_.pulse, cache_, h);
        } catch (const NumericalError&) {
            if (depth >= kMaxHalvings) {
                throw;
            }
            state_.psi = saved;
            state_.t = t0;
            rec.max_substeps = std::max<std::size_t>(rec.max_substeps, std::size_t{2} << depth);
            advance(0.5 * h, depth + 1, rec);
            advance(0.5 * h, depth + 1, rec);
            return;
        }
        if (!open_) {
            return;
        }
        const auto ch = cfg_.jump_scheme == JumpScheme::threshold
                            ? maybe_jump(state_, cache_)
                            : maybe_jump_per_step(state_, cache_);
        if (ch) {
            rec.jumps.push_back({state_.t, *ch});
        }
    }

    void sample(TrajectoryRecord& rec) {
        const ManifoldOperators& ops = cache_.get(state_.n_alive, state_.k);
        const Expectations e = normalized_expectations(state_, ops.manifold);
        rec.times.push_back(static_cast<double>(rec.times.size() * cfg_.sample_stride) * cfg_.dt);
        rec.photons.push_back(e.photons);
        rec.excited.push_back(e.excited);
        rec.norm.push_back(state_.norm2());
    }

    const TrajectoryConfig& cfg_;
    OperatorCache cache_;
    TrajectoryState state_;
    bool open_;
};

}  // namespace

TrajectoryRecord run_trajectory(const TrajectoryConfig& config, std::uint64_t seed) {
    config.validate();
    TrajectoryRunner runner(config, seed);
    return runner.run();
}

}  // namespace fockgen
