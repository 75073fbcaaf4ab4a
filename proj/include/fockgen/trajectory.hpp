// trajectory.hpp - single quantum-jump trajectory of the driven N-atom/cavity
// system: RK4 propagation under the conditional Hamiltonian, interrupted by
// cavity-emission (a) and spontaneous-decay (b1) jumps that move the state
// between manifolds.

#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "fockgen/basis.hpp"
#include "fockgen/operators.hpp"
#include "fockgen/pulse.hpp"

namespace fockgen {

enum class JumpScheme {
    threshold,  // waiting-time: jump when ||psi||^2 drops below a pre-drawn uniform level
    per_step,   // first-order: jump with probability equal to the norm lost in the step
};

enum class JumpChannel { cavity, spontaneous };

[[nodiscard]] std::string to_string(JumpScheme s);
[[nodiscard]] JumpScheme parse_jump_scheme(const std::string& name);
[[nodiscard]] std::string to_string(JumpChannel c);

struct TrajectoryConfig {
    int n_atoms{1};
    SystemParams params{};
    PulseSchedule pulse = PulseSchedule::linear(1.0 / 30.0);
    double dt{0.1};
    double stop_threshold{1e-6};  // on both 2 kappa <a+a> and 2 gamma <b1+b1>
    double min_time{0.0};
    std::size_t max_steps{200000};
    std::size_t sample_stride{1};
    JumpScheme jump_scheme{JumpScheme::threshold};
    // Optional start vector over e(n_atoms, 0); empty means |N,0,0,0>.
    std::vector<cplx> initial_state;

    void validate() const;
};

// SplitMix64 finalizer, used to derive independent per-trajectory seeds.
[[nodiscard]] std::uint64_t mix_seed(std::uint64_t x) noexcept;
[[nodiscard]] std::uint64_t trajectory_seed(std::uint64_t master_seed, std::uint64_t index) noexcept;

// Uniform double in [0, 1) from the top 53 bits, identical on every platform.
[[nodiscard]] double uniform01(std::mt19937_64& rng) noexcept;

struct TrajectoryState {
    int n_initial{0};
    int n_alive{0};
    int k{0};
    std::vector<cplx> psi;  // over e(n_alive, k); unnormalized between jumps
    double t{0.0};
    int cavity_jumps{0};
    int spont_jumps{0};
    double jump_level{0.0};  // threshold-scheme level xi
    std::mt19937_64 rng;

    // Start from `psi0` in e(n, 0) (or |N,0,0,0> when empty), with the first
    // jump level drawn from the seeded stream.
    TrajectoryState(int n, std::uint64_t seed, std::vector<cplx> psi0 = {});

    [[nodiscard]] double norm2() const noexcept;
};

// Per-manifold operators reused across steps: H_cond(r) = fixed + r * drive.
struct ManifoldOperators {
    Manifold manifold;
    SparseOperator fixed;  // H_cond at r = 0
    SparseOperator drive;  // b1+b0 + b0+b1
    std::unique_ptr<SparseOperator> cavity_jump;  // null when k = N
    std::unique_ptr<SparseOperator> spont_jump;   // null when N = 0 or k = N
    double fixed_radius{0.0};
    double drive_radius{0.0};

    ManifoldOperators(int n_atoms, int k, const SystemParams& p);
};

class OperatorCache {
  public:
    explicit OperatorCache(SystemParams p) : params_(p) {}
    const ManifoldOperators& get(int n_atoms, int k);
    [[nodiscard]] const SystemParams& params() const noexcept { return params_; }

  private:
    SystemParams params_;
    std::map<std::pair<int, int>, std::unique_ptr<ManifoldOperators>> cache_;
};

// Advance psi by one RK4 step of i dpsi/dt = H_cond(r(t)) psi, with r sampled
// at the RK4 stage times. Throws NumericalError if the squared norm grows by
// more than 1e-6 (relative) in the step, the signature of an unstable dt.
void propagate_step(TrajectoryState& state, const PulseSchedule& pulse, OperatorCache& cache,
                    double dt);
void propagate_step(TrajectoryState& state, const PulseSchedule& pulse, const SystemParams& p,
                    double dt);

struct JumpEvent {
    double t{0.0};
    JumpChannel channel{JumpChannel::cavity};
};

// Threshold scheme: fire when ||psi||^2 <= jump_level; the channel is drawn
// with weights 2 kappa <a+a> : 2 gamma <b1+b1>. Returns the channel when a
// jump happened. Throws NumericalError when both weights vanish at a crossing.
std::optional<JumpChannel> maybe_jump(TrajectoryState& state, OperatorCache& cache);
// Per-step scheme: psi is normalized at the start of the step, so the norm
// lost is the jump probability for this step. Renormalizes when no jump fires.
std::optional<JumpChannel> maybe_jump_per_step(TrajectoryState& state, OperatorCache& cache);

// Apply a (or b1) to psi, renormalize and move to the new manifold.
void apply_jump(TrajectoryState& state, OperatorCache& cache, JumpChannel channel);

struct Expectations {
    double photons{0.0};  // <a+a>
    double excited{0.0};  // <b1+b1>
    double ground{0.0};   // <b0+b0>
};

[[nodiscard]] Expectations normalized_expectations(const TrajectoryState& state,
                                                   const Manifold& m);

struct TrajectoryRecord {
    double dt{0.0};
    std::size_t sample_stride{1};
    std::vector<double> times;    // sample k at t = k * stride * dt
    std::vector<double> photons;  // normalized <a+a>
    std::vector<double> excited;  // normalized <b1+b1>
    std::vector<double> norm;     // ||psi||^2 (unnormalized between jumps)
    std::vector<JumpEvent> jumps;
    int n_initial{0};
    int cavity_jumps{0};
    int spont_jumps{0};
    int final_n_alive{0};
    int final_k{0};
    double final_time{0.0};
    std::size_t steps{0};
    std::size_t max_substeps{1};
    double residual_quanta{0.0};  // <b0+b0 + b1+b1 + a+a> in the final state
    bool max_steps_exceeded{false};
    bool aborted{false};
    std::string diagnostic;
};

// Runs from the configured initial state until both fluxes fall below
// stop_threshold (after they have once exceeded it, and after min_time and
// the pulse settle time), until a one-state manifold is reached, or until
// max_steps. Fully determined by (config, seed).
[[nodiscard]] TrajectoryRecord run_trajectory(const TrajectoryConfig& config, std::uint64_t seed);

}  // namespace fockgen
