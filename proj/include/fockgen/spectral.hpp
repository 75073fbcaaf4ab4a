// spectral.hpp - exact diagonalization of H on a manifold, Bohr frequencies
// relative to the dark state, first-order non-darkness sums and checks of the
// strong-pump (Schwinger) and weak-pump (Tavis-Cummings) limits.

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fockgen/basis.hpp"
#include "fockgen/operators.hpp"

namespace fockgen {

struct SpectrumReport {
    std::vector<double> eigenvalues;  // ascending
    Eigen::MatrixXd eigenvectors;     // columns, same order as eigenvalues
    std::size_t dark_index{0};
    double dark_overlap{0.0};      // |<v_dark|psi_dark>|^2, 1 when no dark reference (g = 0)
    bool degenerate_dark{false};   // >1 eigenvalue within 1e-8 * spectral radius of zero
    double spectral_radius{0.0};
    double min_bohr{0.0};          // min_{i != dark} |w_i - w_dark|; +inf for dim 1
    double min_bohr_coupled{0.0};  // same, restricted to states coupled to the dark state
    std::vector<double> cavity_coupling;     // |<v_i| a+a |psi_dark>|
    std::vector<double> adiabatic_coupling;  // |<v_i| phi_dark>|, phi = normalized d/dx psi
};

// Coupling threshold, relative to the operator scale max(1, N-k), below which
// an eigenstate counts as decoupled from the dark state.
inline constexpr double kCouplingThreshold = 1e-10;
// Relative window around zero used to flag a degenerate null space.
inline constexpr double kDegenerateDarkTolerance = 1e-8;

[[nodiscard]] SpectrumReport eigendecompose(const Manifold& m, double r, const SystemParams& p);

// Throws InvalidArgument on a one-state manifold (no Bohr frequency exists).
[[nodiscard]] double min_bohr_frequency(const Manifold& m, double r, const SystemParams& p,
                                        bool coupled_only);

// kappa^2 sum_{i != dark} |<v_i|a+a|psi>|^2 / w_i^2. SingularError when a
// coupled state is degenerate with the dark state.
[[nodiscard]] double exact_nondarkness_cavity(const Manifold& m, double r, const SystemParams& p);

// sum_{i != dark} |<v_i|dpsi/dt>|^2 / w_i^2 with dpsi/dt = (rdot/g) Y phi.
[[nodiscard]] double exact_nondarkness_adiabatic(const Manifold& m, double r, double rdot,
                                                 const SystemParams& p);

// Max deviation between the spectrum of H and {-Delta j + Omega m_eta},
// Omega = sqrt(4 r^2 + Delta^2), matched in sorted order and divided by the
// spectral radius of the analytic set.
[[nodiscard]] double schwinger_limit_check(int n_atoms, int k, double r, const SystemParams& p);

struct DegeneracyRow {
    double f{0.0};              // (n1 + n2) / 2
    std::size_t block_size{0};  // states of e(N,k) in this f sector
    std::size_t expected{0};    // 2(f - k/2) + 1
    double min_number_overlap{0.0};  // min over block eigenstates of max_j |<j|v>|^2
};

struct TavisCummingsReport {
    std::vector<DegeneracyRow> rows;
    bool blocks_unmixed{true};     // H(r=0) has no entry joining different f
    bool sizes_match{true};
    bool spectrum_matches{true};   // union of block spectra equals the full spectrum
    double min_number_overlap{1.0};
};

[[nodiscard]] TavisCummingsReport tavis_cummings_check(int n_atoms, int k, const SystemParams& p);

struct Crossing {
    double x{0.0};
    std::size_t eigen_index{0};
    double eigenvalue{0.0};
    double cavity_coupling{0.0};
    double adiabatic_coupling{0.0};
};

// Locates x where a non-dark level passes through zero (bisection between grid
// points whose count of negative non-dark levels differs, plus grid points
// already within tolerance of zero) and reports the crossing level's couplings.
[[nodiscard]] std::vector<Crossing> degenerate_crossing_scan(int n_atoms, int k,
                                                             const SystemParams& p,
                                                             std::span<const double> x_grid);

}  // namespace fockgen
