// dark_state.hpp - closed-form null eigenvectors of H in each e(N, k), their
// normalization constants, derivative states and the moment identities that
// tie neighbouring manifolds together.
//
// In e(N, k) the dark state is
//
//     |psi_k> = (1/Z_k) sum_{l=0}^{N-k} (-1)^k (-x)^l / sqrt((N-k-l)! (l+k)! l!) |N-k-l, 0, l+k, l>
//
// with x = r/g the pump ratio. The (-1)^k phase makes a|psi_k> a positive
// multiple of |psi_{k+1}>. Every quantity below is evaluated by direct
// summation of this series.

#pragma once

#include <array>
#include <complex>
#include <string>
#include <vector>

namespace fockgen {

struct DarkState {
    int n_atoms{0};
    int k{0};
    double x{0.0};
    double z{1.0};                   // Z_k(x)
    std::vector<double> amplitudes;  // normalized, indexed like Manifold(n_atoms, k)

    [[nodiscard]] std::vector<std::complex<double>> as_complex() const;
};

// Scalar moments of the dark state, all from the closed-form series.
struct DarkMoments {
    double z{0.0};        // Z_k
    double z_prime{0.0};  // dZ_k/dx, term-wise analytic derivative
    double mean_l{0.0};   // <a+a>
    double mean_l2{0.0};  // <(a+a)^2>
    double variance{0.0}; // sum_l p_l (l - <l>)^2
};

struct DarkDerivatives {
    double y{0.0};            // Y_k: norm of d/dx |psi_k>
    double w{0.0};            // W_k: normalization of chi_k (zero when k = N)
    std::vector<double> phi;  // normalized d/dx |psi_k> over e(N, k); zero vector when y = 0
    std::vector<double> chi;  // normalized chi_k over e(N-1, k); empty when k = N
};

struct PropertyCheck {
    std::string name;
    bool applicable{true};
    bool passed{true};
    double lhs{0.0};
    double rhs{0.0};
    double residual{0.0};  // relative for identities, normalized excess for inequalities
};

struct PropertyReport {
    int n_atoms{0};
    int k{0};
    double x{0.0};
    std::array<PropertyCheck, 6> checks;

    [[nodiscard]] bool all_passed() const noexcept;
};

// Throws InvalidArgument unless 0 <= k <= N and x >= 0.
[[nodiscard]] DarkState dark_state(int n_atoms, int k, double x);
// Forms x = r/g; g must be strictly positive.
[[nodiscard]] DarkState dark_state_for_drive(int n_atoms, int k, double r, double g);

[[nodiscard]] DarkMoments dark_moments(int n_atoms, int k, double x);
[[nodiscard]] double avg_photons(int n_atoms, int k, double x);

[[nodiscard]] DarkDerivatives dark_derivatives(int n_atoms, int k, double x);

// The six moment identities/inequalities, each at relative tolerance `tol`.
// Properties 2, 4 and 5 reference manifold k+1 and are marked not applicable
// when k = N.
[[nodiscard]] PropertyReport property_suite(int n_atoms, int k, double x, double tol = 1e-10);

// (N-k) rdot_max^2 / ((k+1) g^2): bound on <dpsi/dt|dpsi/dt> along a drive
// whose slope never exceeds rdot_max.
[[nodiscard]] double max_angular_velocity_bound(int n_atoms, int k, double rdot_max, double g);

}  // namespace fockgen
