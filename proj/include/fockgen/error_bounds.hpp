// error_bounds.hpp - closed-form perturbative bounds on dark-state leakage and
// the resulting spontaneous-emission rates.
//
// min_bohr is always an explicit argument: callers pick either a regime
// heuristic or a measured value from spectral.hpp.

#pragma once

namespace fockgen {

struct BoundReport {
    int k{0};
    double min_bohr{0.0};
    double eps_cavity{0.0};
    double eps_adiabatic{0.0};
    double gamma_prime_small_delta{0.0};
    double gamma_prime_large_delta{0.0};
    double fractional_loss_bound{0.0};
    double eta{0.0};
    double effective_r{0.0};
};

// kappa^2 (N-k) / min_bohr^2
[[nodiscard]] double bound_cavity(int n_atoms, int k, double kappa, double min_bohr);

// (N-k) rdot^2 / ((k+1) g^2 min_bohr^2)
[[nodiscard]] double bound_adiabatic(int n_atoms, int k, double rdot_max, double g,
                                     double min_bohr);

// gamma [ (N-k)^2 rdot^2 / ((k+1) g^2 Delta^2) + kappa^2 (N-k)^2 / Delta^2 ]
[[nodiscard]] double spont_rate_small_delta(int n_atoms, int k, double gamma, double kappa,
                                            double rdot_max, double g, double delta);

// gamma [ (N-k) rdot^2 / ((k+1)^2 g^4) + kappa^2 (N-k) / ((k+1) g^2) ]
[[nodiscard]] double spont_rate_large_delta(int n_atoms, int k, double gamma, double kappa,
                                            double rdot_max, double g);

// gamma kappa / g^2
[[nodiscard]] double fractional_loss_bound(double gamma, double kappa, double g);

struct SmallPhotonParams {
    double eta{0.0};          // (r/g) sqrt((N-k)/(k+1))
    double effective_r{0.0};  // r sqrt((N-k)/(N(k+1)))
};

[[nodiscard]] SmallPhotonParams small_photon_params(int n_atoms, int k, double r, double g);

// Minimal Bohr frequency by regime: |Delta| when |Delta| < g, otherwise the
// second-order level (k+1)(g^2 + r^2)/|Delta|.
[[nodiscard]] double heuristic_min_bohr(int k, double r, double g, double delta);

// Every field of BoundReport for one manifold.
[[nodiscard]] BoundReport bound_report(int n_atoms, int k, double r, double rdot_max, double g,
                                       double delta, double kappa, double gamma, double min_bohr);

}  // namespace fockgen
