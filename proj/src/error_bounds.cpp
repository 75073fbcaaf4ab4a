#include "fockgen/error_bounds.hpp"

#include <cmath>
#include <string>

#include "fockgen/errors.hpp"

namespace fockgen {

namespace {

void check_labels(int n_atoms, int k, const char* who) {
    if (n_atoms < 0 || k < 0 || k > n_atoms) {
        throw InvalidArgument(std::string(who) + ": need 0 <= k <= N");
    }
}

void check_positive(double v, const char* what) {
    if (!(v > 0.0)) {
        throw InvalidArgument(std::string(what) + " must be > 0");
    }
}

}  // namespace

double bound_cavity(int n_atoms, int k, double kappa, double min_bohr) {
    check_labels(n_atoms, k, "bound_cavity");
    if (min_bohr == 0.0) {
        throw SingularError("bound_cavity: minimal Bohr frequency is zero");
    }
    return kappa * kappa * (n_atoms - k) / (min_bohr * min_bohr);
}

double bound_adiabatic(int n_atoms, int k, double rdot_max, double g, double min_bohr) {
    check_labels(n_atoms, k, "bound_adiabatic");
    check_positive(g, "bound_adiabatic: g");
    if (min_bohr == 0.0) {
        throw SingularError("bound_adiabatic: minimal Bohr frequency is zero");
    }
    return (n_atoms - k) * rdot_max * rdot_max / ((k + 1) * g * g * min_bohr * min_bohr);
}

double spont_rate_small_delta(int n_atoms, int k, double gamma, double kappa, double rdot_max,
                              double g, double delta) {
    check_labels(n_atoms, k, "spont_rate_small_delta");
    check_positive(g, "spont_rate_small_delta: g");
    if (delta == 0.0) {
        throw SingularError("spont_rate_small_delta: Delta = 0");
    }
    const double m = n_atoms - k;
    const double d2 = delta * delta;
    return gamma * (m * m * rdot_max * rdot_max / ((k + 1) * g * g * d2) + kappa * kappa * m * m / d2);
}

double spont_rate_large_delta(int n_atoms, int k, double gamma, double kappa, double rdot_max,
                              double g) {
    check_labels(n_atoms, k, "spont_rate_large_delta");
    check_positive(g, "spont_rate_large_delta: g");
    const double m = n_atoms - k;
    const double kp1 = k + 1;
    const double g2 = g * g;
    return gamma * (m * rdot_max * rdot_max / (kp1 * kp1 * g2 * g2) + kappa * kappa * m / (kp1 * g2));
}

double fractional_loss_bound(double gamma, double kappa, double g) {
    check_positive(g, "fractional_loss_bound: g");
    return gamma * kappa / (g * g);
}

SmallPhotonParams small_photon_params(int n_atoms, int k, double r, double g) {
    check_labels(n_atoms, k, "small_photon_params");
    check_positive(g, "small_photon_params: g");
    SmallPhotonParams out;
    out.eta = (r / g) * std::sqrt(double(n_atoms - k) / (k + 1));
    out.effective_r = n_atoms > 0 ? r * std::sqrt(double(n_atoms - k) / (double(n_atoms) * (k + 1)))
                                  : 0.0;
    return out;
}

double heuristic_min_bohr(int k, double r, double g, double delta) {
    const double ad = std::abs(delta);
    if (ad < g) {
        return ad;
    }
    return (k + 1) * (g * g + r * r) / ad;
}

BoundReport bound_report(int n_atoms, int k, double r, double rdot_max, double g, double delta,
                         double kappa, double gamma, double min_bohr) {
    BoundReport rep;
    rep.k = k;
    rep.min_bohr = min_bohr;
    rep.eps_cavity = bound_cavity(n_atoms, k, kappa, min_bohr);
    rep.eps_adiabatic = bound_adiabatic(n_atoms, k, rdot_max, g, min_bohr);
    rep.gamma_prime_small_delta = spont_rate_small_delta(n_atoms, k, gamma, kappa, rdot_max, g, delta);
    rep.gamma_prime_large_delta = spont_rate_large_delta(n_atoms, k, gamma, kappa, rdot_max, g);
    rep.fractional_loss_bound = fractional_loss_bound(gamma, kappa, g);
    const SmallPhotonParams sp = small_photon_params(n_atoms, k, r, g);
    rep.eta = sp.eta;
    rep.effective_r = sp.effective_r;
    return rep;
}

}  // namespace fockgen
