#include "fockgen/dark_state.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fockgen/basis.hpp"
#include "fockgen/errors.hpp"

namespace fockgen {

namespace {

constexpr int kFactorialTableMax = 170;
constexpr int kLogDomainAbove = 30;

const std::array<double, kFactorialTableMax + 1>& factorial_table() {
    static const auto table = [] {
        std::array<double, kFactorialTableMax + 1> t{};
        t[0] = 1.0;
        for (int i = 1; i <= kFactorialTableMax; ++i) {
            t[i] = t[i - 1] * i;
        }
        return t;
    }();
    return table;
}

void check_labels(int n_atoms, int k, double x, const char* who) {
    if (n_atoms < 0 || k < 0 || k > n_atoms) {
        throw InvalidArgument(std::string(who) + ": need 0 <= k <= N, got N=" +
                              std::to_string(n_atoms) + " k=" + std::to_string(k));
    }
    if (!(x >= 0.0) || !std::isfinite(x)) {
        throw InvalidArgument(std::string(who) + ": x must be finite and >= 0");
    }
}

// Series over l = 0..N-k with weight 1/((N-k-l)! (l+k)! l!).
class DarkSeries {
  public:
    DarkSeries(int n_atoms, int k, double x) : n_(n_atoms), k_(k), x_(x) {}

    [[nodiscard]] int terms() const noexcept { return n_ - k_ + 1; }

    // sqrt of the weight; the "log domain" branch avoids factorial overflow.
    [[nodiscard]] double sqrt_weight(int l) const {
        const int a = n_ - k_ - l;
        const int b = l + k_;
        if (n_ <= kLogDomainAbove) {
            const auto& f = factorial_table();
            return 1.0 / std::sqrt(f[a] * f[b] * f[l]);
        }
        return std::exp(-0.5 * (std::lgamma(a + 1.0) + std::lgamma(b + 1.0) +
                                std::lgamma(l + 1.0)));
    }

    // c_l = (-1)^(l+k) x^l sqrt(w_l), i.e. (-x)^j / sqrt(...) with j = l + k
    // and the common factor x^k dropped so that x = 0 still works.
    [[nodiscard]] double coefficient(int l) const {
        const double mag = (l == 0) ? 1.0 : std::pow(x_, l);
        return sign(l) * mag * sqrt_weight(l);
    }

    // dc_l/dx = (-1)^(l+k) l x^(l-1) sqrt(w_l)
    [[nodiscard]] double coefficient_prime(int l) const {
        if (l == 0) {
            return 0.0;
        }
        const double mag = (l == 1) ? 1.0 : std::pow(x_, l - 1);
        return sign(l) * l * mag * sqrt_weight(l);
    }

  private:
    [[nodiscard]] double sign(int l) const noexcept { return ((l + k_) % 2 == 0) ? 1.0 : -1.0; }

    int n_;
    int k_;
    double x_;
};

std::size_t dark_index(const Manifold& m, int l) {
    const int n = m.n_atoms();
    const int k = m.k();
    return m.index_of({n - k - l, 0, l + k, l});
}

double relative_gap(double a, double b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0.0 ? std::abs(a - b) / scale : 0.0;
}

PropertyCheck identity(std::string name, double lhs, double rhs, double tol) {
    PropertyCheck c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    c.residual = relative_gap(lhs, rhs);
    c.passed = c.residual <= tol;
    return c;
}

// lhs <= rhs, allowing rounding at relative tolerance tol.
PropertyCheck inequality(std::string name, double lhs, double rhs, double tol) {
    PropertyCheck c;
    c.name = std::move(name);
    c.lhs = lhs;
    c.rhs = rhs;
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    c.residual = std::max(0.0, lhs - rhs) / scale;
    c.passed = c.residual <= tol;
    return c;
}

PropertyCheck not_applicable(std::string name) {
    PropertyCheck c;
    c.name = std::move(name);
    c.applicable = false;
    return c;
}

}  // namespace

std::vector<std::complex<double>> DarkState::as_complex() const {
    return {amplitudes.begin(), amplitudes.end()};
}

DarkState dark_state(int n_atoms, int k, double x) {
    check_labels(n_atoms, k, x, "dark_state");
    const Manifold m(n_atoms, k);
    const DarkSeries series(n_atoms, k, x);

    DarkState out;
    out.n_atoms = n_atoms;
    out.k = k;
    out.x = x;
    out.amplitudes.assign(m.dim(), 0.0);
    double z2 = 0.0;
    for (int l = 0; l < series.terms(); ++l) {
        const double c = series.coefficient(l);
        out.amplitudes[dark_index(m, l)] = c;
        z2 += c * c;
    }
    out.z = std::sqrt(z2);
    for (double& a : out.amplitudes) {
        a /= out.z;
    }
    return out;
}

DarkState dark_state_for_drive(int n_atoms, int k, double r, double g) {
    if (!(g > 0.0)) {
        throw InvalidArgument("dark_state_for_drive: g must be > 0 to form x = r/g");
    }
    return dark_state(n_atoms, k, r / g);
}

DarkMoments dark_moments(int n_atoms, int k, double x) {
    check_labels(n_atoms, k, x, "dark_moments");
    const DarkSeries series(n_atoms, k, x);
    double z2 = 0.0;
    double z2_prime_half = 0.0;  // (1/2) d(Z^2)/dx = sum_l c_l c_l'
    double sum_l = 0.0;
    double sum_l2 = 0.0;
    for (int l = 0; l < series.terms(); ++l) {
        const double c = series.coefficient(l);
        const double t = c * c;
        z2 += t;
        z2_prime_half += c * series.coefficient_prime(l);
        sum_l += l * t;
        sum_l2 += double(l) * l * t;
    }
    DarkMoments out;
    out.z = std::sqrt(z2);
    out.z_prime = z2_prime_half / out.z;
    out.mean_l = sum_l / z2;
    out.mean_l2 = sum_l2 / z2;
    double var = 0.0;
    for (int l = 0; l < series.terms(); ++l) {
        const double c = series.coefficient(l);
        const double dev = l - out.mean_l;
        var += dev * dev * c * c;
    }
    out.variance = var / z2;
    return out;
}

double avg_photons(int n_atoms, int k, double x) { return dark_moments(n_atoms, k, x).mean_l; }

DarkDerivatives dark_derivatives(int n_atoms, int k, double x) {
    check_labels(n_atoms, k, x, "dark_derivatives");
    const Manifold m(n_atoms, k);
    const DarkSeries series(n_atoms, k, x);
    const DarkMoments mom = dark_moments(n_atoms, k, x);

    DarkDerivatives out;
    // d/dx psi = (1/Z) sum_l c_l' |l> - (Z'/Z) psi
    std::vector<double> v(m.dim(), 0.0);
    double y2 = 0.0;
    for (int l = 0; l < series.terms(); ++l) {
        const double psi_l = series.coefficient(l) / mom.z;
        const double val = series.coefficient_prime(l) / mom.z - (mom.z_prime / mom.z) * psi_l;
        v[dark_index(m, l)] = val;
        y2 += val * val;
    }
    out.y = std::sqrt(y2);
    out.phi.assign(m.dim(), 0.0);
    if (out.y > 0.0) {
        for (std::size_t i = 0; i < v.size(); ++i) {
            out.phi[i] = v[i] / out.y;
        }
    }

    if (k < n_atoms) {
        const Manifold mc(n_atoms - 1, k);
        const DarkSeries chi_series(n_atoms - 1, k, x);
        out.chi.assign(mc.dim(), 0.0);
        double w2 = 0.0;
        for (int l = 0; l < chi_series.terms(); ++l) {
            const double c = chi_series.coefficient(l);
            out.chi[dark_index(mc, l)] = c;
            w2 += c * c;
        }
        out.w = std::sqrt(w2);
        for (double& c : out.chi) {
            c /= out.w;
        }
    }
    return out;
}

bool PropertyReport::all_passed() const noexcept {
    return std::all_of(checks.begin(), checks.end(),
                       [](const PropertyCheck& c) { return !c.applicable || c.passed; });
}

PropertyReport property_suite(int n_atoms, int k, double x, double tol) {
    check_labels(n_atoms, k, x, "property_suite");
    PropertyReport rep;
    rep.n_atoms = n_atoms;
    rep.k = k;
    rep.x = x;

    const DarkMoments cur = dark_moments(n_atoms, k, x);
    const DarkDerivatives der = dark_derivatives(n_atoms, k, x);
    const bool has_next = k < n_atoms;

    rep.checks[0] = identity("P1 x Z'/Z = <l>", x * cur.z_prime / cur.z, cur.mean_l, tol);
    rep.checks[2] = identity("P3 Var(a+a) = (x Y)^2", cur.variance, (x * der.y) * (x * der.y), tol);
    rep.checks[5] = inequality("P6 Var(a+a) <= N-k", cur.variance, double(n_atoms - k), tol);

    if (has_next) {
        const DarkMoments next = dark_moments(n_atoms, k + 1, x);
        const double ratio = x * next.z / cur.z;
        rep.checks[1] = identity("P2 (x Z_{k+1}/Z_k)^2 = <l>", ratio * ratio, cur.mean_l, tol);
        rep.checks[3] = identity("P4 <l^2>_k = <l>_k (<l>_{k+1} + 1)", cur.mean_l2,
                                 cur.mean_l * (next.mean_l + 1.0), tol);
        rep.checks[4] = inequality("P5 <l>_{k+1} <= <l>_k", next.mean_l, cur.mean_l, tol);
    } else {
        rep.checks[1] = not_applicable("P2 (x Z_{k+1}/Z_k)^2 = <l>");
        rep.checks[3] = not_applicable("P4 <l^2>_k = <l>_k (<l>_{k+1} + 1)");
        rep.checks[4] = not_applicable("P5 <l>_{k+1} <= <l>_k");
    }
    return rep;
}

double max_angular_velocity_bound(int n_atoms, int k, double rdot_max, double g) {
    if (n_atoms < 0 || k < 0 || k > n_atoms) {
        throw InvalidArgument("max_angular_velocity_bound: need 0 <= k <= N");
    }
    if (!(rdot_max >= 0.0)) {
        throw InvalidArgument("max_angular_velocity_bound: rdot_max must be >= 0");
    }
    if (!(g > 0.0)) {
        throw InvalidArgument("max_angular_velocity_bound: g must be > 0");
    }
    return (n_atoms - k) * rdot_max * rdot_max / ((k + 1) * g * g);
}

}  // namespace fockgen
