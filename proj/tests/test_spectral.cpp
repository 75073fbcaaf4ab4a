#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "fockgen/dark_state.hpp"
#include "fockgen/error_bounds.hpp"
#include "fockgen/errors.hpp"
#include "fockgen/operators.hpp"
#include "fockgen/spectral.hpp"

using namespace fockgen;
using doctest::Approx;

TEST_CASE("e(1,0) spectrum matches the 3x3 characteristic polynomial") {
    for (double r : {0.0, 0.4, 2.0, 10.0}) {
        for (double delta : {-2.0, -0.1, 0.5, 20.0}) {
            const SystemParams p{1.0, delta, 0.0, 0.0};
            const SpectrumReport rep = eigendecompose(Manifold(1, 0), r, p);
            const double disc = std::sqrt(delta * delta + 4 * (r * r + 1.0));
            std::vector<double> ref{0.0, (-delta + disc) / 2, (-delta - disc) / 2};
            std::sort(ref.begin(), ref.end());
            for (int i = 0; i < 3; ++i) CHECK(rep.eigenvalues[i] == Approx(ref[i]).epsilon(1e-13).scale(1.0));
            CHECK(std::abs(rep.eigenvalues[rep.dark_index]) < 1e-12);
            CHECK(rep.dark_overlap == Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("diagonal limit r = g = 0 gives -delta n1") {
    const Manifold m(3, 0);
    const SpectrumReport rep = eigendecompose(m, 0.0, SystemParams{0.0, -1.5, 0.0, 0.0});
    std::vector<double> ref;
    for (const auto& s : m.states()) ref.push_back(1.5 * s.n1);
    std::sort(ref.begin(), ref.end());
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(rep.eigenvalues[i] == Approx(ref[i]));
}

TEST_CASE("dark eigenvector and coupling sum rules") {
    const SystemParams p{1.0, -2.0, 0.1, 0.05};
    for (int n = 1; n <= 6; ++n) {
        for (int k = 0; k < n; ++k) {
            for (double x : {0.3, 1.0, 2.5}) {
                const SpectrumReport rep = eigendecompose(Manifold(n, k), x, p);
                CHECK(std::abs(rep.eigenvalues[rep.dark_index]) <= 1e-10 * rep.spectral_radius);
                CHECK(rep.dark_overlap > 1 - 1e-10);
                CHECK(rep.min_bohr_coupled >= rep.min_bohr);
                // sum_{i != dark} |<i|a+a|dark>|^2 = Var(a+a)
                double s = 0.0;
                for (std::size_t i = 0; i < rep.cavity_coupling.size(); ++i)
                    if (i != rep.dark_index) s += rep.cavity_coupling[i] * rep.cavity_coupling[i];
                CHECK(s == Approx(dark_moments(n, k, x).variance).epsilon(1e-10).scale(1.0));
                // completeness for the normalized derivative state
                double t = 0.0;
                for (double c : rep.adiabatic_coupling) t += c * c;
                CHECK(t == Approx(1.0).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("minimal Bohr frequency") {
    // N=1, r=0, |delta| = 20 g: g^2/|delta|
    const double w = min_bohr_frequency(Manifold(1, 0), 0.0, SystemParams{1.0, -20.0, 0, 0}, false);
    CHECK(w == Approx(0.05).epsilon(0.1));
    CHECK_THROWS_AS((void)min_bohr_frequency(Manifold(2, 2), 1.0, SystemParams{}, false),
                    InvalidArgument);
    // small detuning: nearest level is of order delta
    const double ws = min_bohr_frequency(Manifold(1, 0), 1.0, SystemParams{1.0, -0.1, 0, 0}, true);
    CHECK(ws > 0.01);
    CHECK(ws < 2.0);
}

TEST_CASE("large-detuning Bohr frequency follows (k+1)(g^2+r^2)/|delta| at weak drive") {
    const SystemParams p{1.0, -20.0, 0.0, 0.0};
    for (int n = 1; n <= 5; ++n)
        for (int k = 0; k < n; ++k)
            for (double r : {0.05, 0.1, 0.2}) {
                const double w = min_bohr_frequency(Manifold(n, k), r, p, true);
                CHECK(w == Approx(heuristic_min_bohr(k, r, 1.0, -20.0)).epsilon(0.1));
            }
    // N = 1 at any drive
    for (double r : {0.5, 1.0, 3.0})
        CHECK(min_bohr_frequency(Manifold(1, 0), r, p, true) ==
              Approx((1 + r * r) / 20.0).epsilon(0.05));
}

TEST_CASE("k = N-1: adiabatic elimination gives ((k+1) g^2 + r^2)/|delta|") {
    // two dark-sector states |1,0,N-1,0>, |0,0,N,1>; b1 eliminated at second order
    const SystemParams p{1.0, -40.0, 0.0, 0.0};
    for (int n = 2; n <= 5; ++n)
        for (double r : {0.5, 1.0, 2.0}) {
            const double w = min_bohr_frequency(Manifold(n, n - 1), r, p, true);
            CHECK(w == Approx((n + r * r) / 40.0).epsilon(0.03));
        }
}

TEST_CASE("non-darkness sums") {
    const SystemParams p{1.0, -2.0, 0.1, 0.0};
    const Manifold m(2, 0);
    CHECK(exact_nondarkness_cavity(m, 1.0, SystemParams{1.0, -2.0, 0.0, 0.0}) == 0.0);
    CHECK(exact_nondarkness_cavity(m, 0.0, p) == Approx(0.0).scale(1.0));
    const double w = min_bohr_frequency(m, 1.0, p, true);
    CHECK(exact_nondarkness_cavity(m, 1.0, p) <= bound_cavity(2, 0, 0.1, w));
    CHECK(exact_nondarkness_adiabatic(m, 1.0, 0.0, p) == 0.0);
    const Manifold m3(3, 0);
    const double w3 = min_bohr_frequency(m3, 0.5, p, true);
    CHECK(exact_nondarkness_adiabatic(m3, 0.5, 0.01, p) <= bound_adiabatic(3, 0, 0.01, 1.0, w3));
}

TEST_CASE("derivative of the dark state along a ramp matches finite differences") {
    // psi-dot = rdot/g * dpsi/dx; the norm is what the adiabatic sum uses
    const double h = 1e-6, x = 0.8, rdot = 0.03;
    const auto plus = dark_state(3, 1, x + h).amplitudes;
    const auto minus = dark_state(3, 1, x - h).amplitudes;
    double fd2 = 0.0;
    for (std::size_t i = 0; i < plus.size(); ++i) {
        const double d = rdot * (plus[i] - minus[i]) / (2 * h);
        fd2 += d * d;
    }
    const double analytic = rdot * dark_derivatives(3, 1, x).y;
    CHECK(std::sqrt(fd2) == Approx(analytic).epsilon(1e-6));
}

TEST_CASE("Schwinger limit") {
    CHECK(schwinger_limit_check(2, 0, 100.0, SystemParams{1.0, -2.0, 0, 0}) < 0.01);
    CHECK(schwinger_limit_check(4, 1, 3.0, SystemParams{0.0, -2.0, 0, 0}) < 1e-14);
    CHECK(schwinger_limit_check(1, 0, 0.7, SystemParams{0.0, 1.3, 0, 0}) < 1e-14);
}

TEST_CASE("Tavis-Cummings degeneracy table") {
    const SystemParams p{1.0, -2.0, 0.0, 0.0};
    const TavisCummingsReport t53 = tavis_cummings_check(5, 3, p);
    CHECK(t53.blocks_unmixed);
    CHECK(t53.sizes_match);
    CHECK(t53.spectrum_matches);
    bool found = false;
    for (const auto& row : t53.rows) {
        CHECK(row.block_size == row.expected);
        CHECK(row.expected == static_cast<std::size_t>(2 * (row.f - 1.5) + 1 + 0.5));
        if (row.f == 1.5) {
            found = true;
            CHECK(row.block_size == 1);
        }
    }
    CHECK(found);

    const TavisCummingsReport t20 = tavis_cummings_check(2, 0, p);
    REQUIRE(t20.rows.size() == 3);
    for (const auto& row : t20.rows) {
        if (row.f == 1.0) CHECK(row.block_size == 3);
        if (row.f == 0.0) CHECK(row.block_size == 1);
    }
    // |delta| = 50 g: eigenstates close to number states
    CHECK(tavis_cummings_check(3, 1, SystemParams{1.0, -50.0, 0, 0}).min_number_overlap > 0.99);
}

TEST_CASE("degenerate crossing scan") {
    const std::vector<double> grid{0.0, 0.5, 1.0, 2.0, 5.0};
    CHECK(degenerate_crossing_scan(1, 0, SystemParams{1.0, -2.0, 0, 0}, grid).empty());
    CHECK(degenerate_crossing_scan(3, 0, SystemParams{1.0, -2.0, 0, 0}, {}).empty());
    std::vector<double> fine;
    for (int i = 0; i <= 100; ++i) fine.push_back(0.05 * i);
    for (const Crossing& c : degenerate_crossing_scan(4, 0, SystemParams{1.0, -10.0, 0, 0}, fine)) {
        CHECK(c.cavity_coupling < 1e-8);
        CHECK(c.adiabatic_coupling < 1e-8);
    }
}
