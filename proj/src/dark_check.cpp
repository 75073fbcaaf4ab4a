#include "fockgen/dark_check.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fockgen/basis.hpp"
#include "fockgen/dark_state.hpp"
#include "fockgen/errors.hpp"
#include "fockgen/operators.hpp"

namespace fockgen {

namespace {

double norm_inf(const std::vector<cplx>& v) {
    double m = 0.0;
    for (const auto& c : v) m = std::max(m, std::abs(c));
    return m;
}

}  // namespace

std::vector<DarkCheckRow> run_dark_checks(int n_max, std::span<const double> x_grid,
                                          const DarkCheckOptions& opts) {
    if (n_max < 1) throw InvalidArgument("n_max must be >= 1");
    if (x_grid.empty()) throw InvalidArgument("x grid is empty");
    for (double x : x_grid) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("x values must be >= 0");
    }
    std::vector<DarkCheckRow> rows;
    const SystemParams p{1.0, -2.0, 0.0, 0.0};

    for (int n = 1; n <= n_max; ++n) {
        for (int k = 0; k <= n; ++k) {
            const Manifold m(n, k);
            for (double x : x_grid) {
                const PropertyReport rep = property_suite(n, k, x, opts.property_tol);
                for (const auto& c : rep.checks) {
                    if (!c.applicable) continue;
                    rows.push_back({n, k, x, c.name, c.residual, opts.property_tol, c.passed});
                }

                const DarkState ds = dark_state(n, k, x);
                const std::vector<cplx> psi = ds.as_complex();
                const SparseOperator h = build_hamiltonian(m, x, p);
                const double scale = h.max_abs() > 0.0 ? h.max_abs() : 1.0;  // k = N: H is 0
                const double null_res = norm_inf(h * std::span<const cplx>(psi)) / scale;
                rows.push_back({n, k, x, "null H psi", null_res, opts.null_tol,
                                null_res <= opts.null_tol});

                if (k < n) {
                    // a psi_k = (x Z_{k+1}/Z_k) psi_{k+1}
                    const DarkState next = dark_state(n, k + 1, x);
                    const SparseOperator a = build_cavity_jump(m);
                    std::vector<cplx> lhs = a * std::span<const cplx>(psi);
                    const double coeff = x * next.z / ds.z;
                    double res2 = 0.0;
                    for (std::size_t i = 0; i < lhs.size(); ++i) {
                        res2 += std::norm(lhs[i] - coeff * next.amplitudes[i]);
                    }
                    const double res = std::sqrt(res2);
                    rows.push_back({n, k, x, "jump a psi_k", res, opts.jump_tol, res <= opts.jump_tol});
                }
            }

            // Y_k(0)^2 = (N-k)/(k+1) to rounding, and Y_k(x) <= Y_k(0) on the scan.
            const double y0 = dark_derivatives(n, k, 0.0).y;
            const double expect = static_cast<double>(n - k) / (k + 1);
            const double y0_tol = 8.0 * std::numeric_limits<double>::epsilon();
            const double y0_res = std::abs(y0 * y0 - expect) / std::max(1.0, expect);
            rows.push_back({n, k, 0.0, "Y_k(0)^2 = (N-k)/(k+1)", y0_res, y0_tol, y0_res <= y0_tol});

            double worst = -std::numeric_limits<double>::infinity();
            double worst_x = 0.0;
            for (int i = 0; i < opts.y_scan_points; ++i) {
                const double x = opts.y_scan_max * i / std::max(1, opts.y_scan_points - 1);
                const double excess = dark_derivatives(n, k, x).y - y0;
                if (excess > worst) {
                    worst = excess;
                    worst_x = x;
                }
            }
            const double excess = std::max(0.0, worst) / std::max(1.0, y0);
            rows.push_back({n, k, worst_x, "Y_k(x) <= Y_k(0)", excess, 1e-12, excess <= 1e-12});
        }
    }
    return rows;
}

}  // namespace fockgen
