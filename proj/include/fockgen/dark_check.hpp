// dark_check.hpp - grid sweep of the dark-state identities: null residual of
// H, the moment properties, the a-jump mapping and the angular-velocity
// bound Y_k(x) <= Y_k(0).

#pragma once

#include <span>
#include <string>
#include <vector>

namespace fockgen {

struct DarkCheckOptions {
    double property_tol{1e-10};
    double null_tol{1e-12};  // relative to max |H_ij|
    double jump_tol{1e-12};
    double y_scan_max{20.0};
    int y_scan_points{401};
};

struct DarkCheckRow {
    int n_atoms{0};
    int k{0};
    double x{0.0};
    std::string check;
    double residual{0.0};
    double tolerance{0.0};
    bool passed{true};
};

// For every 1 <= N <= n_max, 0 <= k <= N and x in the grid. H is evaluated
// with g = 1, r = x (the detuning does not enter the dark state).
[[nodiscard]] std::vector<DarkCheckRow> run_dark_checks(int n_max, std::span<const double> x_grid,
                                                        const DarkCheckOptions& opts = {});

}  // namespace fockgen
