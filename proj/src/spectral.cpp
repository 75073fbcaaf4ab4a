#include "fockgen/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "fockgen/dark_state.hpp"
#include "fockgen/errors.hpp"

namespace fockgen {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::MatrixXd real_dense(const SparseOperator& h) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(h.rows()),
                                                static_cast<Eigen::Index>(h.cols()));
    for (const auto& e : h.entries()) {
        out(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value.real();
    }
    return out;
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::VectorXd photon_diagonal(const Manifold& m) {
    Eigen::VectorXd d(static_cast<Eigen::Index>(m.dim()));
    for (std::size_t i = 0; i < m.dim(); ++i) {
        d(static_cast<Eigen::Index>(i)) = m[i].l;
    }
    return d;
}

// Replace the near-null eigenvectors by the dark state plus an orthonormal
// completion of the same subspace.
void rotate_null_cluster(Eigen::MatrixXd& vecs, const std::vector<Eigen::Index>& cluster,
                         const Eigen::VectorXd& dark) {
    const auto n = static_cast<Eigen::Index>(cluster.size());
    Eigen::MatrixXd basis(vecs.rows(), n);
    for (Eigen::Index j = 0; j < n; ++j) {
        basis.col(j) = vecs.col(cluster[j]);
    }
    Eigen::VectorXd proj = basis * (basis.transpose() * dark);
    std::vector<Eigen::VectorXd> out;
    out.push_back(proj.normalized());
    for (Eigen::Index j = 0; j < n && static_cast<Eigen::Index>(out.size()) < n; ++j) {
        Eigen::VectorXd v = basis.col(j);
        for (const auto& u : out) {
            v -= u.dot(v) * u;
        }
        for (const auto& u : out) {  // second pass for stability
            v -= u.dot(v) * u;
        }
        if (v.norm() > 1e-6) {
            out.push_back(v.normalized());
        }
    }
    for (Eigen::Index j = 0; j < n; ++j) {
        vecs.col(cluster[j]) = out[static_cast<std::size_t>(j)];
    }
}

}  // namespace

SpectrumReport eigendecompose(const Manifold& m, double r, const SystemParams& p) {
    const SparseOperator h = build_hamiltonian(m, r, p);
    const Eigen::MatrixXd dense = real_dense(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("eigendecompose: eigensolver did not converge");
    }

    SpectrumReport rep;
    const auto dim = static_cast<Eigen::Index>(m.dim());
    rep.eigenvalues.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + dim);
    rep.eigenvectors = solver.eigenvectors();
    for (double e : rep.eigenvalues) {
        rep.spectral_radius = std::max(rep.spectral_radius, std::abs(e));
    }

    const double window = kDegenerateDarkTolerance * std::max(rep.spectral_radius, 1e-300);
    std::vector<Eigen::Index> cluster;
    Eigen::Index nearest = 0;
    for (Eigen::Index i = 0; i < dim; ++i) {
        if (std::abs(rep.eigenvalues[i]) < std::abs(rep.eigenvalues[nearest])) {
            nearest = i;
        }
        if (std::abs(rep.eigenvalues[i]) <= window) {
            cluster.push_back(i);
        }
    }
    rep.degenerate_dark = cluster.size() > 1;
    rep.dark_index = static_cast<std::size_t>(nearest);

    Eigen::VectorXd dark;
    Eigen::VectorXd phi;
    const bool has_reference = p.g > 0.0;
    if (has_reference) {
        dark = to_eigen(dark_state_for_drive(m.n_atoms(), m.k(), r, p.g).amplitudes);
        phi = to_eigen(dark_derivatives(m.n_atoms(), m.k(), r / p.g).phi);
        if (rep.degenerate_dark) {
            rotate_null_cluster(rep.eigenvectors, cluster, dark);
            rep.dark_index = static_cast<std::size_t>(cluster.front());
        }
        const double ov = rep.eigenvectors.col(static_cast<Eigen::Index>(rep.dark_index)).dot(dark);
        rep.dark_overlap = ov * ov;
    } else {
        rep.dark_overlap = 1.0;
        dark = rep.eigenvectors.col(static_cast<Eigen::Index>(rep.dark_index));
        phi = Eigen::VectorXd::Zero(dim);
    }

    const Eigen::VectorXd number_dark = photon_diagonal(m).cwiseProduct(dark);
    rep.cavity_coupling.resize(m.dim());
    rep.adiabatic_coupling.resize(m.dim());
    const double threshold = kCouplingThreshold * std::max(1.0, double(m.n_atoms() - m.k()));
    const double w_dark = rep.eigenvalues[rep.dark_index];
    rep.min_bohr = kInf;
    rep.min_bohr_coupled = kInf;
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto v = rep.eigenvectors.col(i);
        rep.cavity_coupling[i] = std::abs(v.dot(number_dark));
        rep.adiabatic_coupling[i] = std::abs(v.dot(phi));
        if (static_cast<std::size_t>(i) == rep.dark_index) {
            continue;
        }
        const double gap = std::abs(rep.eigenvalues[i] - w_dark);
        rep.min_bohr = std::min(rep.min_bohr, gap);
        if (std::max(rep.cavity_coupling[i], rep.adiabatic_coupling[i]) > threshold) {
            rep.min_bohr_coupled = std::min(rep.min_bohr_coupled, gap);
        }
    }
    return rep;
}

double min_bohr_frequency(const Manifold& m, double r, const SystemParams& p, bool coupled_only) {
    if (m.dim() < 2) {
        throw InvalidArgument("min_bohr_frequency: one-state manifold has no Bohr frequency");
    }
    const SpectrumReport rep = eigendecompose(m, r, p);
    return coupled_only ? rep.min_bohr_coupled : rep.min_bohr;
}

namespace {

double weighted_inverse_gap_sum(const SpectrumReport& rep, const std::vector<double>& coupling,
                                double scale, double threshold) {
    double sum = 0.0;
    const double w_dark = rep.eigenvalues[rep.dark_index];
    for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
        if (i == rep.dark_index) {
            continue;
        }
        const double c = coupling[i] * scale;
        if (c <= threshold) {
            continue;
        }
        const double w = rep.eigenvalues[i] - w_dark;
        if (w == 0.0) {
            throw SingularError("non-darkness sum: coupled state degenerate with the dark state");
        }
        sum += c * c / (w * w);
    }
    return sum;
}

}  // namespace

double exact_nondarkness_cavity(const Manifold& m, double r, const SystemParams& p) {
    if (p.kappa == 0.0) {
        return 0.0;
    }
    const SpectrumReport rep = eigendecompose(m, r, p);
    const double threshold = kCouplingThreshold * std::max(1.0, double(m.n_atoms() - m.k()));
    return p.kappa * p.kappa * weighted_inverse_gap_sum(rep, rep.cavity_coupling, 1.0, threshold);
}

double exact_nondarkness_adiabatic(const Manifold& m, double r, double rdot,
                                   const SystemParams& p) {
    if (!(p.g > 0.0)) {
        throw InvalidArgument("exact_nondarkness_adiabatic: g must be > 0");
    }
    if (rdot == 0.0) {
        return 0.0;
    }
    const SpectrumReport rep = eigendecompose(m, r, p);
    const double speed = std::abs(rdot) / p.g * dark_derivatives(m.n_atoms(), m.k(), r / p.g).y;
    return weighted_inverse_gap_sum(rep, rep.adiabatic_coupling, speed, kCouplingThreshold * speed);
}

double schwinger_limit_check(int n_atoms, int k, double r, const SystemParams& p) {
    const Manifold m(n_atoms, k);
    const SpectrumReport rep = eigendecompose(m, r, p);
    const double omega = std::sqrt(4.0 * r * r + p.delta * p.delta);
    std::vector<double> analytic;
    for (int two_j = 0; two_j <= n_atoms - k; ++two_j) {
        const double j = 0.5 * two_j;
        for (int two_m = -two_j; two_m <= two_j; two_m += 2) {
            analytic.push_back(-p.delta * j + omega * 0.5 * two_m);
        }
    }
    std::sort(analytic.begin(), analytic.end());
    double scale = 0.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        scale = std::max(scale, std::abs(analytic[i]));
        worst = std::max(worst, std::abs(analytic[i] - rep.eigenvalues[i]));
    }
    return scale > 0.0 ? worst / scale : worst;
}

TavisCummingsReport tavis_cummings_check(int n_atoms, int k, const SystemParams& p) {
    const Manifold m(n_atoms, k);
    const SparseOperator h = build_hamiltonian(m, 0.0, p);
    TavisCummingsReport rep;

    auto two_f = [&](std::size_t i) { return m[i].n1 + m[i].n2; };
    for (const auto& e : h.entries()) {
        if (two_f(e.row) != two_f(e.col)) {
            rep.blocks_unmixed = false;
        }
    }

    std::map<int, std::vector<std::size_t>> blocks;
    for (std::size_t i = 0; i < m.dim(); ++i) {
        blocks[two_f(i)].push_back(i);
    }
    const Eigen::MatrixXd dense = real_dense(h);
    std::vector<double> union_spectrum;
    for (const auto& [tf, members] : blocks) {
        DegeneracyRow row;
        row.f = 0.5 * tf;
        row.block_size = members.size();
        row.expected = static_cast<std::size_t>(tf - k + 1);
        if (row.block_size != row.expected) {
            rep.sizes_match = false;
        }
        const auto n = static_cast<Eigen::Index>(members.size());
        Eigen::MatrixXd block(n, n);
        for (Eigen::Index a = 0; a < n; ++a) {
            for (Eigen::Index b = 0; b < n; ++b) {
                block(a, b) = dense(static_cast<Eigen::Index>(members[a]),
                                    static_cast<Eigen::Index>(members[b]));
            }
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block);
        row.min_number_overlap = 1.0;
        for (Eigen::Index c = 0; c < n; ++c) {
            union_spectrum.push_back(solver.eigenvalues()(c));
            row.min_number_overlap =
                std::min(row.min_number_overlap, solver.eigenvectors().col(c).cwiseAbs2().maxCoeff());
        }
        rep.min_number_overlap = std::min(rep.min_number_overlap, row.min_number_overlap);
        rep.rows.push_back(row);
    }

    std::sort(union_spectrum.begin(), union_spectrum.end());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(dense, Eigen::EigenvaluesOnly);
    double scale = 1.0;
    for (Eigen::Index i = 0; i < full.eigenvalues().size(); ++i) {
        scale = std::max(scale, std::abs(full.eigenvalues()(i)));
    }
    for (std::size_t i = 0; i < union_spectrum.size(); ++i) {
        if (std::abs(union_spectrum[i] - full.eigenvalues()(static_cast<Eigen::Index>(i))) >
            1e-10 * scale) {
            rep.spectrum_matches = false;
        }
    }
    return rep;
}

namespace {

int negative_levels(const SpectrumReport& rep) {
    int count = 0;
    for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
        if (i != rep.dark_index && rep.eigenvalues[i] < 0.0) {
            ++count;
        }
    }
    return count;
}

// The non-dark level closest to zero.
Crossing nearest_level(const SpectrumReport& rep, double x) {
    Crossing c;
    c.x = x;
    double best = kInf;
    for (std::size_t i = 0; i < rep.eigenvalues.size(); ++i) {
        if (i == rep.dark_index) {
            continue;
        }
        if (std::abs(rep.eigenvalues[i]) < best) {
            best = std::abs(rep.eigenvalues[i]);
            c.eigen_index = i;
            c.eigenvalue = rep.eigenvalues[i];
            c.cavity_coupling = rep.cavity_coupling[i];
            c.adiabatic_coupling = rep.adiabatic_coupling[i];
        }
    }
    return c;
}

}  // namespace

std::vector<Crossing> degenerate_crossing_scan(int n_atoms, int k, const SystemParams& p,
                                               std::span<const double> x_grid) {
    std::vector<Crossing> out;
    if (x_grid.empty()) {
        return out;
    }
    if (!(p.g > 0.0)) {
        throw InvalidArgument("degenerate_crossing_scan: g must be > 0");
    }
    const Manifold m(n_atoms, k);
    if (m.dim() < 2) {
        return out;
    }
    auto spectrum_at = [&](double x) { return eigendecompose(m, x * p.g, p); };

    SpectrumReport prev = spectrum_at(x_grid[0]);
    auto touches_zero = [](const SpectrumReport& rep) {
        const Crossing c = nearest_level(rep, 0.0);
        return std::abs(c.eigenvalue) <=
               kDegenerateDarkTolerance * std::max(rep.spectral_radius, 1e-300);
    };
    if (touches_zero(prev)) {
        out.push_back(nearest_level(prev, x_grid[0]));
    }
    for (std::size_t g = 1; g < x_grid.size(); ++g) {
        SpectrumReport cur = spectrum_at(x_grid[g]);
        const int n_prev = negative_levels(prev);
        if (negative_levels(cur) != n_prev) {
            double lo = x_grid[g - 1];
            double hi = x_grid[g];
            for (int it = 0; it < 60 && hi - lo > 1e-13 * std::max(1.0, hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                if (negative_levels(spectrum_at(mid)) == n_prev) {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            const double x_star = 0.5 * (lo + hi);
            out.push_back(nearest_level(spectrum_at(x_star), x_star));
        } else if (touches_zero(cur)) {
            out.push_back(nearest_level(cur, x_grid[g]));
        }
        prev = std::move(cur);
    }
    return out;
}

}  // namespace fockgen
