#include <doctest.h>

#include "fock_oracle.hpp"
#include "fockgen/errors.hpp"
#include "fockgen/operators.hpp"

using namespace fockgen;

namespace {

double max_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
    return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("H matches the dense Fock-space operator on every manifold") {
    const SystemParams p{0.7, -1.3, 0.0, 0.0};
    for (int n = 1; n <= 4; ++n) {
        const oracle::Fock fock(n);
        const double r = 0.45;
        const auto full = fock.hamiltonian(r, p.g, p.delta);
        for (int k = 0; k <= n; ++k) {
            const Manifold m(n, k);
            const SparseOperator h = build_hamiltonian(m, r, p);
            CHECK(max_diff(h.to_dense(), fock.restrict(full, m, m)) < 1e-14);
            // H never leaves e(N,k)
            CHECK(fock.leakage(full, m, m) == 0.0);
            CHECK(h.hermiticity_residual() == 0.0);
        }
    }
}

TEST_CASE("conditional Hamiltonian adds -i(kappa a+a + gamma b1+b1)") {
    const SystemParams p{1.0, -2.0, 0.1, 0.05};
    const oracle::Fock fock(3);
    const Eigen::MatrixXcd full = fock.hamiltonian(0.3, p.g, p.delta) -
                      std::complex<double>(0, 1) * (p.kappa * fock.a.adjoint() * fock.a +
                                                    p.gamma * fock.b1.adjoint() * fock.b1);
    for (int k = 0; k <= 3; ++k) {
        const Manifold m(3, k);
        CHECK(max_diff(build_conditional(m, 0.3, p).to_dense(), fock.restrict(full, m, m)) < 1e-14);
    }
}

TEST_CASE("jump operators map between the right manifolds") {
    for (int n = 1; n <= 4; ++n) {
        const oracle::Fock fock(n);
        for (int k = 0; k < n; ++k) {
            const Manifold m(n, k);
            const Manifold up(n, k + 1);
            const Manifold fewer(n - 1, k);
            CHECK(max_diff(build_cavity_jump(m).to_dense(), fock.restrict(fock.a, up, m)) < 1e-14);
            CHECK(fock.leakage(fock.a, m, up) == 0.0);
            CHECK(max_diff(build_spont_jump(m).to_dense(), fock.restrict(fock.b1, fewer, m)) <
                  1e-14);
            CHECK(fock.leakage(fock.b1, m, fewer) == 0.0);
        }
        CHECK_THROWS_AS((void)build_cavity_jump(Manifold(n, n)), InvalidArgument);
    }
}

TEST_CASE("number operators are diagonal in the occupation basis") {
    const Manifold m(3, 1);
    const auto photons = build_number_operator(m, NumberKind::photon).to_dense();
    const auto excited = build_number_operator(m, NumberKind::excited).to_dense();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        CHECK(photons(i, i).real() == m[i].l);
        CHECK(excited(i, i).real() == m[i].n1);
    }
    CHECK((photons - Eigen::MatrixXcd(photons.diagonal().asDiagonal())).norm() == 0.0);
}

TEST_CASE("sparse storage merges duplicates and drops zeros") {
    const SparseOperator op(2, 2, {{0, 1, 1.0}, {0, 1, 2.0}, {1, 0, 0.0}, {1, 1, {0, 1}}});
    CHECK(op.entry(0, 1) == cplx(3.0, 0.0));
    CHECK(op.entry(1, 0) == cplx(0.0, 0.0));
    CHECK(op.nnz() == 2);
    const std::vector<cplx> v{1.0, 1.0};
    const auto w = op * std::span<const cplx>(v);
    CHECK(w[0] == cplx(3.0, 0.0));
    CHECK(w[1] == cplx(0.0, 1.0));
}

TEST_CASE("parameter validation") {
    const Manifold m(2, 0);
    CHECK_THROWS_AS((void)build_hamiltonian(m, -0.1, SystemParams{}), InvalidArgument);
    CHECK_THROWS_AS((void)build_conditional(m, 0.1, SystemParams{1.0, -2.0, -0.1, 0.0}),
                    InvalidArgument);
    CHECK_THROWS_AS((void)build_spont_jump(Manifold(0, 0)), InvalidArgument);
    CHECK_NOTHROW((void)build_hamiltonian(m, 0.0, SystemParams{0.0, 0.0, 0.0, 0.0}));
}
