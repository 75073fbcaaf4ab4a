// Dense tensor-product Fock-space reference: modes b0, b1, b2, a each
// truncated at `cutoff` quanta, built with Kronecker products. Used only in
// tests to cross-check the manifold-restricted sparse operators.

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "fockgen/basis.hpp"

namespace oracle {

using Mat = Eigen::MatrixXcd;

inline Mat ladder(int cutoff) {
    Mat m = Mat::Zero(cutoff + 1, cutoff + 1);
    for (int n = 1; n <= cutoff; ++n) m(n - 1, n) = std::sqrt(static_cast<double>(n));
    return m;
}

inline Mat kron(const Mat& a, const Mat& b) {
    Mat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

struct Fock {
    int cutoff;
    Mat b0, b1, b2, a;

    explicit Fock(int c) : cutoff(c) {
        const Mat l = ladder(c);
        const Mat id = Mat::Identity(c + 1, c + 1);
        b0 = kron(kron(kron(l, id), id), id);
        b1 = kron(kron(kron(id, l), id), id);
        b2 = kron(kron(kron(id, id), l), id);
        a = kron(kron(kron(id, id), id), l);
    }

    [[nodiscard]] Eigen::Index index(const fockgen::SymmetricState& s) const {
        const int d = cutoff + 1;
        return ((static_cast<Eigen::Index>(s.n0) * d + s.n1) * d + s.n2) * d + s.l;
    }

    // H = -delta b1+b1 + r (b1+b0 + b0+b1) + g (b1+b2 a + a+ b2+ b1)
    [[nodiscard]] Mat hamiltonian(double r, double g, double delta) const {
        const Mat up = b1.adjoint() * b2 * a;
        return -delta * b1.adjoint() * b1 + r * (b1.adjoint() * b0 + b0.adjoint() * b1) +
               g * (up + up.adjoint());
    }

    // Restriction of a full-space operator to (rows of `to`) x (cols of `from`).
    [[nodiscard]] Mat restrict(const Mat& op, const fockgen::Manifold& to,
                               const fockgen::Manifold& from) const {
        Mat out(to.dim(), from.dim());
        for (std::size_t i = 0; i < to.dim(); ++i)
            for (std::size_t j = 0; j < from.dim(); ++j)
                out(i, j) = op(index(to[i]), index(from[j]));
        return out;
    }

    // Weight of op|s> that lands outside `target`, summed over the manifold.
    [[nodiscard]] double leakage(const Mat& op, const fockgen::Manifold& from,
                                 const fockgen::Manifold& target) const {
        std::vector<bool> in_target(op.rows(), false);
        for (std::size_t i = 0; i < target.dim(); ++i) in_target[index(target[i])] = true;
        double leak = 0.0;
        for (std::size_t j = 0; j < from.dim(); ++j) {
            const Eigen::Index c = index(from[j]);
            for (Eigen::Index i = 0; i < op.rows(); ++i) {
                if (!in_target[i]) leak += std::norm(op(i, c));
            }
        }
        return leak;
    }
};

}  // namespace oracle
