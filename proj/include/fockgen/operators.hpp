// operators.hpp - sparse operators on and between e(N, k) manifolds:
// closed Hamiltonian, conditional (no-jump) Hamiltonian, number operators and
// the two quantum-jump operators a and b1.

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "fockgen/basis.hpp"

namespace fockgen {

using cplx = std::complex<double>;

struct SparseEntry {
    std::size_t row{0};
    std::size_t col{0};
    cplx value{};
};

// Row-major triplet matrix. Duplicate (row, col) pairs are summed on
// construction and exact zeros are dropped, so the entry list is canonical and
// assembly is bit-reproducible.
class SparseOperator {
  public:
    SparseOperator() = default;
    SparseOperator(std::size_t rows, std::size_t cols, std::vector<SparseEntry> entries,
                   bool hermitian = false);

    [[nodiscard]] std::size_t rows() const noexcept { return rows_; }
    [[nodiscard]] std::size_t cols() const noexcept { return cols_; }
    [[nodiscard]] std::size_t nnz() const noexcept { return entries_.size(); }
    [[nodiscard]] const std::vector<SparseEntry>& entries() const noexcept { return entries_; }
    [[nodiscard]] bool hermitian_tagged() const noexcept { return hermitian_; }

    [[nodiscard]] cplx entry(std::size_t row, std::size_t col) const;

    // out = A * in
    void apply(std::span<const cplx> in, std::span<cplx> out) const;
    // out += scale * A * in
    void apply_add(std::span<const cplx> in, std::span<cplx> out, cplx scale = 1.0) const;
    [[nodiscard]] std::vector<cplx> operator*(std::span<const cplx> in) const;

    [[nodiscard]] Eigen::MatrixXcd to_dense() const;
    [[nodiscard]] double max_abs() const noexcept;
    // max |A(r,c) - conj(A(c,r))|; zero for an exactly Hermitian matrix.
    [[nodiscard]] double hermiticity_residual() const;
    // Gershgorin bound on the spectral radius: max_r sum_c |A(r,c)|.
    [[nodiscard]] double gershgorin_radius() const noexcept;

  private:
    std::size_t rows_{0};
    std::size_t cols_{0};
    std::vector<SparseEntry> entries_;
    std::vector<std::size_t> row_start_;  // size rows_ + 1
    bool hermitian_{false};
};

// Rates in units of the reference rate (g = 1 unless overridden).
struct SystemParams {
    double g{1.0};
    double delta{-2.0};
    double kappa{0.1};
    double gamma{0.05};

    // Throws InvalidArgument on negative g, kappa, gamma or non-finite values.
    // g = 0 is permitted here so that the bare-drive limit can be built; code
    // that needs x = r/g rejects it separately.
    void validate() const;
};

enum class NumberKind { photon, excited, total_atoms, d_value };

// H = -Delta b1+b1 + r (b1+b0 + b0+b1) + g (b1+b2 a + a+b2+b1) restricted to m.
[[nodiscard]] SparseOperator build_hamiltonian(const Manifold& m, double r, const SystemParams& p);

// H - i kappa a+a - i gamma b1+b1.
[[nodiscard]] SparseOperator build_conditional(const Manifold& m, double r, const SystemParams& p);

[[nodiscard]] SparseOperator build_number_operator(const Manifold& m, NumberKind which);

// a : e(N,k) -> e(N,k+1). Requires k < N.
[[nodiscard]] SparseOperator build_cavity_jump(const Manifold& m);

// b1 : e(N,k) -> e(N-1,k). Requires N >= 1 and k <= N-1 (the target manifold
// must exist; on e(N,N) b1 is identically zero).
[[nodiscard]] SparseOperator build_spont_jump(const Manifold& m);

}  // namespace fockgen
