#include "fockgen/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fockgen/errors.hpp"

namespace fockgen {

SparseOperator::SparseOperator(std::size_t rows, std::size_t cols,
                               std::vector<SparseEntry> entries, bool hermitian)
    : rows_(rows), cols_(cols), hermitian_(hermitian) {
    for (const auto& e : entries) {
        if (e.row >= rows || e.col >= cols) {
            throw InvalidArgument("SparseOperator: entry (" + std::to_string(e.row) + "," +
                                  std::to_string(e.col) + ") out of bounds");
        }
    }
    std::stable_sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) {
        return a.row != b.row ? a.row < b.row : a.col < b.col;
    });
    entries_.reserve(entries.size());
    for (const auto& e : entries) {
        if (!entries_.empty() && entries_.back().row == e.row && entries_.back().col == e.col) {
            entries_.back().value += e.value;
        } else {
            entries_.push_back(e);
        }
    }
    std::erase_if(entries_, [](const auto& e) { return e.value == cplx{0.0, 0.0}; });

    row_start_.assign(rows_ + 1, 0);
    for (const auto& e : entries_) {
        ++row_start_[e.row + 1];
    }
    for (std::size_t r = 0; r < rows_; ++r) {
        row_start_[r + 1] += row_start_[r];
    }
}

cplx SparseOperator::entry(std::size_t row, std::size_t col) const {
    if (row >= rows_ || col >= cols_) {
        throw InvalidArgument("SparseOperator::entry: index out of bounds");
    }
    for (std::size_t i = row_start_[row]; i < row_start_[row + 1]; ++i) {
        if (entries_[i].col == col) {
            return entries_[i].value;
        }
    }
    return {};
}

void SparseOperator::apply(std::span<const cplx> in, std::span<cplx> out) const {
    std::fill(out.begin(), out.end(), cplx{});
    apply_add(in, out);
}

void SparseOperator::apply_add(std::span<const cplx> in, std::span<cplx> out, cplx scale) const {
    if (in.size() != cols_ || out.size() != rows_) {
        throw InvalidArgument("SparseOperator::apply: dimension mismatch");
    }
    for (std::size_t r = 0; r < rows_; ++r) {
        cplx acc{};
        for (std::size_t i = row_start_[r]; i < row_start_[r + 1]; ++i) {
            acc += entries_[i].value * in[entries_[i].col];
        }
        out[r] += scale * acc;
    }
}

std::vector<cplx> SparseOperator::operator*(std::span<const cplx> in) const {
    std::vector<cplx> out(rows_);
    apply(in, out);
    return out;
}

Eigen::MatrixXcd SparseOperator::to_dense() const {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(rows_),
                                                static_cast<Eigen::Index>(cols_));
    for (const auto& e : entries_) {
        m(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) = e.value;
    }
    return m;
}

double SparseOperator::max_abs() const noexcept {
    double best = 0.0;
    for (const auto& e : entries_) {
        best = std::max(best, std::abs(e.value));
    }
    return best;
}

double SparseOperator::hermiticity_residual() const {
    if (rows_ != cols_) {
        throw InvalidArgument("hermiticity_residual: operator is not square");
    }
    double worst = 0.0;
    for (const auto& e : entries_) {
        worst = std::max(worst, std::abs(e.value - std::conj(entry(e.col, e.row))));
    }
    return worst;
}

double SparseOperator::gershgorin_radius() const noexcept {
    double best = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
        double sum = 0.0;
        for (std::size_t i = row_start_[r]; i < row_start_[r + 1]; ++i) {
            sum += std::abs(entries_[i].value);
        }
        best = std::max(best, sum);
    }
    return best;
}

void SystemParams::validate() const {
    if (!std::isfinite(g) || !std::isfinite(delta) || !std::isfinite(kappa) ||
        !std::isfinite(gamma)) {
        throw InvalidArgument("SystemParams: all rates must be finite");
    }
    if (g < 0.0) {
        throw InvalidArgument("SystemParams: g must be non-negative");
    }
    if (kappa < 0.0 || gamma < 0.0) {
        throw InvalidArgument("SystemParams: kappa and gamma must be non-negative");
    }
}

namespace {

std::vector<SparseEntry> hamiltonian_entries(const Manifold& m, double r, const SystemParams& p) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
        throw InvalidArgument("build_hamiltonian: drive amplitude r must be finite and >= 0");
    }
    p.validate();
    std::vector<SparseEntry> out;
    out.reserve(5 * m.dim());
    for (std::size_t col = 0; col < m.dim(); ++col) {
        const SymmetricState& s = m[col];
        if (s.n1 != 0) {
            out.push_back({col, col, -p.delta * s.n1});
        }
        // r b1+ b0 and its conjugate r b0+ b1
        if (s.n0 > 0) {
            const SymmetricState t{s.n0 - 1, s.n1 + 1, s.n2, s.l};
            out.push_back({m.index_of(t), col, r * std::sqrt(double(s.n0) * (s.n1 + 1))});
        }
        if (s.n1 > 0) {
            const SymmetricState t{s.n0 + 1, s.n1 - 1, s.n2, s.l};
            out.push_back({m.index_of(t), col, r * std::sqrt(double(s.n1) * (s.n0 + 1))});
        }
        // g b1+ b2 a and its conjugate g a+ b2+ b1
        if (s.n2 > 0 && s.l > 0) {
            const SymmetricState t{s.n0, s.n1 + 1, s.n2 - 1, s.l - 1};
            out.push_back(
                {m.index_of(t), col, p.g * std::sqrt(double(s.n1 + 1) * s.n2 * s.l)});
        }
        if (s.n1 > 0) {
            const SymmetricState t{s.n0, s.n1 - 1, s.n2 + 1, s.l + 1};
            out.push_back(
                {m.index_of(t), col, p.g * std::sqrt(double(s.n1) * (s.n2 + 1) * (s.l + 1))});
        }
    }
    return out;
}

}  // namespace

SparseOperator build_hamiltonian(const Manifold& m, double r, const SystemParams& p) {
    return SparseOperator(m.dim(), m.dim(), hamiltonian_entries(m, r, p), true);
}

SparseOperator build_conditional(const Manifold& m, double r, const SystemParams& p) {
    auto entries = hamiltonian_entries(m, r, p);
    for (std::size_t i = 0; i < m.dim(); ++i) {
        const double decay = p.kappa * m[i].l + p.gamma * m[i].n1;
        if (decay != 0.0) {
            entries.push_back({i, i, cplx{0.0, -decay}});
        }
    }
    const bool closed = p.kappa == 0.0 && p.gamma == 0.0;
    return SparseOperator(m.dim(), m.dim(), std::move(entries), closed);
}

SparseOperator build_number_operator(const Manifold& m, NumberKind which) {
    std::vector<SparseEntry> entries;
    entries.reserve(m.dim());
    for (std::size_t i = 0; i < m.dim(); ++i) {
        const SymmetricState& s = m[i];
        int v = 0;
        switch (which) {
            case NumberKind::photon: v = s.l; break;
            case NumberKind::excited: v = s.n1; break;
            case NumberKind::total_atoms: v = s.atoms(); break;
            case NumberKind::d_value: v = s.d_value(); break;
        }
        entries.push_back({i, i, double(v)});
    }
    return SparseOperator(m.dim(), m.dim(), std::move(entries), true);
}

SparseOperator build_cavity_jump(const Manifold& m) {
    if (m.k() >= m.n_atoms()) {
        throw InvalidArgument("build_cavity_jump: e(N,N) holds no photons");
    }
    const Manifold target(m.n_atoms(), m.k() + 1);
    std::vector<SparseEntry> entries;
    for (std::size_t col = 0; col < m.dim(); ++col) {
        const SymmetricState& s = m[col];
        if (s.l > 0) {
            entries.push_back({target.index_of({s.n0, s.n1, s.n2, s.l - 1}), col,
                               std::sqrt(double(s.l))});
        }
    }
    return SparseOperator(target.dim(), m.dim(), std::move(entries));
}

SparseOperator build_spont_jump(const Manifold& m) {
    if (m.n_atoms() < 1) {
        throw InvalidArgument("build_spont_jump: no atoms to decay");
    }
    if (m.k() > m.n_atoms() - 1) {
        throw InvalidArgument("build_spont_jump: target manifold e(N-1,k) does not exist");
    }
    const Manifold target(m.n_atoms() - 1, m.k());
    std::vector<SparseEntry> entries;
    for (std::size_t col = 0; col < m.dim(); ++col) {
        const SymmetricState& s = m[col];
        if (s.n1 > 0) {
            entries.push_back({target.index_of({s.n0, s.n1 - 1, s.n2, s.l}), col,
                               std::sqrt(double(s.n1))});
        }
    }
    return SparseOperator(target.dim(), m.dim(), std::move(entries));
}

}  // namespace fockgen
