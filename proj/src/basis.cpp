#include "fockgen/basis.hpp"

#include <string>

#include "fockgen/errors.hpp"

namespace fockgen {

Manifold::Manifold(int n_atoms, int k) : n_atoms_(n_atoms), k_(k) {
    if (n_atoms < 0) {
        throw InvalidArgument("Manifold: atom count must be non-negative, got " +
                              std::to_string(n_atoms));
    }
    if (k < 0 || k > n_atoms) {
        throw InvalidArgument("Manifold: need 0 <= k <= N, got N=" + std::to_string(n_atoms) +
                              " k=" + std::to_string(k));
    }
    states_.reserve(expected_dim(n_atoms, k));
    // n2 = k + l >= k, so n0 + n1 ranges over 0..N-k.
    for (int n0 = n_atoms - k; n0 >= 0; --n0) {
        for (int n1 = n_atoms - k - n0; n1 >= 0; --n1) {
            const int n2 = n_atoms - n0 - n1;
            states_.push_back({n0, n1, n2, n2 - k});
        }
    }
    for (std::size_t i = 0; i < states_.size(); ++i) {
        index_.emplace(states_[i], i);
    }
}

bool Manifold::contains(const SymmetricState& s) const noexcept {
    return index_.find(s) != index_.end();
}

std::size_t Manifold::index_of(const SymmetricState& s) const {
    auto it = index_.find(s);
    if (it == index_.end()) {
        throw NotFound("state |" + std::to_string(s.n0) + "," + std::to_string(s.n1) + "," +
                       std::to_string(s.n2) + "," + std::to_string(s.l) + "> not in e(" +
                       std::to_string(n_atoms_) + "," + std::to_string(k_) + ")");
    }
    return it->second;
}

std::size_t Manifold::expected_dim(int n_atoms, int k) noexcept {
    const auto m = static_cast<std::size_t>(n_atoms - k);
    return (m + 1) * (m + 2) / 2;
}

Manifold enumerate_manifold(int n_atoms, int k) { return Manifold(n_atoms, k); }

std::size_t state_index(const Manifold& m, const SymmetricState& s) { return m.index_of(s); }

}  // namespace fockgen
