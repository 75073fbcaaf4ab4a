// basis.hpp - permutation-symmetric number basis |n0, n1, n2, l> and the
// conserved-quantity manifolds e(N, k) with T = n0 + n1 + n2 and D = n2 - l.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

namespace fockgen {

struct SymmetricState {
    int n0{0};  // atoms in |0>
    int n1{0};  // atoms in the radiating level |1>
    int n2{0};  // atoms in |2>
    int l{0};   // cavity photons

    [[nodiscard]] constexpr int atoms() const noexcept { return n0 + n1 + n2; }
    [[nodiscard]] constexpr int d_value() const noexcept { return n2 - l; }
    [[nodiscard]] constexpr bool valid() const noexcept {
        return n0 >= 0 && n1 >= 0 && n2 >= 0 && l >= 0;
    }

    friend constexpr auto operator<=>(const SymmetricState&, const SymmetricState&) = default;
};

// The e(N, k) subspace. States are ordered by descending n0, then descending
// n1, so the initial state |N,0,0,0> always sits at index 0 of e(N, 0).
class Manifold {
  public:
    Manifold(int n_atoms, int k);

    [[nodiscard]] int n_atoms() const noexcept { return n_atoms_; }
    [[nodiscard]] int k() const noexcept { return k_; }
    [[nodiscard]] std::size_t dim() const noexcept { return states_.size(); }
    [[nodiscard]] const std::vector<SymmetricState>& states() const noexcept { return states_; }
    [[nodiscard]] const SymmetricState& operator[](std::size_t i) const { return states_[i]; }

    [[nodiscard]] bool contains(const SymmetricState& s) const noexcept;

    // Position of s in states(); throws NotFound if s is outside the manifold.
    [[nodiscard]] std::size_t index_of(const SymmetricState& s) const;

    // Closed form (N-k+1)(N-k+2)/2, valid for 0 <= k <= N.
    [[nodiscard]] static std::size_t expected_dim(int n_atoms, int k) noexcept;

  private:
    int n_atoms_;
    int k_;
    std::vector<SymmetricState> states_;
    std::map<SymmetricState, std::size_t> index_;
};

// Throws InvalidArgument unless 0 <= k <= N.
[[nodiscard]] Manifold enumerate_manifold(int n_atoms, int k);

[[nodiscard]] std::size_t state_index(const Manifold& m, const SymmetricState& s);

}  // namespace fockgen
