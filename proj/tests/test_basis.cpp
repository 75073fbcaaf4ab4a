#include <doctest.h>

#include <algorithm>
#include <vector>

#include "fockgen/basis.hpp"
#include "fockgen/errors.hpp"

using namespace fockgen;

namespace {

// every (n0, n1, n2, l) in the box, filtered by the two constraints
std::vector<SymmetricState> brute_force(int n, int k) {
    std::vector<SymmetricState> out;
    for (int n0 = 0; n0 <= n; ++n0)
        for (int n1 = 0; n1 <= n; ++n1)
            for (int n2 = 0; n2 <= n; ++n2)
                for (int l = 0; l <= n; ++l)
                    if (n0 + n1 + n2 == n && n2 - l == k) out.push_back({n0, n1, n2, l});
    // descending n0, then descending n1
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return a.n0 != b.n0 ? a.n0 > b.n0 : a.n1 > b.n1;
    });
    return out;
}

}  // namespace

TEST_CASE("manifold enumeration matches brute force") {
    for (int n = 0; n <= 9; ++n) {
        for (int k = 0; k <= n; ++k) {
            const Manifold m(n, k);
            const auto ref = brute_force(n, k);
            REQUIRE(m.dim() == ref.size());
            CHECK(m.dim() == Manifold::expected_dim(n, k));
            CHECK(m.dim() == static_cast<std::size_t>((n - k + 1) * (n - k + 2) / 2));
            for (std::size_t i = 0; i < ref.size(); ++i) {
                CHECK(m[i] == ref[i]);
                CHECK(m.index_of(ref[i]) == i);
                CHECK(m[i].valid());
                CHECK(m[i].atoms() == n);
                CHECK(m[i].d_value() == k);
            }
        }
    }
}

TEST_CASE("first state of e(N,0) is the all-ground vacuum") {
    const Manifold m(4, 0);
    CHECK(m[0] == SymmetricState{4, 0, 0, 0});
    CHECK(m[m.dim() - 1] == SymmetricState{0, 0, 4, 4});
}

TEST_CASE("single-atom manifolds") {
    const Manifold e10(1, 0);
    REQUIRE(e10.dim() == 3);
    CHECK(e10[0] == SymmetricState{1, 0, 0, 0});
    CHECK(e10[1] == SymmetricState{0, 1, 0, 0});
    CHECK(e10[2] == SymmetricState{0, 0, 1, 1});
    const Manifold e11(1, 1);
    REQUIRE(e11.dim() == 1);
    CHECK(e11[0] == SymmetricState{0, 0, 1, 0});
}

TEST_CASE("lookups and argument errors") {
    const Manifold m(3, 1);
    CHECK(m.contains({1, 0, 2, 1}));
    CHECK_FALSE(m.contains({1, 0, 2, 2}));
    CHECK_THROWS_AS((void)m.index_of({3, 0, 0, 0}), NotFound);
    CHECK_THROWS_AS(Manifold(3, 4), InvalidArgument);
    CHECK_THROWS_AS(Manifold(3, -1), InvalidArgument);
    CHECK_THROWS_AS(Manifold(-1, 0), InvalidArgument);
}
