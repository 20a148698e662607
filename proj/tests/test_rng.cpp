#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <vector>

#include "cavevote/rng.hpp"

using namespace cavevote;

TEST_CASE("same seed gives the same stream") {
    Rng a(42), b(42), c(43);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a();
        CHECK(x == b());
        differs |= x != c();
    }
    CHECK(differs);
}

TEST_CASE("derived seeds are distinct across keys and parents") {
    std::set<Seed> seen;
    for (std::uint64_t cell = 0; cell < 50; ++cell)
        for (std::uint64_t rep = 0; rep < 50; ++rep) seen.insert(derive_seed(7, {cell, rep}));
    CHECK(seen.size() == 2500);
    CHECK(derive_seed(1, {3, 4}) != derive_seed(1, {4, 3}));
    CHECK(derive_seed(1, {3}) != derive_seed(2, {3}));
    CHECK(derive_seed(5, Stream::Graph) != derive_seed(5, Stream::Assignment));
    static_assert(derive_seed(9, {1, 2}) == derive_seed(9, {1, 2}));
}

TEST_CASE("uniform draws stay in [0, 1) and average one half") {
    Rng r(1);
    double sum = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = r.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    CHECK(sum / n == doctest::Approx(0.5).epsilon(0.005));
}

TEST_CASE("bounded index is in range and roughly uniform") {
    Rng r(2);
    std::vector<int> hist(7, 0);
    const int n = 70000;
    for (int i = 0; i < n; ++i) {
        const auto x = r.index(7);
        REQUIRE(x < 7);
        ++hist[x];
    }
    // Each bin expects 10000 with sd ~93.
    for (int h : hist) CHECK(std::abs(h - 10000) < 500);
    CHECK(r.index(1) == 0);
}

TEST_CASE("shuffle is a permutation") {
    Rng r(3);
    std::vector<int> v(100);
    std::iota(v.begin(), v.end(), 0);
    auto w = v;
    r.shuffle(w);
    CHECK(w != v);
    std::sort(w.begin(), w.end());
    CHECK(w == v);
}
