#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cavevote/graph.hpp"
#include "cavevote/metrics.hpp"

using namespace cavevote;
using Q = Rational;

namespace {

Q gap(const Graph& g, const PartyAssignment& a, PartyId p) {
    return influence_gap<Q>(g, a, p, AssortmentConvention::DominantNegative, GapConvention::VsMostInfluential).front();
}

}  // namespace

// Checks the 2/min + 2/max single-rewire bound as stated. It does not hold in
// general: with l=4, k=3, 10 red and 2 blue the gap can move by 73/60 > 6/5.
TEST_CASE("a single rewire moves the two-party gap by a bounded amount") {
    Rng rng(17);
    double worst = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        const std::size_t l = 2 + rng.index(4), k = 2 + rng.index(5), n = l * k;
        const std::size_t red = 1 + rng.index(n - 1);
        const auto a = assign_parties_spa(n, std::vector<PartyCount>{{"red", red}, {"blue", n - red}}, rng());
        auto g = build_caveman(l, k);
        const auto edges = g.edges();
        const auto [u, v] = edges[rng.index(edges.size())];
        NodeId target = static_cast<NodeId>(rng.index(n));
        if (g.clique_of(target) == g.clique_of(u)) continue;
        const auto before = gap(g, a, 0);
        g.remove_edge(u, v);
        g.add_edge(u, target);
        const double change = std::abs(boost::rational_cast<double>(gap(g, a, 0) - before));
        const double bound = 2.0 / static_cast<double>(std::min(red, n - red)) + 2.0 / static_cast<double>(std::max(red, n - red));
        worst = std::max(worst, change / bound);
        CHECK(change <= bound + 1e-12);
    }
    MESSAGE("largest change relative to the bound: " << worst);
}
