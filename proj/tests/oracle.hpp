#pragma once

// Brute-force reference implementations, written directly from the
// definitions over an adjacency matrix. They share no code with the library
// beyond the input types.

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include <boost/rational.hpp>

#include "cavevote/graph.hpp"

namespace oracle {

using Q = boost::rational<std::int64_t>;

struct Instance {
    std::vector<std::vector<bool>> adj;
    std::vector<int> party;
    int parties = 0;

    Instance(const cavevote::Graph& g, const cavevote::PartyAssignment& a)
        : adj(g.node_count(), std::vector<bool>(g.node_count(), false)), parties(static_cast<int>(a.party_count())) {
        for (const auto& [u, v] : g.edges()) adj[u][v] = adj[v][u] = true;
        for (std::size_t n = 0; n < g.node_count(); ++n) party.push_back(static_cast<int>(a.party_of(n)));
    }

    int size() const { return static_cast<int>(party.size()); }

    std::vector<Q> delta(int n) const {
        std::vector<std::int64_t> c(parties, 0);
        std::int64_t poll = 0;
        for (int m = 0; m < size(); ++m) {
            if (m == n || adj[n][m]) {
                ++c[party[m]];
                ++poll;
            }
        }
        std::vector<Q> out;
        for (auto x : c) out.emplace_back(x, poll);
        return out;
    }

    // complement = false: minus the largest share; true: minus everything not own.
    Q node(int n, bool complement) const {
        const auto d = delta(n);
        const Q own = d[party[n]];
        const Q top = *std::max_element(d.begin(), d.end());
        if (own == top) return own;
        return complement ? -(Q(1) - own) : -top;
    }

    Q assortment(int p, bool complement) const {
        Q sum = 0;
        std::int64_t count = 0;
        for (int n = 0; n < size(); ++n) {
            if (party[n] == p) {
                sum += node(n, complement);
                ++count;
            }
        }
        return sum / count;
    }

    Q gap_vs_most_influential(int p, bool complement) const {
        bool first = true;
        Q best = 0;
        for (int q = 0; q < parties; ++q) {
            if (q == p) continue;
            const Q a = assortment(q, complement);
            if (first || a > best) best = a;
            first = false;
        }
        return assortment(p, complement) - best;
    }

    std::set<Q> gap_vs_runner_up(int p, bool complement) const {
        std::vector<int> count(parties, 0);
        for (int x : party) ++count[x];
        int most = 0;
        for (int q = 0; q < parties; ++q)
            if (q != p) most = std::max(most, count[q]);
        std::set<Q> out;
        for (int q = 0; q < parties; ++q)
            if (q != p && count[q] == most) out.insert(assortment(p, complement) - assortment(q, complement));
        return out;
    }
};

inline double to_double(const Q& q) { return boost::rational_cast<double>(q); }

}  // namespace oracle
