#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cavevote/rng.hpp"

namespace cavevote {

using NodeId = std::uint32_t;
using PartyId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Undirected simple graph over nodes 0..N-1.
///
/// Graphs built from a caveman construction remember their original clique
/// partition (node n belongs to clique n / clique_size). The partition is
/// kept through rewiring and serves as the district map for the efficiency
/// gap. Graphs without a partition report clique_count() == 0.
class Graph {
public:
    Graph() = default;
    explicit Graph(std::size_t node_count);

    std::size_t node_count() const noexcept { return adjacency_.size(); }
    std::size_t edge_count() const noexcept { return edge_count_; }

    bool has_edge(NodeId u, NodeId v) const;

    /// Inserts {u,v}. Returns false if the edge is already present.
    /// Throws std::invalid_argument on a self-loop or out-of-range node.
    bool add_edge(NodeId u, NodeId v);

    /// Removes {u,v}. Returns false if the edge was absent.
    bool remove_edge(NodeId u, NodeId v);

    /// Sorted neighbour list of n.
    std::span<const NodeId> neighbors(NodeId n) const { return adjacency_.at(n); }
    std::size_t degree(NodeId n) const { return adjacency_.at(n).size(); }

    /// All edges as (u, v) with u < v, in lexicographic order.
    std::vector<Edge> edges() const;

    /// Attach a partition of the nodes into `cliques` equal consecutive blocks.
    /// Passing 0 clears the partition.
    void set_cliques(std::size_t cliques);
    std::size_t clique_count() const noexcept { return cliques_; }
    std::size_t clique_size() const noexcept { return cliques_ == 0 ? 0 : node_count() / cliques_; }
    std::size_t clique_of(NodeId n) const;

    friend bool operator==(const Graph&, const Graph&) = default;

private:
    std::vector<std::vector<NodeId>> adjacency_;
    std::size_t edge_count_ = 0;
    std::size_t cliques_ = 0;
};

/// Mapping from voters to parties. Every listed party has at least one voter.
class PartyAssignment {
public:
    PartyAssignment() = default;
    PartyAssignment(std::vector<std::string> parties, std::vector<PartyId> assignment);

    std::size_t node_count() const noexcept { return assignment_.size(); }
    std::size_t party_count() const noexcept { return parties_.size(); }
    const std::vector<std::string>& parties() const noexcept { return parties_; }
    const std::string& party_name(PartyId p) const { return parties_.at(p); }

    PartyId party_of(NodeId n) const { return assignment_.at(n); }
    std::span<const PartyId> votes() const noexcept { return assignment_; }

    /// N_P.
    std::size_t count(PartyId p) const { return counts_.at(p); }
    const std::vector<std::size_t>& counts() const noexcept { return counts_; }

    /// Index of the named party; throws std::invalid_argument if absent.
    PartyId index_of(std::string_view name) const;

    friend bool operator==(const PartyAssignment&, const PartyAssignment&) = default;

private:
    std::vector<std::string> parties_;
    std::vector<PartyId> assignment_;
    std::vector<std::size_t> counts_;
};

struct PartyCount {
    std::string party;
    std::size_t count = 0;
};

/// Parameters of the homophilic relaxed-caveman model.
struct HrcParams {
    std::size_t clique_count = 1;   // l
    std::size_t clique_size = 1;    // k
    double rewire_probability = 0;  // p0
    double homophily = 0.5;         // h
};

/// Counters reported by the rewiring generators.
struct RewireStats {
    std::size_t attempts = 0;    // edges whose rewire coin came up heads
    std::size_t rewired = 0;     // edges actually moved
    std::size_t collisions = 0;  // heads, but the target edge was already implied
};

/// l disjoint k-cliques; nodes ck..ck+k-1 form clique c.
Graph build_caveman(std::size_t cliques, std::size_t clique_size);

/// Strong party assignment: exactly `counts[i].count` voters of each party,
/// placed by a uniformly random permutation.
PartyAssignment assign_parties_spa(std::size_t node_count, std::span<const PartyCount> counts, Seed seed);
PartyAssignment assign_parties_spa(const Graph& graph, std::span<const PartyCount> counts, Seed seed);

/// Homophilic relaxed-caveman graph.
///
/// Starts from build_caveman(l, k) and visits each original edge (u, v), u < v,
/// once in clique-then-lexicographic order. A target n is drawn uniformly from
/// V \ {u, v}; the edge is moved to (u, n) with probability p0*h when n shares
/// u's party and p0*(1-h) otherwise. The move is skipped when n lies in u's
/// original clique or (u, n) is already present, so every added edge crosses
/// cliques.
Graph generate_hrc(const HrcParams& params, const PartyAssignment& assignment, Seed seed);
Graph generate_hrc(const HrcParams& params, const PartyAssignment& assignment, Seed seed, RewireStats& stats);

/// Party-blind relaxed caveman: each original edge is moved with probability p.
/// `graph` must be an unmodified caveman graph (clique partition attached).
Graph rewire_relaxed(const Graph& graph, double p, Seed seed);
Graph rewire_relaxed(const Graph& graph, double p, Seed seed, RewireStats& stats);

/// Counts of each party in the poll (n plus its neighbours) of n.
/// `votes` may contain parties with zero voters; party_count sizes the result.
std::vector<std::size_t> poll_counts(const Graph& graph, std::span<const PartyId> votes, std::size_t party_count,
                                     NodeId n);

/// Fraction of n's poll voting for each party. Denominator is 1 + degree(n).
std::vector<double> poll_fractions(const Graph& graph, const PartyAssignment& assignment, NodeId n);

}  // namespace cavevote
