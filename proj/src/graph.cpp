#include "cavevote/graph.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace cavevote {

Graph::Graph(std::size_t node_count) : adjacency_(node_count) {}

bool Graph::has_edge(NodeId u, NodeId v) const {
    if (u >= node_count() || v >= node_count()) return false;
    const auto& a = adjacency_[u];
    return std::binary_search(a.begin(), a.end(), v);
}

bool Graph::add_edge(NodeId u, NodeId v) {
    if (u == v) throw std::invalid_argument("self-loop on node " + std::to_string(u));
    if (u >= node_count() || v >= node_count())
        throw std::invalid_argument("edge (" + std::to_string(u) + "," + std::to_string(v) + ") out of range");
    auto& a = adjacency_[u];
    auto it = std::lower_bound(a.begin(), a.end(), v);
    if (it != a.end() && *it == v) return false;
    a.insert(it, v);
    auto& b = adjacency_[v];
    b.insert(std::lower_bound(b.begin(), b.end(), u), u);
    ++edge_count_;
    return true;
}

bool Graph::remove_edge(NodeId u, NodeId v) {
    if (!has_edge(u, v)) return false;
    auto& a = adjacency_[u];
    a.erase(std::lower_bound(a.begin(), a.end(), v));
    auto& b = adjacency_[v];
    b.erase(std::lower_bound(b.begin(), b.end(), u));
    --edge_count_;
    return true;
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count_);
    for (NodeId u = 0; u < node_count(); ++u) {
        for (NodeId v : adjacency_[u]) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

void Graph::set_cliques(std::size_t cliques) {
    if (cliques != 0 && (node_count() == 0 || node_count() % cliques != 0))
        throw std::invalid_argument("clique count " + std::to_string(cliques) + " does not divide node count " +
                                    std::to_string(node_count()));
    cliques_ = cliques;
}

std::size_t Graph::clique_of(NodeId n) const {
    if (cliques_ == 0) throw std::logic_error("graph carries no clique partition");
    if (n >= node_count()) throw std::out_of_range("node out of range");
    return n / clique_size();
}

PartyAssignment::PartyAssignment(std::vector<std::string> parties, std::vector<PartyId> assignment)
    : parties_(std::move(parties)), assignment_(std::move(assignment)), counts_(parties_.size(), 0) {
    for (PartyId p : assignment_) {
        if (p >= parties_.size()) throw std::invalid_argument("assignment refers to unknown party " + std::to_string(p));
        ++counts_[p];
    }
    for (std::size_t p = 0; p < parties_.size(); ++p) {
        if (counts_[p] == 0) throw std::invalid_argument("party '" + parties_[p] + "' has no voters");
        for (std::size_t q = 0; q < p; ++q) {
            if (parties_[p] == parties_[q]) throw std::invalid_argument("duplicate party '" + parties_[p] + "'");
        }
    }
}

PartyId PartyAssignment::index_of(std::string_view name) const {
    auto it = std::find(parties_.begin(), parties_.end(), name);
    if (it == parties_.end()) throw std::invalid_argument("unknown party '" + std::string(name) + "'");
    return static_cast<PartyId>(it - parties_.begin());
}

Graph build_caveman(std::size_t cliques, std::size_t clique_size) {
    if (cliques == 0 || clique_size == 0) throw std::invalid_argument("caveman graph needs l >= 1 and k >= 1");
    Graph g(cliques * clique_size);
    for (std::size_t c = 0; c < cliques; ++c) {
        const auto base = static_cast<NodeId>(c * clique_size);
        for (NodeId i = 0; i < clique_size; ++i) {
            for (NodeId j = i + 1; j < clique_size; ++j) g.add_edge(base + i, base + j);
        }
    }
    g.set_cliques(cliques);
    return g;
}

PartyAssignment assign_parties_spa(std::size_t node_count, std::span<const PartyCount> counts, Seed seed) {
    std::vector<std::string> names;
    std::vector<PartyId> slots;
    slots.reserve(node_count);
    for (const auto& pc : counts) {
        if (pc.count == 0) throw std::invalid_argument("party '" + pc.party + "' given zero voters");
        slots.insert(slots.end(), pc.count, static_cast<PartyId>(names.size()));
        names.push_back(pc.party);
    }
    if (slots.size() != node_count)
        throw std::invalid_argument("party counts sum to " + std::to_string(slots.size()) + ", expected " +
                                    std::to_string(node_count));
    Rng rng(seed);
    rng.shuffle(slots);
    return PartyAssignment(std::move(names), std::move(slots));
}

PartyAssignment assign_parties_spa(const Graph& graph, std::span<const PartyCount> counts, Seed seed) {
    return assign_parties_spa(graph.node_count(), counts, seed);
}

namespace {

// Shared rewiring loop. `probability` maps (u, n) to the chance of moving the edge.
template <class Probability>
Graph rewire_caveman(Graph g, Seed seed, RewireStats& stats, Probability&& probability) {
    stats = {};
    const std::size_t n_nodes = g.node_count();
    const auto snapshot = g.edges();  // clique-major, lexicographic within a clique
    if (n_nodes < 3) return g;
    Rng rng(seed);
    for (const auto& [u, v] : snapshot) {
        // Uniform over V \ {u, v}: draw from N-2 slots and skip the two excluded ids.
        auto target = static_cast<NodeId>(rng.index(n_nodes - 2));
        const NodeId lo = std::min(u, v), hi = std::max(u, v);
        if (target >= lo) ++target;
        if (target >= hi) ++target;
        const double coin = rng.uniform();
        if (coin >= probability(u, target)) continue;
        ++stats.attempts;
        if (g.clique_of(u) == g.clique_of(target) || g.has_edge(u, target)) {
            ++stats.collisions;
            continue;
        }
        g.remove_edge(u, v);
        g.add_edge(u, target);
        ++stats.rewired;
    }
    return g;
}

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument(std::string(what) + " must lie in [0, 1]");
}

}  // namespace

Graph generate_hrc(const HrcParams& params, const PartyAssignment& assignment, Seed seed, RewireStats& stats) {
    check_probability(params.rewire_probability, "rewire probability");
    check_probability(params.homophily, "homophily");
    const std::size_t n = params.clique_count * params.clique_size;
    if (assignment.node_count() != n)
        throw std::invalid_argument("assignment covers " + std::to_string(assignment.node_count()) +
                                    " nodes, graph has " + std::to_string(n));
    const double same = params.rewire_probability * params.homophily;
    const double other = params.rewire_probability * (1.0 - params.homophily);
    return rewire_caveman(build_caveman(params.clique_count, params.clique_size), seed, stats,
                          [&](NodeId u, NodeId target) {
                              return assignment.party_of(u) == assignment.party_of(target) ? same : other;
                          });
}

Graph generate_hrc(const HrcParams& params, const PartyAssignment& assignment, Seed seed) {
    RewireStats stats;
    return generate_hrc(params, assignment, seed, stats);
}

Graph rewire_relaxed(const Graph& graph, double p, Seed seed, RewireStats& stats) {
    check_probability(p, "rewire probability");
    if (graph.clique_count() == 0) throw std::invalid_argument("relaxed rewiring needs a caveman graph");
    if (graph != build_caveman(graph.clique_count(), graph.clique_size()))
        throw std::invalid_argument("relaxed rewiring needs an unmodified caveman graph");
    return rewire_caveman(graph, seed, stats, [p](NodeId, NodeId) { return p; });
}

Graph rewire_relaxed(const Graph& graph, double p, Seed seed) {
    RewireStats stats;
    return rewire_relaxed(graph, p, seed, stats);
}

std::vector<std::size_t> poll_counts(const Graph& graph, std::span<const PartyId> votes, std::size_t party_count,
                                     NodeId n) {
    std::vector<std::size_t> counts(party_count, 0);
    ++counts.at(votes[n]);
    for (NodeId m : graph.neighbors(n)) ++counts.at(votes[m]);
    return counts;
}

std::vector<double> poll_fractions(const Graph& graph, const PartyAssignment& assignment, NodeId n) {
    if (n >= graph.node_count()) throw std::out_of_range("node out of range");
    const auto counts = poll_counts(graph, assignment.votes(), assignment.party_count(), n);
    const double denom = 1.0 + static_cast<double>(graph.degree(n));
    std::vector<double> out(counts.size());
    std::transform(counts.begin(), counts.end(), out.begin(),
                   [denom](std::size_t c) { return static_cast<double>(c) / denom; });
    return out;
}

}  // namespace cavevote
