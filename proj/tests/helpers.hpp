#pragma once

#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "cavevote/graph.hpp"

namespace testing_helpers {

inline cavevote::Graph make_graph(std::size_t n, std::initializer_list<std::pair<int, int>> edges) {
    cavevote::Graph g(n);
    for (auto [u, v] : edges) g.add_edge(static_cast<cavevote::NodeId>(u), static_cast<cavevote::NodeId>(v));
    return g;
}

inline cavevote::Graph complete_graph(std::size_t n) {
    cavevote::Graph g(n);
    for (cavevote::NodeId u = 0; u < n; ++u)
        for (cavevote::NodeId v = u + 1; v < n; ++v) g.add_edge(u, v);
    return g;
}

// Labels are party indices into `names`.
inline cavevote::PartyAssignment make_assignment(std::vector<std::string> names, std::vector<cavevote::PartyId> labels) {
    return cavevote::PartyAssignment(std::move(names), std::move(labels));
}

// Caveman graph whose clique c holds red_counts[c] red voters first, then blue.
inline cavevote::PartyAssignment caveman_assignment(const std::vector<std::size_t>& red_counts, std::size_t k) {
    std::vector<cavevote::PartyId> labels;
    for (auto x : red_counts)
        for (std::size_t i = 0; i < k; ++i) labels.push_back(i < x ? 0 : 1);
    return cavevote::PartyAssignment({"red", "blue"}, std::move(labels));
}

}  // namespace testing_helpers
