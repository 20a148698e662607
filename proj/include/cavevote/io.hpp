#pragma once

#include <iosfwd>
#include <string>

#include "cavevote/graph.hpp"

namespace cavevote {

// Edge-list format:
//
//   nodes=N cliques=l
//   u v
//   ...
//
// cliques=0 (or omitted) means the graph has no clique partition. Edges are
// written once each, u < v, in lexicographic order. Lines starting with '#'
// are comments.
void write_graph(std::ostream& out, const Graph& graph);
Graph read_graph(std::istream& in);

// Assignment format: one `node party` pair per line, nodes in order. An
// optional leading `# parties=a,b,c` comment fixes party order; otherwise
// parties are ordered by first appearance.
void write_assignment(std::ostream& out, const PartyAssignment& assignment);
PartyAssignment read_assignment(std::istream& in);

Graph load_graph(const std::string& path);
PartyAssignment load_assignment(const std::string& path);
void save_graph(const std::string& path, const Graph& graph);
void save_assignment(const std::string& path, const PartyAssignment& assignment);

}  // namespace cavevote
