#include "cavevote/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace cavevote {

namespace {

[[noreturn]] void parse_error(std::size_t line, const std::string& what) {
    throw std::invalid_argument("line " + std::to_string(line) + ": " + what);
}

std::size_t parse_count(const std::string& text, std::size_t line) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(text, &pos);
    } catch (const std::exception&) {
        parse_error(line, "expected an integer, got '" + text + "'");
    }
    if (pos != text.size() || text.front() == '-') parse_error(line, "expected an integer, got '" + text + "'");
    return static_cast<std::size_t>(v);
}

}  // namespace

void write_graph(std::ostream& out, const Graph& graph) {
    out << "nodes=" << graph.node_count() << " cliques=" << graph.clique_count() << '\n';
    for (const auto& [u, v] : graph.edges()) out << u << ' ' << v << '\n';
}

Graph read_graph(std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    std::optional<Graph> g;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream row(line);
        if (!g) {
            std::size_t nodes = 0, cliques = 0;
            bool have_nodes = false;
            std::string field;
            while (row >> field) {
                const auto eq = field.find('=');
                if (eq == std::string::npos) parse_error(lineno, "malformed header field '" + field + "'");
                const auto key = field.substr(0, eq);
                const auto value = parse_count(field.substr(eq + 1), lineno);
                if (key == "nodes") {
                    nodes = value;
                    have_nodes = true;
                } else if (key == "cliques") {
                    cliques = value;
                } else {
                    parse_error(lineno, "unknown header key '" + key + "'");
                }
            }
            if (!have_nodes) parse_error(lineno, "header must start with nodes=N");
            g.emplace(nodes);
            g->set_cliques(cliques);
            continue;
        }
        std::string a, b, extra;
        if (!(row >> a >> b) || (row >> extra)) parse_error(lineno, "expected 'u v'");
        const auto u = parse_count(a, lineno), v = parse_count(b, lineno);
        if (u >= g->node_count() || v >= g->node_count()) parse_error(lineno, "node index out of range");
        if (u == v) parse_error(lineno, "self-loop");
        if (!g->add_edge(static_cast<NodeId>(u), static_cast<NodeId>(v))) parse_error(lineno, "duplicate edge");
    }
    if (!g) throw std::invalid_argument("graph file has no header");
    return std::move(*g);
}

void write_assignment(std::ostream& out, const PartyAssignment& assignment) {
    out << "# parties=";
    for (std::size_t p = 0; p < assignment.party_count(); ++p) out << (p ? "," : "") << assignment.party_name(p);
    out << '\n';
    for (NodeId n = 0; n < assignment.node_count(); ++n) out << n << ' ' << assignment.party_name(assignment.party_of(n)) << '\n';
}

PartyAssignment read_assignment(std::istream& in) {
    std::vector<std::string> parties;
    std::map<std::size_t, std::string> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto tag = line.find("parties=");
            if (tag != std::string::npos && parties.empty()) {
                std::istringstream list(line.substr(tag + 8));
                std::string name;
                while (std::getline(list, name, ',')) {
                    if (!name.empty()) parties.push_back(name);
                }
            }
            continue;
        }
        std::istringstream row(line);
        std::string node, party, extra;
        if (!(row >> node >> party) || (row >> extra)) parse_error(lineno, "expected 'node party'");
        const auto n = parse_count(node, lineno);
        if (!rows.emplace(n, party).second) parse_error(lineno, "node assigned twice");
    }
    const bool declared = !parties.empty();
    std::vector<PartyId> assignment(rows.size());
    std::size_t expect = 0;
    for (const auto& [n, party] : rows) {
        if (n != expect++) throw std::invalid_argument("assignment nodes must be 0..N-1 without gaps");
        auto it = std::find(parties.begin(), parties.end(), party);
        if (it == parties.end()) {
            if (declared) throw std::invalid_argument("party '" + party + "' missing from the parties header");
            parties.push_back(party);
            it = parties.end() - 1;
        }
        assignment[n] = static_cast<PartyId>(it - parties.begin());
    }
    return PartyAssignment(std::move(parties), std::move(assignment));
}

Graph load_graph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open graph file '" + path + "'");
    return read_graph(in);
}

PartyAssignment load_assignment(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open assignment file '" + path + "'");
    return read_assignment(in);
}

void save_graph(const std::string& path, const Graph& graph) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write graph file '" + path + "'");
    write_graph(out, graph);
}

void save_assignment(const std::string& path, const PartyAssignment& assignment) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write assignment file '" + path + "'");
    write_assignment(out, assignment);
}

}  // namespace cavevote
