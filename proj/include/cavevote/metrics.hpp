#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <type_traits>
#include <vector>

#include <boost/rational.hpp>

#include "cavevote/graph.hpp"

namespace cavevote {

/// Exact arithmetic for small-graph checks.
using Rational = boost::rational<std::int64_t>;

/// How a node that is not in its poll's plurality is scored.
enum class AssortmentConvention {
    DominantNegative,    // -(share of the plurality party)
    ComplementNegative,  // -(share of every party other than its own)
};

/// Which rival a party's assortment is compared against.
enum class GapConvention {
    VsMostInfluential,    // the other party with the highest assortment
    VsPluralityRunnerUp,  // every other party with the most voters
};

std::string_view to_string(AssortmentConvention c);
std::string_view to_string(GapConvention c);
AssortmentConvention parse_assortment_convention(std::string_view s);
GapConvention parse_gap_convention(std::string_view s);

namespace detail {

template <class T>
T ratio(std::size_t num, std::size_t den) {
    if constexpr (std::is_same_v<T, Rational>) {
        return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
    } else {
        return static_cast<T>(num) / static_cast<T>(den);
    }
}

}  // namespace detail

/// Node influence assortment a_n.
///
/// Positive (the own-party poll share) when the node's party holds at least a
/// tied plurality of its poll; otherwise negative, with magnitude set by the
/// convention. With two parties both conventions coincide.
template <class T = double>
T node_assortment(const Graph& graph, const PartyAssignment& assignment, NodeId n,
                  AssortmentConvention conv = AssortmentConvention::DominantNegative) {
    if (n >= graph.node_count()) throw std::out_of_range("node out of range");
    const auto counts = poll_counts(graph, assignment.votes(), assignment.party_count(), n);
    const std::size_t poll = graph.degree(n) + 1;
    const std::size_t own = counts[assignment.party_of(n)];
    const std::size_t top = *std::max_element(counts.begin(), counts.end());
    if (own == top) return detail::ratio<T>(own, poll);
    if (conv == AssortmentConvention::DominantNegative) return -detail::ratio<T>(top, poll);
    return -detail::ratio<T>(poll - own, poll);
}

/// Party influence assortment A_P: mean node assortment over P's voters.
template <class T = double>
T party_assortment(const Graph& graph, const PartyAssignment& assignment, PartyId party,
                   AssortmentConvention conv = AssortmentConvention::DominantNegative) {
    if (party >= assignment.party_count()) throw std::invalid_argument("party absent from assignment");
    if (graph.node_count() != assignment.node_count())
        throw std::invalid_argument("graph and assignment sizes differ");
    T sum{0};
    for (NodeId n = 0; n < graph.node_count(); ++n) {
        if (assignment.party_of(n) == party) sum += node_assortment<T>(graph, assignment, n, conv);
    }
    return sum / static_cast<T>(static_cast<std::int64_t>(assignment.count(party)));
}

/// A_P for every party, in party order.
template <class T = double>
std::vector<T> party_assortments(const Graph& graph, const PartyAssignment& assignment,
                                 AssortmentConvention conv = AssortmentConvention::DominantNegative) {
    if (graph.node_count() != assignment.node_count())
        throw std::invalid_argument("graph and assignment sizes differ");
    std::vector<T> sums(assignment.party_count(), T{0});
    for (NodeId n = 0; n < graph.node_count(); ++n)
        sums[assignment.party_of(n)] += node_assortment<T>(graph, assignment, n, conv);
    for (PartyId p = 0; p < sums.size(); ++p) sums[p] /= static_cast<T>(static_cast<std::int64_t>(assignment.count(p)));
    return sums;
}

/// Influence gap of `party` from precomputed assortments.
///
/// VsMostInfluential yields one value. VsPluralityRunnerUp yields one value per
/// rival tied for the largest vote count among the other parties; the result
/// is sorted and deduplicated.
template <class T = double>
std::vector<T> influence_gap_from(const std::vector<T>& assortments, const PartyAssignment& assignment, PartyId party,
                                  GapConvention gconv = GapConvention::VsMostInfluential) {
    if (assignment.party_count() < 2) throw std::invalid_argument("influence gap needs at least two parties");
    if (party >= assignment.party_count()) throw std::invalid_argument("party absent from assignment");
    std::vector<T> out;
    if (gconv == GapConvention::VsMostInfluential) {
        std::optional<T> best;
        for (PartyId q = 0; q < assortments.size(); ++q) {
            if (q != party && (!best || assortments[q] > *best)) best = assortments[q];
        }
        out.push_back(assortments[party] - *best);
        return out;
    }
    std::size_t most = 0;
    for (PartyId q = 0; q < assortments.size(); ++q) {
        if (q != party) most = std::max(most, assignment.count(q));
    }
    for (PartyId q = 0; q < assortments.size(); ++q) {
        if (q != party && assignment.count(q) == most) out.push_back(assortments[party] - assortments[q]);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

template <class T = double>
std::vector<T> influence_gap(const Graph& graph, const PartyAssignment& assignment, PartyId party,
                             AssortmentConvention aconv = AssortmentConvention::DominantNegative,
                             GapConvention gconv = GapConvention::VsMostInfluential) {
    return influence_gap_from<T>(party_assortments<T>(graph, assignment, aconv), assignment, party, gconv);
}

/// Single-valued gap under the default (Dominant, VsMostInfluential) pairing,
/// for every party.
template <class T = double>
std::vector<T> influence_gaps(const Graph& graph, const PartyAssignment& assignment,
                              AssortmentConvention aconv = AssortmentConvention::DominantNegative) {
    const auto a = party_assortments<T>(graph, assignment, aconv);
    std::vector<T> out;
    out.reserve(a.size());
    for (PartyId p = 0; p < a.size(); ++p)
        out.push_back(influence_gap_from<T>(a, assignment, p, GapConvention::VsMostInfluential).front());
    return out;
}

// Closed forms for isolated cliques -------------------------------------------

/// Per-clique red counts of a two-party caveman configuration.
struct CliqueCounts {
    std::vector<std::size_t> red;  // x_c, each in [0, k]
    std::size_t clique_size = 0;   // k

    std::size_t cliques() const noexcept { return red.size(); }
    std::size_t total_red() const noexcept;
    /// M: cliques where red holds a strict majority.
    std::size_t strict_majorities() const noexcept;
    /// M': cliques where red holds at least half.
    std::size_t weak_majorities() const noexcept;
    /// η = M' - M.
    std::size_t marginal() const noexcept { return weak_majorities() - strict_majorities(); }
    /// X_M: red voters in strict-majority cliques.
    std::size_t red_in_strict() const noexcept;
    /// X_M': red voters in weak-majority cliques.
    std::size_t red_in_weak() const noexcept;
    /// X_d over cliques ordered strict red, tied, then blue (prefix sums).
    std::vector<std::size_t> prefix_sums() const;

    /// Red counts read off a labelled caveman graph.
    static CliqueCounts from(const Graph& caveman, const PartyAssignment& assignment, PartyId red);
};

/// Closed-form A_R and A_B for isolated cliques.
struct CavemanAssortments {
    double red = 0;
    double blue = 0;
};

CavemanAssortments caveman_party_assortment_closed(const CliqueCounts& counts, std::size_t n_red,
                                                   std::size_t n_blue);

/// G_R = A_R - A_B for isolated cliques, from the closed-form assortments.
///
/// The usual single-line expression for this gap carries a sign slip on
/// its (N_B - N_R) term (it returns 1 rather than 0 for red counts [4,0,0]),
/// so the value here is taken as the difference of the two assortments.
double caveman_gap_closed(const CliqueCounts& counts, std::size_t n_red, std::size_t n_blue);

/// (M + M')/l - 1, the equal-representation caveman gap.
double equal_rep_gap(std::size_t strict, std::size_t weak, std::size_t cliques);

/// Gap of a party in a clique of N voters with W joint plurality winners of
/// N0 voters each: +2N0/N for winners, -2N0/N for the rest.
double clique_gap(std::size_t n, std::size_t n0, std::size_t winners, bool is_winner);

/// Gap once edges are stripped down to a plurality core: ±2N0/(W N0 + 1).
double plurality_core_gap(std::size_t n0, std::size_t winners, bool is_winner);

// Benchmarks -----------------------------------------------------------------

/// Two parties: N_P - N/2. Three or more: N_P.
double initial_majority(const PartyAssignment& assignment, PartyId party);

/// Vote shares after `steps` synchronous rounds of strict-plurality conformity
/// (ties keep the current vote).
std::vector<double> deterministic_vote_shares(const Graph& graph, const PartyAssignment& assignment,
                                              std::size_t steps = 1);

/// Share of `party` minus 1/2 after `steps` conformity rounds.
double deterministic_voter_skew(const Graph& graph, const PartyAssignment& assignment, PartyId party,
                                std::size_t steps = 1);

/// Wasted votes of each party over the graph's clique districts.
struct WastedVotes {
    std::size_t party = 0;
    std::size_t other = 0;
};
WastedVotes wasted_votes(const Graph& graph, const PartyAssignment& assignment, PartyId party);

/// (wasted_other - wasted_P) / N over the graph's clique districts.
/// Rejects assignments with more than two parties.
double efficiency_gap(const Graph& graph, const PartyAssignment& assignment, PartyId party);

/// Influence gaps for every party plus the benchmarks for one focal party.
struct MetricReport {
    std::vector<std::vector<double>> influence_gap;  // per party, under the chosen conventions
    double majority = 0;
    double dvs = 0;
    std::optional<double> efficiency_gap;  // two parties with districts only
};

MetricReport metric_report(const Graph& graph, const PartyAssignment& assignment, PartyId party,
                           AssortmentConvention aconv = AssortmentConvention::DominantNegative,
                           GapConvention gconv = GapConvention::VsMostInfluential);

}  // namespace cavevote
