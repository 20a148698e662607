#include "cavevote/metrics.hpp"

#include <numeric>
#include <string>

namespace cavevote {

std::string_view to_string(AssortmentConvention c) {
    return c == AssortmentConvention::DominantNegative ? "dominant-negative" : "complement-negative";
}

std::string_view to_string(GapConvention c) {
    return c == GapConvention::VsMostInfluential ? "vs-most-influential" : "vs-plurality-runner-up";
}

AssortmentConvention parse_assortment_convention(std::string_view s) {
    if (s == "dominant-negative") return AssortmentConvention::DominantNegative;
    if (s == "complement-negative") return AssortmentConvention::ComplementNegative;
    throw std::invalid_argument("unknown assortment convention '" + std::string(s) + "'");
}

GapConvention parse_gap_convention(std::string_view s) {
    if (s == "vs-most-influential") return GapConvention::VsMostInfluential;
    if (s == "vs-plurality-runner-up") return GapConvention::VsPluralityRunnerUp;
    throw std::invalid_argument("unknown gap convention '" + std::string(s) + "'");
}

std::size_t CliqueCounts::total_red() const noexcept { return std::accumulate(red.begin(), red.end(), std::size_t{0}); }

std::size_t CliqueCounts::strict_majorities() const noexcept {
    return static_cast<std::size_t>(std::count_if(red.begin(), red.end(), [k = clique_size](std::size_t x) { return 2 * x > k; }));
}

std::size_t CliqueCounts::weak_majorities() const noexcept {
    return static_cast<std::size_t>(std::count_if(red.begin(), red.end(), [k = clique_size](std::size_t x) { return 2 * x >= k; }));
}

std::size_t CliqueCounts::red_in_strict() const noexcept {
    std::size_t s = 0;
    for (auto x : red) s += 2 * x > clique_size ? x : 0;
    return s;
}

std::size_t CliqueCounts::red_in_weak() const noexcept {
    std::size_t s = 0;
    for (auto x : red) s += 2 * x >= clique_size ? x : 0;
    return s;
}

std::vector<std::size_t> CliqueCounts::prefix_sums() const {
    // Strict red majorities first, then ties, then blue majorities.
    auto rank = [k = clique_size](std::size_t x) { return 2 * x > k ? 0 : (2 * x == k ? 1 : 2); };
    auto ordered = red;
    std::stable_sort(ordered.begin(), ordered.end(), [&](std::size_t a, std::size_t b) { return rank(a) < rank(b); });
    std::vector<std::size_t> out(ordered.size());
    std::partial_sum(ordered.begin(), ordered.end(), out.begin());
    return out;
}

CliqueCounts CliqueCounts::from(const Graph& caveman, const PartyAssignment& assignment, PartyId red) {
    if (caveman.clique_count() == 0) throw std::invalid_argument("graph carries no clique partition");
    CliqueCounts c;
    c.clique_size = caveman.clique_size();
    c.red.assign(caveman.clique_count(), 0);
    for (NodeId n = 0; n < caveman.node_count(); ++n) {
        if (assignment.party_of(n) == red) ++c.red[caveman.clique_of(n)];
    }
    return c;
}

namespace {

void check_counts(const CliqueCounts& counts, std::size_t n_red, std::size_t n_blue) {
    const std::size_t k = counts.clique_size;
    if (k == 0 || counts.red.empty()) throw std::invalid_argument("empty clique configuration");
    for (auto x : counts.red) {
        if (x > k) throw std::invalid_argument("clique red count exceeds clique size");
    }
    if (n_red + n_blue != counts.cliques() * k)
        throw std::invalid_argument("N_R + N_B must equal l*k");
    if (counts.total_red() != n_red) throw std::invalid_argument("clique red counts do not sum to N_R");
    if (n_red == 0 || n_blue == 0) throw std::invalid_argument("both parties need voters");
}

}  // namespace

CavemanAssortments caveman_party_assortment_closed(const CliqueCounts& counts, std::size_t n_red,
                                                   std::size_t n_blue) {
    check_counts(counts, n_red, n_blue);
    const double k = static_cast<double>(counts.clique_size);
    const double n = static_cast<double>(n_red + n_blue);
    double squares = 0;
    for (auto x : counts.red) squares += static_cast<double>(x * x) / k;
    const double strict = static_cast<double>(counts.strict_majorities());
    CavemanAssortments out;
    out.red = (squares + static_cast<double>(counts.red_in_weak())) / static_cast<double>(n_red) - 1.0;
    out.blue = (squares + static_cast<double>(counts.red_in_strict()) + n - 2.0 * static_cast<double>(n_red) -
                strict * k) /
               static_cast<double>(n_blue);
    return out;
}

double caveman_gap_closed(const CliqueCounts& counts, std::size_t n_red, std::size_t n_blue) {
    const auto a = caveman_party_assortment_closed(counts, n_red, n_blue);
    return a.red - a.blue;
}

double equal_rep_gap(std::size_t strict, std::size_t weak, std::size_t cliques) {
    if (strict > weak || weak > cliques || cliques == 0)
        throw std::invalid_argument("need M <= M' <= l with l >= 1");
    return static_cast<double>(strict + weak) / static_cast<double>(cliques) - 1.0;
}

double clique_gap(std::size_t n, std::size_t n0, std::size_t winners, bool is_winner) {
    if (n == 0 || winners * n0 > n) throw std::invalid_argument("clique gap needs W*N0 <= N");
    const double g = 2.0 * static_cast<double>(n0) / static_cast<double>(n);
    return is_winner ? g : -g;
}

double plurality_core_gap(std::size_t n0, std::size_t winners, bool is_winner) {
    if (n0 == 0 || winners == 0) throw std::invalid_argument("plurality core needs N0 >= 1 and W >= 1");
    const double g = 2.0 * static_cast<double>(n0) / static_cast<double>(winners * n0 + 1);
    return is_winner ? g : -g;
}

double initial_majority(const PartyAssignment& assignment, PartyId party) {
    const auto np = static_cast<double>(assignment.count(party));
    if (assignment.party_count() == 2) return np - static_cast<double>(assignment.node_count()) / 2.0;
    return np;
}

std::vector<double> deterministic_vote_shares(const Graph& graph, const PartyAssignment& assignment,
                                              std::size_t steps) {
    if (steps == 0) throw std::invalid_argument("deterministic voter skew needs at least one step");
    if (graph.node_count() != assignment.node_count())
        throw std::invalid_argument("graph and assignment sizes differ");
    const std::size_t parties = assignment.party_count();
    std::vector<PartyId> votes(assignment.votes().begin(), assignment.votes().end());
    std::vector<PartyId> next(votes.size());
    for (std::size_t s = 0; s < steps; ++s) {
        for (NodeId n = 0; n < graph.node_count(); ++n) {
            const auto counts = poll_counts(graph, votes, parties, n);
            const auto top = std::max_element(counts.begin(), counts.end());
            const bool unique = std::count(counts.begin(), counts.end(), *top) == 1;
            next[n] = unique ? static_cast<PartyId>(top - counts.begin()) : votes[n];
        }
        votes.swap(next);
    }
    std::vector<double> shares(parties, 0.0);
    for (PartyId v : votes) shares[v] += 1.0;
    for (auto& s : shares) s /= static_cast<double>(votes.size());
    return shares;
}

double deterministic_voter_skew(const Graph& graph, const PartyAssignment& assignment, PartyId party,
                                std::size_t steps) {
    return deterministic_vote_shares(graph, assignment, steps).at(party) - 0.5;
}

WastedVotes wasted_votes(const Graph& graph, const PartyAssignment& assignment, PartyId party) {
    if (assignment.party_count() > 2)
        throw std::invalid_argument("efficiency gap is defined for two-party elections only");
    if (graph.clique_count() == 0) throw std::invalid_argument("efficiency gap needs clique districts");
    if (graph.node_count() != assignment.node_count())
        throw std::invalid_argument("graph and assignment sizes differ");
    std::vector<std::size_t> own(graph.clique_count(), 0);
    for (NodeId n = 0; n < graph.node_count(); ++n) {
        if (assignment.party_of(n) == party) ++own[graph.clique_of(n)];
    }
    const std::size_t size = graph.clique_size();
    const std::size_t needed = size / 2 + 1;
    WastedVotes w;
    for (std::size_t mine : own) {
        const std::size_t theirs = size - mine;
        if (mine > theirs) {
            w.party += mine - needed;
            w.other += theirs;
        } else if (theirs > mine) {
            w.party += mine;
            w.other += theirs - needed;
        } else {
            w.party += mine;
            w.other += theirs;
        }
    }
    return w;
}

double efficiency_gap(const Graph& graph, const PartyAssignment& assignment, PartyId party) {
    const auto w = wasted_votes(graph, assignment, party);
    return (static_cast<double>(w.other) - static_cast<double>(w.party)) / static_cast<double>(graph.node_count());
}

MetricReport metric_report(const Graph& graph, const PartyAssignment& assignment, PartyId party,
                           AssortmentConvention aconv, GapConvention gconv) {
    MetricReport r;
    const auto a = party_assortments<double>(graph, assignment, aconv);
    for (PartyId p = 0; p < assignment.party_count(); ++p)
        r.influence_gap.push_back(influence_gap_from<double>(a, assignment, p, gconv));
    r.majority = initial_majority(assignment, party);
    r.dvs = deterministic_voter_skew(graph, assignment, party);
    if (assignment.party_count() == 2 && graph.clique_count() != 0)
        r.efficiency_gap = efficiency_gap(graph, assignment, party);
    return r;
}

}  // namespace cavevote
