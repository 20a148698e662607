#include "cavevote/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

namespace cavevote {

namespace {

constexpr double kEps = 1e-12;

PollState parse_state(const std::string& s) {
    if (s == "win") return PollState::Win;
    if (s == "deadlock") return PollState::Deadlock;
    if (s == "lose") return PollState::Lose;
    throw std::invalid_argument("unknown poll state '" + s + "'");
}

Phase parse_phase(const std::string& s) {
    if (s == "early") return Phase::Early;
    if (s == "late") return Phase::Late;
    throw std::invalid_argument("unknown phase '" + s + "'");
}

double sample_beta(Rng& rng, double mean, double concentration) {
    std::gamma_distribution<double> ga(mean * concentration, 1.0);
    std::gamma_distribution<double> gb((1.0 - mean) * concentration, 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    return x + y > 0 ? x / (x + y) : mean;
}

}  // namespace

std::string_view to_string(PollState s) {
    switch (s) {
        case PollState::Win: return "win";
        case PollState::Deadlock: return "deadlock";
        case PollState::Lose: return "lose";
    }
    return "?";
}

std::string_view to_string(Phase p) { return p == Phase::Early ? "early" : "late"; }

BehaviorDistribution BehaviorDistribution::from_samples_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open strategy file '" + path + "'");
    BehaviorDistribution d;
    d.empirical.emplace();
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        std::string state, phase;
        double value = 0;
        if (!(row >> state >> phase)) continue;
        if (state == "state") continue;  // header
        if (!(row >> value) || value < 0.0 || value > 1.0)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected a probability");
        (*d.empirical)[static_cast<std::size_t>(parse_state(state))][static_cast<std::size_t>(parse_phase(phase))]
            .push_back(value);
    }
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            const auto& s = (*d.empirical)[i][j];
            if (s.empty())
                throw std::invalid_argument(path + ": no samples for " +
                                            std::string(to_string(static_cast<PollState>(i))) + "/" +
                                            std::string(to_string(static_cast<Phase>(j))));
            d.mean[i][j] = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
        }
    }
    return d;
}

StrategyMatrix StrategyMatrix::uniform(std::size_t n_voters, const StrategyTable& table) {
    return StrategyMatrix{std::vector<StrategyTable>(n_voters, table)};
}

StrategyMatrix StrategyMatrix::constant(std::size_t n_voters, double p) {
    StrategyTable t;
    for (auto& row : t) row.fill(p);
    return uniform(n_voters, t);
}

StrategyMatrix sample_strategies(const BehaviorDistribution& dist, std::size_t n_voters, Seed seed) {
    if (!(dist.concentration > 0)) throw std::invalid_argument("concentration must be positive");
    for (const auto& row : dist.mean) {
        for (double m : row) {
            if (!(m > 0.0 && m < 1.0)) throw std::invalid_argument("strategy means must lie in (0, 1)");
        }
    }
    StrategyMatrix out;
    out.voters.resize(n_voters);
    for (std::size_t v = 0; v < n_voters; ++v) {
        Rng rng(derive_seed(seed, Stream::Voter, v));
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                if (dist.empirical) {
                    const auto& pool = (*dist.empirical)[i][j];
                    out.voters[v][i][j] = pool[rng.index(pool.size())];
                } else {
                    out.voters[v][i][j] = sample_beta(rng, dist.mean[i][j], dist.concentration);
                }
            }
        }
    }
    return out;
}

void ElectionConfig::validate() const {
    if (!(victory_threshold > 0.5 && victory_threshold <= 1.0))
        throw std::invalid_argument("victory threshold must lie in (0.5, 1]");
    if (!(tick > 0)) throw std::invalid_argument("tick interval must be positive");
    if (!(early_cutoff < duration)) throw std::invalid_argument("early cutoff must precede the end of the election");
}

std::size_t ElectionConfig::tick_count() const {
    return static_cast<std::size_t>(std::floor(duration / tick + 1e-9));
}

Phase ElectionConfig::phase_of(std::size_t r) const {
    return static_cast<double>(r) * tick < early_cutoff - 1e-9 ? Phase::Early : Phase::Late;
}

PollState classify_poll_state(double own_share, double victory_threshold) {
    if (own_share >= victory_threshold - kEps) return PollState::Win;
    if (own_share <= 1.0 - victory_threshold + kEps) return PollState::Lose;
    return PollState::Deadlock;
}

VoterStreams::VoterStreams(Seed election_seed, std::size_t n_voters) {
    streams_.reserve(n_voters);
    for (std::size_t v = 0; v < n_voters; ++v) streams_.emplace_back(derive_seed(election_seed, Stream::Voter, v));
}

namespace {

PartyId update_voter(const Graph& graph, std::span<const PartyId> votes, std::span<const PartyId> assigned,
                     std::size_t party_count, const StrategyMatrix& strategies, Phase phase,
                     const ElectionConfig& config, Rng& rng, NodeId v) {
    const auto counts = poll_counts(graph, votes, party_count, v);
    const PartyId backed = config.stick_target == StickTarget::Current ? votes[v] : assigned[v];
    const double share = static_cast<double>(counts[backed]) / static_cast<double>(graph.degree(v) + 1);
    const PollState state = classify_poll_state(share, config.victory_threshold);
    // Both draws happen every tick so each voter's stream advances uniformly.
    const double coin = rng.uniform();
    const std::uint64_t tie_draw = rng();
    if (coin < strategies.stick(v, state, phase)) return backed;

    std::size_t best = 0;
    std::size_t ties = 0;
    for (PartyId p = 0; p < party_count; ++p) {
        if (p == backed || counts[p] == 0) continue;
        if (counts[p] > best) {
            best = counts[p];
            ties = 1;
        } else if (counts[p] == best) {
            ++ties;
        }
    }
    if (ties == 0) return votes[v];  // nobody else in the poll
    std::size_t pick = static_cast<std::size_t>(tie_draw % ties);
    for (PartyId p = 0; p < party_count; ++p) {
        if (p == backed || counts[p] != best) continue;
        if (pick-- == 0) return p;
    }
    return votes[v];
}

void check_step_inputs(const Graph& graph, std::span<const PartyId> votes, const StrategyMatrix& strategies,
                       const VoterStreams& streams) {
    if (votes.size() != graph.node_count() || strategies.size() != graph.node_count() ||
        streams.size() != graph.node_count())
        throw std::invalid_argument("graph, votes, strategies and streams must have matching sizes");
}

}  // namespace

std::vector<PartyId> step_in_order(const Graph& graph, std::span<const PartyId> votes,
                                   std::span<const PartyId> assigned, std::size_t party_count,
                                   const StrategyMatrix& strategies, Phase phase, const ElectionConfig& config,
                                   VoterStreams& streams, std::span<const NodeId> order) {
    check_step_inputs(graph, votes, strategies, streams);
    std::vector<PartyId> next(votes.begin(), votes.end());
    for (NodeId v : order)
        next[v] = update_voter(graph, votes, assigned, party_count, strategies, phase, config, streams[v], v);
    return next;
}

std::vector<PartyId> step(const Graph& graph, std::span<const PartyId> votes, std::span<const PartyId> assigned,
                          std::size_t party_count, const StrategyMatrix& strategies, Phase phase,
                          const ElectionConfig& config, VoterStreams& streams) {
    std::vector<NodeId> order(graph.node_count());
    std::iota(order.begin(), order.end(), NodeId{0});
    return step_in_order(graph, votes, assigned, party_count, strategies, phase, config, streams, order);
}

ElectionOutcome run_election(const Graph& graph, const PartyAssignment& initial, const ElectionConfig& config,
                             const StrategyMatrix& strategies, Seed seed) {
    config.validate();
    if (graph.node_count() != initial.node_count() || strategies.size() != initial.node_count())
        throw std::invalid_argument("graph, assignment and strategies must cover the same voters");
    const std::size_t parties = initial.party_count();
    const double n = static_cast<double>(initial.node_count());
    auto shares_of = [&](std::span<const PartyId> votes) {
        std::vector<double> s(parties, 0.0);
        for (PartyId v : votes) s[v] += 1.0;
        for (auto& x : s) x /= n;
        return s;
    };

    VoterStreams streams(derive_seed(seed, Stream::Election), initial.node_count());
    std::vector<PartyId> votes(initial.votes().begin(), initial.votes().end());
    ElectionOutcome out;
    out.trajectory.push_back(shares_of(votes));
    out.tick_times.push_back(0.0);
    const std::size_t ticks = config.tick_count();
    for (std::size_t r = 1; r <= ticks; ++r) {
        votes = step(graph, votes, initial.votes(), parties, strategies, config.phase_of(r), config, streams);
        out.trajectory.push_back(shares_of(votes));
        out.tick_times.push_back(static_cast<double>(r) * config.tick);
    }
    out.final_shares = out.trajectory.back();
    for (PartyId p = 0; p < parties; ++p) {
        if (out.final_shares[p] >= config.victory_threshold - kEps) out.winner = p;
    }
    out.final_votes = std::move(votes);
    return out;
}

}  // namespace cavevote
