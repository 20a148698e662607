#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cavevote/graph.hpp"
#include "cavevote/rng.hpp"

namespace cavevote {

/// What a voter's poll predicts for its party.
enum class PollState { Win = 0, Deadlock = 1, Lose = 2 };
enum class Phase { Early = 0, Late = 1 };

std::string_view to_string(PollState s);
std::string_view to_string(Phase p);

/// Six stick-probabilities indexed [state][phase].
using StrategyTable = std::array<std::array<double, 2>, 3>;

/// Population-level description of voter strategies.
///
/// Without an empirical table each p_ij is Beta-distributed with mean
/// mean[i][j] and concentration `concentration`. An empirical table, when
/// present, is resampled uniformly instead.
struct BehaviorDistribution {
    StrategyTable mean{{{0.975, 0.979}, {0.964, 0.911}, {0.598, 0.574}}};
    double concentration = 10.0;
    std::optional<std::array<std::array<std::vector<double>, 2>, 3>> empirical;

    /// Reads `state,phase,value` rows (state in win/deadlock/lose, phase in
    /// early/late) into an empirical table.
    static BehaviorDistribution from_samples_csv(const std::string& path);
};

/// Per-voter strategies; row v holds voter v's six stick-probabilities.
struct StrategyMatrix {
    std::vector<StrategyTable> voters;

    std::size_t size() const noexcept { return voters.size(); }
    double stick(std::size_t voter, PollState s, Phase p) const {
        return voters.at(voter)[static_cast<std::size_t>(s)][static_cast<std::size_t>(p)];
    }
    /// Every voter uses the same table.
    static StrategyMatrix uniform(std::size_t n_voters, const StrategyTable& table);
    static StrategyMatrix constant(std::size_t n_voters, double p);
};

StrategyMatrix sample_strategies(const BehaviorDistribution& dist, std::size_t n_voters, Seed seed);

/// Which party a voter's stick-probability protects.
enum class StickTarget {
    Current,   // keep the vote the voter currently holds
    Assigned,  // return to the initially assigned party
};

struct ElectionConfig {
    double duration = 240.0;
    double early_cutoff = 83.0;
    double tick = 3.3;
    double victory_threshold = 0.6;
    StickTarget stick_target = StickTarget::Current;

    void validate() const;
    /// floor(duration / tick).
    std::size_t tick_count() const;
    /// Phase of tick r (1-based), occurring at t = r * tick.
    Phase phase_of(std::size_t r) const;
};

/// Win if own share >= V, Lose if own share <= 1 - V, Deadlock otherwise.
PollState classify_poll_state(double own_share, double victory_threshold);

/// Per-voter random streams for one election. Voter v always draws from
/// stream v, so a tick's result does not depend on processing order.
class VoterStreams {
public:
    VoterStreams(Seed election_seed, std::size_t n_voters);
    Rng& operator[](std::size_t v) { return streams_.at(v); }
    std::size_t size() const noexcept { return streams_.size(); }

private:
    std::vector<Rng> streams_;
};

/// One synchronous update. All polls read `votes`; the result is returned.
/// `assigned` is consulted only with StickTarget::Assigned.
std::vector<PartyId> step(const Graph& graph, std::span<const PartyId> votes, std::span<const PartyId> assigned,
                          std::size_t party_count, const StrategyMatrix& strategies, Phase phase,
                          const ElectionConfig& config, VoterStreams& streams);

/// Same update, visiting voters in the given order (a permutation of 0..N-1).
std::vector<PartyId> step_in_order(const Graph& graph, std::span<const PartyId> votes,
                                   std::span<const PartyId> assigned, std::size_t party_count,
                                   const StrategyMatrix& strategies, Phase phase, const ElectionConfig& config,
                                   VoterStreams& streams, std::span<const NodeId> order);

struct ElectionOutcome {
    std::vector<double> final_shares;                // per party
    std::optional<PartyId> winner;                   // share >= V, else deadlock
    std::vector<std::vector<double>> trajectory;     // row 0 is the initial state, then one row per tick
    std::vector<double> tick_times;                  // seconds, aligned with trajectory
    std::vector<PartyId> final_votes;

    bool deadlock() const noexcept { return !winner.has_value(); }
    /// Final share of `party` minus 1/2.
    double skew(PartyId party) const { return final_shares.at(party) - 0.5; }
};

ElectionOutcome run_election(const Graph& graph, const PartyAssignment& initial, const ElectionConfig& config,
                             const StrategyMatrix& strategies, Seed seed);

}  // namespace cavevote
