#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <vector>

#include "cavevote/dynamics.hpp"
#include "cavevote/graph.hpp"
#include "helpers.hpp"

using namespace cavevote;
using testing_helpers::make_assignment;
using testing_helpers::make_graph;

namespace {

PartyAssignment spa(std::size_t n, std::vector<PartyCount> counts, Seed seed) {
    return assign_parties_spa(n, counts, seed);
}

std::vector<PartyId> step_default(const Graph& g, const PartyAssignment& a, std::span<const PartyId> votes,
                                  const StrategyMatrix& s, Phase phase, VoterStreams& streams,
                                  const ElectionConfig& cfg = {}) {
    return step(g, votes, a.votes(), a.party_count(), s, phase, cfg, streams);
}

}  // namespace

TEST_CASE("poll state classification") {
    CHECK(classify_poll_state(0.75, 0.6) == PollState::Win);
    CHECK(classify_poll_state(0.5, 0.6) == PollState::Deadlock);
    CHECK(classify_poll_state(0.2, 0.6) == PollState::Lose);
    CHECK(classify_poll_state(0.6, 0.6) == PollState::Win);
    CHECK(classify_poll_state(0.4, 0.6) == PollState::Lose);
    CHECK(classify_poll_state(0.41, 0.6) == PollState::Deadlock);
    CHECK(classify_poll_state(1.0, 1.0) == PollState::Win);
    CHECK(classify_poll_state(0.5, 1.0) == PollState::Deadlock);
    CHECK(to_string(PollState::Lose) == "lose");
    CHECK(to_string(Phase::Early) == "early");
}

TEST_CASE("election config") {
    ElectionConfig cfg;
    CHECK(cfg.tick_count() == 72);
    std::size_t early = 0, late = 0;
    for (std::size_t r = 1; r <= cfg.tick_count(); ++r) (cfg.phase_of(r) == Phase::Early ? early : late)++;
    CHECK(early == 25);
    CHECK(late == 47);
    CHECK(cfg.phase_of(25) == Phase::Early);
    CHECK(cfg.phase_of(26) == Phase::Late);

    ElectionConfig bad;
    bad.victory_threshold = 0.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.tick = 0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = {};
    bad.early_cutoff = 300;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("strategy sampling") {
    BehaviorDistribution dist;
    SUBCASE("means match the configured table") {
        const auto s = sample_strategies(dist, 100000, 5);
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 2; ++j) {
                double sum = 0;
                for (const auto& t : s.voters) sum += t[i][j];
                CHECK(std::abs(sum / 100000 - dist.mean[i][j]) < 0.005);
            }
        }
    }
    SUBCASE("win-state strategies are mostly above 0.9") {
        const auto s = sample_strategies(dist, 20000, 6);
        for (std::size_t j = 0; j < 2; ++j) {
            const auto above = std::count_if(s.voters.begin(), s.voters.end(), [&](const StrategyTable& t) { return t[0][j] > 0.9; });
            CHECK(static_cast<double>(above) / 20000 >= 0.8);
        }
    }
    SUBCASE("large concentration pins every value to its mean") {
        dist.concentration = 1e7;
        const auto s = sample_strategies(dist, 200, 7);
        for (const auto& t : s.voters)
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 2; ++j) CHECK(std::abs(t[i][j] - dist.mean[i][j]) < 2e-3);
    }
    SUBCASE("voter v's strategies do not depend on the population size") {
        const auto small = sample_strategies(dist, 5, 8);
        const auto large = sample_strategies(dist, 50, 8);
        for (std::size_t v = 0; v < 5; ++v) CHECK(small.voters[v] == large.voters[v]);
    }
    SUBCASE("bad parameters") {
        dist.concentration = 0;
        CHECK_THROWS_AS(sample_strategies(dist, 3, 1), std::invalid_argument);
        dist.concentration = 10;
        dist.mean[0][0] = 1.0;
        CHECK_THROWS_AS(sample_strategies(dist, 3, 1), std::invalid_argument);
    }
    SUBCASE("empirical table is resampled") {
        const auto path = std::filesystem::temp_directory_path() / "cavevote_strategies.csv";
        {
            std::ofstream out(path);
            out << "state,phase,value\n";
            for (const char* state : {"win", "deadlock", "lose"})
                for (const char* phase : {"early", "late"}) out << state << ',' << phase << ",0.25\n" << state << ',' << phase << ",0.75\n";
        }
        const auto emp = BehaviorDistribution::from_samples_csv(path.string());
        REQUIRE(emp.empirical);
        const auto s = sample_strategies(emp, 1000, 9);
        std::size_t low = 0;
        for (const auto& t : s.voters) {
            for (std::size_t i = 0; i < 3; ++i)
                for (std::size_t j = 0; j < 2; ++j) CHECK((t[i][j] == 0.25 || t[i][j] == 0.75));
            low += t[2][1] == 0.25;
        }
        CHECK(low > 400);
        CHECK(low < 600);
        std::filesystem::remove(path);
    }
}

TEST_CASE("single step") {
    SUBCASE("stick probability 1 keeps every vote") {
        const auto g = generate_hrc({4, 5, 0.6, 0.4}, spa(20, {{"red", 11}, {"blue", 9}}, 1), 2);
        const auto a = spa(20, {{"red", 11}, {"blue", 9}}, 1);
        VoterStreams streams(3, 20);
        const auto next = step_default(g, a, a.votes(), StrategyMatrix::constant(20, 1.0), Phase::Early, streams);
        CHECK(std::equal(next.begin(), next.end(), a.votes().begin()));
    }
    SUBCASE("homogeneous graph never changes") {
        const auto a = make_assignment({"red", "blue"}, {0, 0, 0, 0, 0, 1});
        // Node 5 is isolated, so no poll holds both parties.
        const auto g = make_graph(6, {{0, 1}, {1, 2}, {2, 3}, {3, 4}, {0, 4}});
        VoterStreams streams(4, 6);
        const auto next = step_default(g, a, a.votes(), StrategyMatrix::constant(6, 0.0), Phase::Late, streams);
        CHECK(std::equal(next.begin(), next.end(), a.votes().begin()));
    }
    SUBCASE("forced switch toward the poll majority") {
        // Red centre with three blue neighbours, never sticks.
        const auto g = make_graph(4, {{0, 1}, {0, 2}, {0, 3}});
        const auto a = make_assignment({"red", "blue"}, {0, 1, 1, 1});
        VoterStreams streams(5, 4);
        const auto next = step_default(g, a, a.votes(), StrategyMatrix::constant(4, 0.0), Phase::Early, streams);
        CHECK(next[0] == 1);
        // Each blue leaf sees {blue, red} and also switches.
        CHECK(next[1] == 0);
    }
    SUBCASE("multi-party switch goes to the strongest rival, ties split evenly") {
        // Centre (red) sees blue twice and green once.
        const auto g = make_graph(5, {{0, 1}, {0, 2}, {0, 3}, {0, 4}});
        const auto a = make_assignment({"red", "blue", "green"}, {0, 1, 1, 2, 0});
        for (Seed s = 0; s < 50; ++s) {
            VoterStreams streams(s, 5);
            CHECK(step_default(g, a, a.votes(), StrategyMatrix::constant(5, 0.0), Phase::Early, streams)[0] == 1);
        }
        // Centre (red) sees one blue and one green: either may be chosen.
        const auto tie = make_assignment({"red", "blue", "green"}, {0, 1, 2, 0, 0});
        const auto tie_graph = make_graph(5, {{0, 1}, {0, 2}, {3, 4}});
        int blue = 0;
        const int trials = 4000;
        for (Seed s = 0; s < trials; ++s) {
            VoterStreams streams(s, 5);
            const auto next = step_default(tie_graph, tie, tie.votes(), StrategyMatrix::constant(5, 0.0), Phase::Early, streams);
            CHECK(next[0] != 0);
            blue += next[0] == 1;
        }
        CHECK(std::abs(blue - trials / 2) < 200);
    }
    SUBCASE("the update is independent of node processing order") {
        for (Seed s = 0; s < 30; ++s) {
            const auto a = spa(30, {{"red", 12}, {"blue", 10}, {"green", 8}}, s);
            const auto g = generate_hrc({5, 6, 0.8, 0.3}, a, s + 1);
            const auto strategies = sample_strategies(BehaviorDistribution{}, 30, s + 2);
            std::vector<NodeId> order(30);
            std::iota(order.begin(), order.end(), 0);
            Rng shuffler(s);
            shuffler.shuffle(order);
            VoterStreams s1(s + 3, 30), s2(s + 3, 30);
            const auto x = step_default(g, a, a.votes(), strategies, Phase::Late, s1);
            const auto y = step_in_order(g, a.votes(), a.votes(), 3, strategies, Phase::Late, ElectionConfig{}, s2, order);
            CHECK(x == y);
        }
    }
    SUBCASE("assigned mode protects the original party") {
        // Voter 0 was assigned blue but currently votes red, next to two blue voters.
        const auto g = make_graph(4, {{0, 1}, {0, 2}});
        const auto a = make_assignment({"red", "blue"}, {1, 1, 1, 0});
        const std::vector<PartyId> votes{0, 1, 1, 0};
        ElectionConfig cfg;
        VoterStreams s1(1, 4), s2(1, 4);
        CHECK(step(g, votes, a.votes(), 2, StrategyMatrix::constant(4, 1.0), Phase::Early, cfg, s1)[0] == 0);
        cfg.stick_target = StickTarget::Assigned;
        CHECK(step(g, votes, a.votes(), 2, StrategyMatrix::constant(4, 1.0), Phase::Early, cfg, s2)[0] == 1);
    }
    SUBCASE("size mismatch") {
        VoterStreams streams(1, 3);
        const auto a = make_assignment({"red", "blue"}, {0, 1, 1});
        CHECK_THROWS_AS(step_default(Graph(3), a, a.votes(), StrategyMatrix::constant(2, 1.0), Phase::Early, streams),
                        std::invalid_argument);
    }
}

TEST_CASE("run_election") {
    SUBCASE("all red") {
        const auto g = build_caveman(4, 5);
        const auto a = make_assignment({"red"}, std::vector<PartyId>(20, 0));
        const auto out = run_election(g, a, {}, sample_strategies({}, 20, 1), 2);
        CHECK(out.skew(0) == 0.5);
        REQUIRE(out.winner);
        CHECK(*out.winner == 0);
    }
    SUBCASE("stick probability 1 freezes the shares") {
        const auto a = spa(20, {{"red", 13}, {"blue", 7}}, 3);
        const auto g = generate_hrc({4, 5, 0.4, 0.6}, a, 4);
        const auto out = run_election(g, a, {}, StrategyMatrix::constant(20, 1.0), 5);
        CHECK(out.final_shares[0] == 0.65);
        CHECK(out.final_shares[1] == 0.35);
        CHECK(out.winner == PartyId{0});
    }
    SUBCASE("trajectory shape, shares, and determinism") {
        for (Seed s = 0; s < 40; ++s) {
            const auto a = spa(20, {{"red", 8}, {"blue", 7}, {"green", 5}}, s);
            const auto g = generate_hrc({4, 5, 0.4, 0.6}, a, s + 1);
            const auto strategies = sample_strategies({}, 20, s + 2);
            const auto out = run_election(g, a, {}, strategies, s + 3);
            REQUIRE(out.trajectory.size() == 73);
            REQUIRE(out.tick_times.size() == 73);
            CHECK(out.tick_times[0] == 0.0);
            CHECK(out.tick_times[72] == doctest::Approx(72 * 3.3));
            for (const auto& row : out.trajectory) CHECK(std::accumulate(row.begin(), row.end(), 0.0) == doctest::Approx(1.0));
            CHECK(out.final_votes.size() == 20);
            CHECK(out.trajectory.back() == out.final_shares);
            const auto again = run_election(g, a, {}, strategies, s + 3);
            CHECK(again.trajectory == out.trajectory);
            CHECK(again.final_votes == out.final_votes);
            if (out.winner) CHECK(out.final_shares[*out.winner] >= 0.6);
            else for (double sh : out.final_shares) CHECK(sh < 0.6);
        }
    }
    SUBCASE("a party gone from every poll never comes back") {
        for (Seed s = 0; s < 200; ++s) {
            const auto a = spa(20, {{"red", 9}, {"blue", 9}, {"green", 2}}, s);
            const auto g = generate_hrc({4, 5, 0.3, 0.5}, a, s + 1);
            const auto out = run_election(g, a, {}, sample_strategies({}, 20, s + 2), s + 3);
            for (std::size_t p = 0; p < 3; ++p) {
                bool gone = false;
                for (const auto& row : out.trajectory) {
                    if (gone) CHECK(row[p] == 0.0);
                    gone |= row[p] == 0.0;
                }
            }
        }
    }
    SUBCASE("initial majority carries into the outcome on average") {
        double total = 0;
        const int runs = 2000;
        for (int r = 0; r < runs; ++r) {
            const Seed s = derive_seed(77, {static_cast<std::uint64_t>(r)});
            const auto a = spa(20, {{"red", 12}, {"blue", 8}}, derive_seed(s, Stream::Assignment));
            const auto g = generate_hrc({4, 5, 0.4, 0.6}, a, derive_seed(s, Stream::Graph));
            const auto out = run_election(g, a, {}, sample_strategies({}, 20, derive_seed(s, Stream::Strategies)),
                                          derive_seed(s, Stream::Election));
            total += out.skew(0);
        }
        CHECK(total / runs > 0.0);
    }
    SUBCASE("size mismatch") {
        const auto a = make_assignment({"red", "blue"}, {0, 1, 1});
        CHECK_THROWS_AS(run_election(Graph(3), a, {}, StrategyMatrix::constant(4, 1.0), 1), std::invalid_argument);
    }
}
