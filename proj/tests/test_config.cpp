#include <doctest.h>

#include <sstream>

#include "cavevote/config.hpp"

using namespace cavevote;

TEST_CASE("settings parser") {
    std::istringstream in(R"(# sweep settings
seed = 42
p0 = [0, 0.4, 1]   # rewire grid
counts = "lead 10 16"
parties = ["red", "blue"]
[ignored.table]
stick_target = 'assigned'
)");
    const auto s = parse_settings(in);
    CHECK(s.at("seed") == std::vector<std::string>{"42"});
    CHECK(s.at("p0") == std::vector<std::string>{"0", "0.4", "1"});
    CHECK(s.at("counts") == std::vector<std::string>{"lead 10 16"});
    CHECK(s.at("parties") == std::vector<std::string>{"red", "blue"});
    CHECK(s.at("stick_target") == std::vector<std::string>{"assigned"});

    std::istringstream bad("seed 42\n");
    CHECK_THROWS_AS(parse_settings(bad), std::invalid_argument);
    std::istringstream open_array("p0 = [0, 1\n");
    CHECK_THROWS_AS(parse_settings(open_array), std::invalid_argument);
}

TEST_CASE("settings apply to a sweep config") {
    SweepConfig c;
    apply_settings(c, {{"seed", {"9"}},
                       {"l", {"5"}},
                       {"k", {"4"}},
                       {"p0", {"0.5"}},
                       {"h", {"0.1", "0.9"}},
                       {"elections", {"7"}},
                       {"V", {"0.7"}},
                       {"concentration", {"25"}},
                       {"stick_target", {"assigned"}},
                       {"assortment", {"complement-negative"}},
                       {"workers", {"3"}}});
    CHECK(c.seed == 9);
    CHECK(c.node_count() == 20);
    CHECK(c.p0_grid == std::vector<double>{0.5});
    CHECK(c.h_grid == std::vector<double>{0.1, 0.9});
    CHECK(c.elections_per_cell == 7);
    CHECK(c.election.victory_threshold == 0.7);
    CHECK(c.behavior.concentration == 25);
    CHECK(c.election.stick_target == StickTarget::Assigned);
    CHECK(c.assortment == AssortmentConvention::ComplementNegative);
    CHECK(c.workers == 3);
    CHECK(c.cell_count() == 2);

    const auto text = describe_settings(c);
    CHECK(text.find("total_elections = 14") != std::string::npos);
    CHECK(text.find("stick_target = \"assigned\"") != std::string::npos);
}

TEST_CASE("count rules and parties") {
    SweepConfig c;
    apply_settings(c, {{"parties", {"red", "blue", "green"}}, {"counts", {"composition 4", "fixed 10 5 5"}}});
    REQUIRE(c.count_rules.size() == 2);
    CHECK(c.count_rules[0].kind == CountRule::Kind::Composition);
    CHECK(c.count_rules[0].min_per_party == 4);
    CHECK(c.count_rules[1].fixed == std::vector<std::size_t>{10, 5, 5});
    CHECK(c.count_rules[1].parties.size() == 3);
    CHECK(c.cell_count() == 3 * 11 * 2);

    CHECK(parse_count_rule("lead 10 16", "red,blue").lead_max == 16);
    CHECK_THROWS_AS(parse_count_rule("lead 10", "red,blue"), std::invalid_argument);
    CHECK_THROWS_AS(parse_count_rule("uniform", "red,blue"), std::invalid_argument);
    CHECK_THROWS_AS(parse_count_rule("fixed 10 x", "red,blue"), std::invalid_argument);
}

TEST_CASE("bad settings are rejected") {
    SweepConfig c;
    CHECK_THROWS_AS(apply_settings(c, {{"colour", {"red"}}}), std::invalid_argument);
    CHECK_THROWS_AS(apply_settings(c, {{"seed", {"-1"}}}), std::invalid_argument);
    CHECK_THROWS_AS(apply_settings(c, {{"V", {"high"}}}), std::invalid_argument);
    CHECK_THROWS_AS(apply_settings(c, {{"seed", {"1", "2"}}}), std::invalid_argument);
    CHECK_THROWS_AS(apply_settings(c, {{"stick_target", {"random"}}}), std::invalid_argument);
}
