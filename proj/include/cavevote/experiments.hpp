#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cavevote/dynamics.hpp"
#include "cavevote/graph.hpp"
#include "cavevote/metrics.hpp"
#include "cavevote/rng.hpp"
#include "cavevote/stats.hpp"

namespace cavevote {

/// How the per-party voter counts of one election are chosen.
struct CountRule {
    enum class Kind {
        Fixed,        // `fixed` verbatim
        LeadRange,    // first party uniform in [lead_min, lead_max]; the rest split evenly
        Composition,  // uniform over compositions of N with every party >= min_per_party
    };

    Kind kind = Kind::LeadRange;
    std::vector<std::string> parties{"red", "blue"};
    std::vector<std::size_t> fixed;
    std::size_t lead_min = 10;
    std::size_t lead_max = 16;
    std::size_t min_per_party = 1;

    static CountRule fixed_counts(std::vector<std::string> parties, std::vector<std::size_t> counts);
    static CountRule lead_range(std::vector<std::string> parties, std::size_t lo, std::size_t hi);
    static CountRule composition(std::vector<std::string> parties, std::size_t min_per_party);

    void validate(std::size_t node_count) const;
    std::vector<PartyCount> sample(std::size_t node_count, Seed seed) const;
    std::string describe() const;
};

struct SweepConfig {
    std::vector<double> p0_grid{0.0, 0.4, 1.0};
    std::vector<double> h_grid{0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
    std::vector<CountRule> count_rules{CountRule{}};
    std::size_t elections_per_cell = 2000;
    std::size_t clique_count = 4;  // l
    std::size_t clique_size = 5;   // k
    ElectionConfig election;
    BehaviorDistribution behavior;
    AssortmentConvention assortment = AssortmentConvention::DominantNegative;
    Seed seed = 0;
    std::size_t workers = 1;

    void validate() const;
    std::size_t node_count() const noexcept { return clique_count * clique_size; }
    /// Cells enumerate p0 (outer), then h, then count rule (inner).
    std::size_t cell_count() const noexcept { return p0_grid.size() * h_grid.size() * count_rules.size(); }
};

struct SweepCell {
    std::size_t index = 0;
    double p0 = 0;
    double h = 0;
    const CountRule* rule = nullptr;
};

/// One simulated election, with every metric measured on the initial state.
struct ElectionRecord {
    std::size_t cell = 0;
    std::size_t repetition = 0;
    Seed seed = 0;
    std::size_t l = 0;
    std::size_t k = 0;
    double p0 = 0;
    double h = 0;
    std::vector<std::string> parties;
    std::vector<std::size_t> counts;
    std::vector<double> influence_gap;
    double majority = 0;
    double dvs = 0;
    std::optional<double> efficiency_gap;
    std::vector<double> final_skew;
    std::optional<std::string> winner;

    std::size_t node_count() const noexcept { return l * k; }
    /// Index of the named party, if present in this election.
    std::optional<std::size_t> party_index(const std::string& name) const;
};

SweepCell sweep_cell(const SweepConfig& config, std::size_t index);

/// Runs one election of the sweep. Pure function of (config, cell, repetition).
ElectionRecord run_single(const SweepConfig& config, std::size_t cell, std::size_t repetition);

/// All cells x repetitions, in (cell, repetition) order, for any worker count.
std::vector<ElectionRecord> run_batch(const SweepConfig& config);

/// Exact header of the records CSV.
extern const char* const kRecordsHeader;

/// Party names that may appear in records CSV columns.
const std::vector<std::string>& record_parties();

void write_records_csv(std::ostream& out, const std::vector<ElectionRecord>& records);
std::vector<ElectionRecord> read_records_csv(std::istream& in);

/// Shortest round-trip decimal text for a double.
std::string format_double(double v);

// Analyses --------------------------------------------------------------------

struct SurfacePoint {
    double p0 = 0;
    double h = 0;
    double mean_abs_gap = 0;
    std::size_t samples = 0;
    double standard_error = 0;
};

/// Mean |influence gap| over equal-representation hRC graphs, per (p0, h).
/// Points are ordered p0 (outer), then h.
std::vector<SurfacePoint> surface_mean_abs_gap(const std::vector<double>& h_grid, const std::vector<double>& p0_grid,
                                               std::size_t samples_per_point, std::size_t clique_count,
                                               std::size_t clique_size, Seed seed, std::size_t workers = 1);

void write_surface_csv(std::ostream& out, const std::vector<SurfacePoint>& points);

struct PccEntry {
    double p0 = 0;
    double h = 0;
    std::string metric;
    std::string party;
    std::size_t samples = 0;
    std::optional<double> pcc;  // empty when the group is degenerate
    std::string note;
};

/// Pearson correlation between each initial metric and the party's final
/// skew, per (p0, h) group. Metrics: votes, majority, ig, dvs, eg. dvs and eg
/// are only reported for the first party of two-party records.
std::vector<PccEntry> pcc_curves(const std::vector<ElectionRecord>& records, const std::vector<std::string>& metrics,
                                 const std::vector<std::string>& parties);

void write_pcc_csv(std::ostream& out, const std::vector<PccEntry>& entries);

/// Majority-only, IG-only and joint linear models of the first party's final
/// skew, all fitted on the same seeded split.
struct RegressionSuite {
    RegressionResult majority;
    RegressionResult gap;
    RegressionResult joint;
    std::size_t rows = 0;
};

RegressionSuite regression_suite(const std::vector<ElectionRecord>& records, double train_fraction, Seed seed);

/// Evaluates `fn(i)` for i in [0, count) on `workers` threads.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn);

}  // namespace cavevote
