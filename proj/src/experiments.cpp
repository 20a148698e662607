#include "cavevote/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <istream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace cavevote {

const char* const kRecordsHeader =
    "seed,l,k,p0,h,n_red,n_blue,n_green,ig_red,ig_blue,ig_green,majority,dvs,eg,"
    "final_skew_red,final_skew_blue,final_skew_green,winner";

const std::vector<std::string>& record_parties() {
    static const std::vector<std::string> names{"red", "blue", "green"};
    return names;
}

std::string format_double(double v) {
    if (v == 0.0) return "0";  // also folds -0
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    if (ec != std::errc()) throw std::runtime_error("cannot format number");
    return std::string(buf, end);
}

// CountRule -------------------------------------------------------------------

CountRule CountRule::fixed_counts(std::vector<std::string> parties, std::vector<std::size_t> counts) {
    CountRule r;
    r.kind = Kind::Fixed;
    r.parties = std::move(parties);
    r.fixed = std::move(counts);
    return r;
}

CountRule CountRule::lead_range(std::vector<std::string> parties, std::size_t lo, std::size_t hi) {
    CountRule r;
    r.kind = Kind::LeadRange;
    r.parties = std::move(parties);
    r.lead_min = lo;
    r.lead_max = hi;
    return r;
}

CountRule CountRule::composition(std::vector<std::string> parties, std::size_t min_per_party) {
    CountRule r;
    r.kind = Kind::Composition;
    r.parties = std::move(parties);
    r.min_per_party = min_per_party;
    return r;
}

void CountRule::validate(std::size_t node_count) const {
    if (parties.size() < 2) throw std::invalid_argument("count rule needs at least two parties");
    // Parties must be an ordered subset of red, blue, green starting with red,
    // so records CSV columns stay unambiguous.
    const auto& canon = record_parties();
    if (parties.front() != "red") throw std::invalid_argument("the first party must be 'red'");
    std::size_t pos = 0;
    for (const auto& p : parties) {
        auto it = std::find(canon.begin() + static_cast<std::ptrdiff_t>(pos), canon.end(), p);
        if (it == canon.end()) throw std::invalid_argument("party '" + p + "' must be one of red, blue, green in that order");
        pos = static_cast<std::size_t>(it - canon.begin()) + 1;
    }
    const std::size_t rest = parties.size() - 1;
    switch (kind) {
        case Kind::Fixed:
            if (fixed.size() != parties.size()) throw std::invalid_argument("one fixed count per party required");
            if (std::accumulate(fixed.begin(), fixed.end(), std::size_t{0}) != node_count)
                throw std::invalid_argument("fixed counts must sum to the node count");
            if (std::find(fixed.begin(), fixed.end(), std::size_t{0}) != fixed.end())
                throw std::invalid_argument("fixed counts must be positive");
            break;
        case Kind::LeadRange:
            if (lead_min < 1 || lead_min > lead_max || lead_max + rest > node_count)
                throw std::invalid_argument("lead range must satisfy 1 <= min <= max <= N - (parties - 1)");
            break;
        case Kind::Composition:
            if (min_per_party < 1 || min_per_party * parties.size() > node_count)
                throw std::invalid_argument("composition minimum is infeasible for this node count");
            break;
    }
}

std::vector<PartyCount> CountRule::sample(std::size_t node_count, Seed seed) const {
    std::vector<std::size_t> counts(parties.size(), 0);
    Rng rng(seed);
    switch (kind) {
        case Kind::Fixed:
            counts = fixed;
            break;
        case Kind::LeadRange: {
            counts[0] = lead_min + static_cast<std::size_t>(rng.index(lead_max - lead_min + 1));
            const std::size_t rest = node_count - counts[0];
            const std::size_t others = parties.size() - 1;
            for (std::size_t i = 1; i < parties.size(); ++i) counts[i] = rest / others + (i - 1 < rest % others ? 1 : 0);
            break;
        }
        case Kind::Composition: {
            // Stars and bars over the slack above the per-party minimum.
            const std::size_t slack = node_count - min_per_party * parties.size();
            std::vector<std::uint8_t> tokens(slack + parties.size() - 1, 0);
            std::fill(tokens.begin() + static_cast<std::ptrdiff_t>(slack), tokens.end(), 1);
            rng.shuffle(tokens);
            std::size_t bin = 0;
            for (auto t : tokens) {
                if (t) ++bin;
                else ++counts[bin];
            }
            for (auto& c : counts) c += min_per_party;
            break;
        }
    }
    std::vector<PartyCount> out;
    for (std::size_t i = 0; i < parties.size(); ++i) out.push_back({parties[i], counts[i]});
    return out;
}

std::string CountRule::describe() const {
    std::ostringstream s;
    for (std::size_t i = 0; i < parties.size(); ++i) s << (i ? "," : "") << parties[i];
    switch (kind) {
        case Kind::Fixed:
            s << " fixed";
            for (auto c : fixed) s << ' ' << c;
            break;
        case Kind::LeadRange: s << " lead " << lead_min << ".." << lead_max; break;
        case Kind::Composition: s << " composition min " << min_per_party; break;
    }
    return s.str();
}

// Sweep ------------------------------------------------------------------------

void SweepConfig::validate() const {
    if (p0_grid.empty() || h_grid.empty() || count_rules.empty()) throw std::invalid_argument("sweep grids must be nonempty");
    if (elections_per_cell < 1) throw std::invalid_argument("need at least one election per cell");
    if (clique_count < 1 || clique_size < 1) throw std::invalid_argument("graph shape needs l >= 1 and k >= 1");
    for (double p : p0_grid) {
        if (!(p >= 0 && p <= 1)) throw std::invalid_argument("p0 values must lie in [0, 1]");
    }
    for (double h : h_grid) {
        if (!(h >= 0 && h <= 1)) throw std::invalid_argument("h values must lie in [0, 1]");
    }
    for (const auto& r : count_rules) r.validate(node_count());
    election.validate();
}

SweepCell sweep_cell(const SweepConfig& config, std::size_t index) {
    if (index >= config.cell_count()) throw std::out_of_range("cell index out of range");
    const std::size_t rules = config.count_rules.size();
    const std::size_t hs = config.h_grid.size();
    SweepCell c;
    c.index = index;
    c.rule = &config.count_rules[index % rules];
    c.h = config.h_grid[(index / rules) % hs];
    c.p0 = config.p0_grid[index / (rules * hs)];
    return c;
}

std::optional<std::size_t> ElectionRecord::party_index(const std::string& name) const {
    auto it = std::find(parties.begin(), parties.end(), name);
    if (it == parties.end()) return std::nullopt;
    return static_cast<std::size_t>(it - parties.begin());
}

ElectionRecord run_single(const SweepConfig& config, std::size_t cell_index, std::size_t repetition) {
    const SweepCell cell = sweep_cell(config, cell_index);
    const Seed child = derive_seed(config.seed, {cell_index, repetition});
    const std::size_t n = config.node_count();
    try {
        const auto counts = cell.rule->sample(n, derive_seed(child, Stream::Counts));
        const auto assignment = assign_parties_spa(n, counts, derive_seed(child, Stream::Assignment));
        const HrcParams params{config.clique_count, config.clique_size, cell.p0, cell.h};
        const Graph graph = generate_hrc(params, assignment, derive_seed(child, Stream::Graph));

        ElectionRecord rec;
        rec.cell = cell_index;
        rec.repetition = repetition;
        rec.seed = child;
        rec.l = config.clique_count;
        rec.k = config.clique_size;
        rec.p0 = cell.p0;
        rec.h = cell.h;
        rec.parties = assignment.parties();
        rec.counts = assignment.counts();
        rec.influence_gap = influence_gaps<double>(graph, assignment, config.assortment);
        rec.majority = initial_majority(assignment, 0);
        rec.dvs = deterministic_voter_skew(graph, assignment, 0);
        if (assignment.party_count() == 2) rec.efficiency_gap = efficiency_gap(graph, assignment, 0);

        const auto strategies = sample_strategies(config.behavior, n, derive_seed(child, Stream::Strategies));
        const auto outcome = run_election(graph, assignment, config.election, strategies, derive_seed(child, Stream::Election));
        for (PartyId p = 0; p < assignment.party_count(); ++p) rec.final_skew.push_back(outcome.skew(p));
        if (outcome.winner) rec.winner = assignment.party_name(*outcome.winner);
        return rec;
    } catch (const std::exception& e) {
        std::ostringstream msg;
        msg << "cell " << cell_index << " (p0=" << cell.p0 << ", h=" << cell.h << ", " << cell.rule->describe()
            << ") repetition " << repetition << ": " << e.what();
        throw std::runtime_error(msg.str());
    }
}

void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& fn) {
    workers = std::max<std::size_t>(1, std::min(workers, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::size_t failed_at = count;
    std::mutex guard;
    {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        fn(i);
                    } catch (...) {
                        std::lock_guard lock(guard);
                        // Report the lowest failing index so errors are reproducible.
                        if (i < failed_at) {
                            failed_at = i;
                            failure = std::current_exception();
                        }
                    }
                }
            });
        }
    }
    if (failure) std::rethrow_exception(failure);
}

std::vector<ElectionRecord> run_batch(const SweepConfig& config) {
    config.validate();
    const std::size_t reps = config.elections_per_cell;
    std::vector<ElectionRecord> records(config.cell_count() * reps);
    parallel_for(records.size(), config.workers, [&](std::size_t i) { records[i] = run_single(config, i / reps, i % reps); });
    return records;
}

// Records CSV --------------------------------------------------------------------

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream s(line);
    while (std::getline(s, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s) {
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) throw std::invalid_argument("bad number '" + s + "'");
    return v;
}

std::optional<double> parse_optional(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return parse_double(s);
}

}  // namespace

void write_records_csv(std::ostream& out, const std::vector<ElectionRecord>& records) {
    out << kRecordsHeader << '\n';
    const auto& canon = record_parties();
    for (const auto& r : records) {
        out << r.seed << ',' << r.l << ',' << r.k << ',' << format_double(r.p0) << ',' << format_double(r.h);
        auto per_party = [&](auto&& field) {
            for (const auto& name : canon) {
                out << ',';
                if (auto i = r.party_index(name)) out << field(*i);
            }
        };
        per_party([&](std::size_t i) { return std::to_string(r.counts[i]); });
        per_party([&](std::size_t i) { return format_double(r.influence_gap[i]); });
        out << ',' << format_double(r.majority) << ',' << format_double(r.dvs) << ',';
        if (r.efficiency_gap) out << format_double(*r.efficiency_gap);
        per_party([&](std::size_t i) { return format_double(r.final_skew[i]); });
        out << ',' << r.winner.value_or("deadlock") << '\n';
    }
}

std::vector<ElectionRecord> read_records_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kRecordsHeader) throw std::invalid_argument("records CSV header mismatch");
    std::vector<ElectionRecord> out;
    std::size_t lineno = 1;
    const auto& canon = record_parties();
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != 18) throw std::invalid_argument("records CSV line " + std::to_string(lineno) + ": expected 18 fields");
        try {
            ElectionRecord r;
            r.repetition = out.size();
            r.seed = std::stoull(f[0]);
            r.l = std::stoull(f[1]);
            r.k = std::stoull(f[2]);
            r.p0 = parse_double(f[3]);
            r.h = parse_double(f[4]);
            for (std::size_t i = 0; i < 3; ++i) {
                if (f[5 + i].empty()) continue;
                r.parties.push_back(canon[i]);
                r.counts.push_back(std::stoull(f[5 + i]));
                r.influence_gap.push_back(parse_double(f[8 + i]));
                r.final_skew.push_back(parse_double(f[14 + i]));
            }
            r.majority = parse_double(f[11]);
            r.dvs = parse_double(f[12]);
            r.efficiency_gap = parse_optional(f[13]);
            if (f[17] != "deadlock") r.winner = f[17];
            out.push_back(std::move(r));
        } catch (const std::exception& e) {
            throw std::invalid_argument("records CSV line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return out;
}

// Surface ------------------------------------------------------------------------

std::vector<SurfacePoint> surface_mean_abs_gap(const std::vector<double>& h_grid, const std::vector<double>& p0_grid,
                                               std::size_t samples_per_point, std::size_t clique_count,
                                               std::size_t clique_size, Seed seed, std::size_t workers) {
    if (samples_per_point < 1) throw std::invalid_argument("need at least one sample per point");
    if (h_grid.empty() || p0_grid.empty()) throw std::invalid_argument("surface grids must be nonempty");
    const std::size_t n = clique_count * clique_size;
    if (n % 2 != 0) throw std::invalid_argument("equal representation needs an even node count");
    const std::vector<PartyCount> counts{{"red", n / 2}, {"blue", n / 2}};

    const std::size_t points = p0_grid.size() * h_grid.size();
    std::vector<double> gaps(points * samples_per_point);
    parallel_for(gaps.size(), workers, [&](std::size_t i) {
        const std::size_t point = i / samples_per_point, sample = i % samples_per_point;
        const HrcParams params{clique_count, clique_size, p0_grid[point / h_grid.size()], h_grid[point % h_grid.size()]};
        // Sample s uses the same seeds at every grid point (common random numbers),
        // so neighbouring points differ only through p0 and h.
        const Seed child = derive_seed(seed, {sample});
        const auto assignment = assign_parties_spa(n, counts, derive_seed(child, Stream::Assignment));
        const Graph g = generate_hrc(params, assignment, derive_seed(child, Stream::Graph));
        const auto a = party_assortments<double>(g, assignment);
        // Gap toward whichever party is better placed.
        gaps[i] = std::abs(a[0] - a[1]);
    });

    std::vector<SurfacePoint> out;
    for (std::size_t point = 0; point < points; ++point) {
        const auto first = gaps.begin() + static_cast<std::ptrdiff_t>(point * samples_per_point);
        const auto last = first + static_cast<std::ptrdiff_t>(samples_per_point);
        const double m = static_cast<double>(samples_per_point);
        const double mean = std::accumulate(first, last, 0.0) / m;
        double ss = 0;
        for (auto it = first; it != last; ++it) ss += (*it - mean) * (*it - mean);
        const double sd = samples_per_point > 1 ? std::sqrt(ss / (m - 1)) : 0.0;
        out.push_back({p0_grid[point / h_grid.size()], h_grid[point % h_grid.size()], mean, samples_per_point,
                       sd / std::sqrt(m)});
    }
    return out;
}

void write_surface_csv(std::ostream& out, const std::vector<SurfacePoint>& points) {
    out << "p0,h,mean_abs_ig,samples,std_error\n";
    for (const auto& p : points) {
        out << format_double(p.p0) << ',' << format_double(p.h) << ',' << format_double(p.mean_abs_gap) << ','
            << p.samples << ',' << format_double(p.standard_error) << '\n';
    }
}

// PCC curves ------------------------------------------------------------------------

namespace {

std::optional<double> metric_value(const ElectionRecord& r, const std::string& metric, std::size_t party) {
    if (metric == "votes") return static_cast<double>(r.counts[party]);
    if (metric == "majority") {
        if (r.parties.size() == 2) return static_cast<double>(r.counts[party]) - static_cast<double>(r.node_count()) / 2.0;
        return static_cast<double>(r.counts[party]);
    }
    if (metric == "ig") return r.influence_gap[party];
    if (metric == "dvs") return party == 0 && r.parties.size() == 2 ? std::optional(r.dvs) : std::nullopt;
    if (metric == "eg") return party == 0 ? r.efficiency_gap : std::nullopt;
    throw std::invalid_argument("unknown metric '" + metric + "'");
}

}  // namespace

std::vector<PccEntry> pcc_curves(const std::vector<ElectionRecord>& records, const std::vector<std::string>& metrics,
                                 const std::vector<std::string>& parties) {
    std::map<std::pair<double, double>, std::vector<const ElectionRecord*>> groups;
    for (const auto& r : records) groups[{r.p0, r.h}].push_back(&r);

    std::vector<PccEntry> out;
    for (const auto& [key, group] : groups) {
        for (const auto& party : parties) {
            for (const auto& metric : metrics) {
                std::vector<double> xs, ys;
                for (const auto* r : group) {
                    const auto idx = r->party_index(party);
                    if (!idx) continue;
                    const auto x = metric_value(*r, metric, *idx);
                    if (!x) continue;
                    xs.push_back(*x);
                    ys.push_back(r->final_skew[*idx]);
                }
                if (xs.empty()) continue;  // metric not defined for this party
                PccEntry e{key.first, key.second, metric, party, xs.size(), std::nullopt, ""};
                if (xs.size() < 2) {
                    e.note = "fewer than two records";
                } else {
                    try {
                        e.pcc = pearson(xs, ys);
                    } catch (const UndefinedCorrelation&) {
                        e.note = "constant series";
                    }
                }
                out.push_back(std::move(e));
            }
        }
    }
    return out;
}

void write_pcc_csv(std::ostream& out, const std::vector<PccEntry>& entries) {
    out << "p0,h,party,metric,samples,pcc,note\n";
    for (const auto& e : entries) {
        out << format_double(e.p0) << ',' << format_double(e.h) << ',' << e.party << ',' << e.metric << ','
            << e.samples << ',' << (e.pcc ? format_double(*e.pcc) : "") << ',' << e.note << '\n';
    }
}

// Regression ---------------------------------------------------------------------------

RegressionSuite regression_suite(const std::vector<ElectionRecord>& records, double train_fraction, Seed seed) {
    std::vector<double> majority, gap, target;
    for (const auto& r : records) {
        if (r.parties.size() != 2) continue;
        majority.push_back(r.majority);
        gap.push_back(r.influence_gap[0]);
        target.push_back(r.final_skew[0]);
    }
    if (target.empty()) throw std::invalid_argument("regression needs two-party records");
    RegressionSuite s;
    s.rows = target.size();
    s.majority = ols_fit({majority}, target, train_fraction, seed);
    s.gap = ols_fit({gap}, target, train_fraction, seed);
    s.joint = ols_fit({majority, gap}, target, train_fraction, seed);
    return s;
}

}  // namespace cavevote
