// cavevote: command-line front end for graph generation, metrics, single
// elections, batch sweeps and their analyses.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cavevote/config.hpp"
#include "cavevote/dynamics.hpp"
#include "cavevote/experiments.hpp"
#include "cavevote/graph.hpp"
#include "cavevote/io.hpp"
#include "cavevote/metrics.hpp"

using json = nlohmann::ordered_json;
using namespace cavevote;

namespace {

// "red=10,blue=10" -> party counts
std::vector<PartyCount> parse_party_counts(const std::string& text) {
    std::vector<PartyCount> out;
    std::istringstream s(text);
    std::string item;
    while (std::getline(s, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("party counts look like red=10,blue=10");
        out.push_back({item.substr(0, eq), std::stoul(item.substr(eq + 1))});
    }
    if (out.empty()) throw std::invalid_argument("no party counts given");
    return out;
}

struct GeneratorOptions {
    std::string kind = "hrc";
    std::size_t l = 4;
    std::size_t k = 5;
    double p0 = 0.0;
    double h = 0.5;
    std::string counts = "red=10,blue=10";
    Seed seed = 0;

    void add(CLI::App* app) {
        app->add_option("--kind", kind, "caveman, relaxed or hrc")->check(CLI::IsMember({"caveman", "relaxed", "hrc"}));
        app->add_option("-l,--cliques", l, "number of cliques");
        app->add_option("-k,--clique-size", k, "clique size");
        app->add_option("--p0", p0, "rewire probability (relaxed: p)")->check(CLI::Range(0.0, 1.0));
        app->add_option("--h", h, "homophily factor")->check(CLI::Range(0.0, 1.0));
        app->add_option("--counts", counts, "party counts, e.g. red=12,blue=8");
    }

    std::pair<Graph, PartyAssignment> build() const {
        const auto pc = parse_party_counts(counts);
        auto assignment = assign_parties_spa(l * k, pc, derive_seed(seed, Stream::Assignment));
        if (kind == "caveman") return {build_caveman(l, k), std::move(assignment)};
        if (kind == "relaxed")
            return {rewire_relaxed(build_caveman(l, k), p0, derive_seed(seed, Stream::Graph)), std::move(assignment)};
        Graph g = generate_hrc({l, k, p0, h}, assignment, derive_seed(seed, Stream::Graph));
        return {std::move(g), std::move(assignment)};
    }
};

json metrics_json(const Graph& g, const PartyAssignment& a, PartyId focal, AssortmentConvention ac, GapConvention gc) {
    const auto report = metric_report(g, a, focal, ac, gc);
    const auto assort = party_assortments<double>(g, a, ac);
    json j;
    j["party"] = a.party_name(focal);
    j["assortment_convention"] = std::string(to_string(ac));
    j["gap_convention"] = std::string(to_string(gc));
    j["nodes"] = g.node_count();
    j["edges"] = g.edge_count();
    for (PartyId p = 0; p < a.party_count(); ++p) {
        j["counts"][a.party_name(p)] = a.count(p);
        j["assortment"][a.party_name(p)] = assort[p];
        j["influence_gap"][a.party_name(p)] = report.influence_gap[p];
    }
    j["majority"] = report.majority;
    j["dvs"] = report.dvs;
    j["efficiency_gap"] = report.efficiency_gap ? json(*report.efficiency_gap) : json(nullptr);
    return j;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Community-structured voter networks: generation, influence-gap metrics and election dynamics"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "Print this help message and exit");  // -h is taken by the homophily option

    // generate ---------------------------------------------------------------
    auto* gen = app.add_subcommand("generate", "Generate a caveman, relaxed-caveman or hRC graph with a party assignment");
    GeneratorOptions gen_opts;
    gen_opts.add(gen);
    gen->add_option("--seed", gen_opts.seed, "master seed")->required();
    std::string gen_graph_out = "graph.txt", gen_assign_out = "assignment.txt";
    gen->add_option("--graph-out", gen_graph_out, "edge-list output path");
    gen->add_option("--assignment-out", gen_assign_out, "assignment output path");

    // metrics ----------------------------------------------------------------
    auto* met = app.add_subcommand("metrics", "Report influence gaps and benchmark metrics for one graph");
    std::string met_graph, met_assign, met_party, met_aconv = "dominant-negative", met_gconv = "vs-most-influential",
                                              met_format = "json";
    met->add_option("--graph", met_graph, "edge-list file")->required();
    met->add_option("--assignment", met_assign, "assignment file")->required();
    met->add_option("--party", met_party, "focal party for majority/dVS/EG (default: first party)");
    met->add_option("--assortment", met_aconv)->check(CLI::IsMember({"dominant-negative", "complement-negative"}));
    met->add_option("--gap", met_gconv)->check(CLI::IsMember({"vs-most-influential", "vs-plurality-runner-up"}));
    met->add_option("--format", met_format)->check(CLI::IsMember({"json", "csv"}));

    // simulate ---------------------------------------------------------------
    auto* sim = app.add_subcommand("simulate", "Run one election");
    GeneratorOptions sim_gen;
    sim_gen.add(sim);
    std::string sim_graph, sim_assign, sim_strategies, sim_trajectory, sim_party, sim_stick = "current";
    Seed sim_seed = 0;
    ElectionConfig sim_cfg;
    double sim_concentration = BehaviorDistribution{}.concentration;
    sim->add_option("--graph", sim_graph, "edge-list file (otherwise generated)");
    sim->add_option("--assignment", sim_assign, "assignment file (with --graph)");
    sim->add_option("--seed", sim_seed, "master seed")->required();
    sim->add_option("--V", sim_cfg.victory_threshold, "victory threshold");
    sim->add_option("--duration", sim_cfg.duration, "election length in seconds");
    sim->add_option("--cutoff", sim_cfg.early_cutoff, "end of the early phase in seconds");
    sim->add_option("--tick", sim_cfg.tick, "seconds between synchronous updates");
    sim->add_option("--strategies", sim_strategies, "empirical strategy samples (state,phase,value CSV)");
    sim->add_option("--concentration", sim_concentration, "Beta concentration of the surrogate strategies");
    sim->add_option("--stick-target", sim_stick)->check(CLI::IsMember({"current", "assigned"}));
    sim->add_option("--party", sim_party, "party for the reported skew (default: first party)");
    sim->add_option("--trajectory", sim_trajectory, "write per-tick vote shares to this CSV");

    // sweep --------------------------------------------------------------------
    auto* swp = app.add_subcommand("sweep", "Run a batch of elections over a (p0, h) grid and write records CSV");
    std::string swp_config, swp_out = "records.csv", swp_meta, swp_parties, swp_stick;
    std::vector<std::string> swp_counts;
    std::optional<Seed> swp_seed;
    std::optional<std::size_t> swp_l, swp_k, swp_elections, swp_workers;
    std::vector<double> swp_p0, swp_h;
    std::optional<double> swp_v, swp_concentration;
    std::string swp_strategies;
    swp->add_option("--config", swp_config, "flat key = value settings file");
    swp->add_option("--seed", swp_seed, "master seed (required here or in the config)");
    swp->add_option("--p0", swp_p0, "rewire probabilities")->delimiter(',');
    swp->add_option("--h", swp_h, "homophily factors")->delimiter(',');
    swp->add_option("-l,--cliques", swp_l);
    swp->add_option("-k,--clique-size", swp_k);
    swp->add_option("--elections", swp_elections, "elections per cell");
    swp->add_option("--parties", swp_parties, "comma-separated parties, e.g. red,blue,green");
    swp->add_option("--counts", swp_counts, "count rule(s): 'lead MIN MAX', 'fixed C...', 'composition MIN'");
    swp->add_option("--V", swp_v, "victory threshold");
    swp->add_option("--concentration", swp_concentration);
    swp->add_option("--strategies", swp_strategies, "empirical strategy samples CSV");
    swp->add_option("--stick-target", swp_stick)->check(CLI::IsMember({"current", "assigned"}));
    swp->add_option("--workers", swp_workers, "worker threads");
    swp->add_option("-o,--out", swp_out, "records CSV path");
    swp->add_option("--meta", swp_meta, "write the resolved settings to this file");

    // surface ------------------------------------------------------------------
    auto* srf = app.add_subcommand("surface", "Mean |influence gap| over a (p0, h) grid at equal representation");
    std::vector<double> srf_p0{0, 0.25, 0.5, 0.75, 1}, srf_h{0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1};
    std::size_t srf_samples = 300, srf_l = 10, srf_k = 10, srf_workers = 1;
    Seed srf_seed = 0;
    std::string srf_out = "surface.csv";
    srf->add_option("--p0", srf_p0)->delimiter(',');
    srf->add_option("--h", srf_h)->delimiter(',');
    srf->add_option("--samples", srf_samples, "graphs per grid point");
    srf->add_option("-l,--cliques", srf_l);
    srf->add_option("-k,--clique-size", srf_k);
    srf->add_option("--seed", srf_seed)->required();
    srf->add_option("--workers", srf_workers);
    srf->add_option("-o,--out", srf_out);

    // regress ------------------------------------------------------------------
    auto* reg = app.add_subcommand("regress", "Fit majority / IG / joint linear models to records CSV");
    std::string reg_records, reg_out;
    double reg_fraction = 0.7;
    Seed reg_seed = 0;
    reg->add_option("--records", reg_records)->required();
    reg->add_option("--train-fraction", reg_fraction)->check(CLI::Range(0.0, 1.0));
    reg->add_option("--seed", reg_seed, "seed of the train/test split");
    reg->add_option("-o,--out", reg_out, "JSON path (default stdout)");

    // pcc ----------------------------------------------------------------------
    auto* pcc = app.add_subcommand("pcc", "Per-(p0, h) Pearson correlation of initial metrics with final skew");
    std::string pcc_records, pcc_out;
    std::vector<std::string> pcc_metrics{"majority", "ig", "dvs", "eg"}, pcc_parties{"red"};
    pcc->add_option("--records", pcc_records)->required();
    pcc->add_option("--metrics", pcc_metrics)->delimiter(',');
    pcc->add_option("--parties", pcc_parties)->delimiter(',');
    pcc->add_option("-o,--out", pcc_out, "CSV path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed()) {
            auto [g, a] = gen_opts.build();
            save_graph(gen_graph_out, g);
            save_assignment(gen_assign_out, a);
            std::cerr << "wrote " << g.node_count() << " nodes, " << g.edge_count() << " edges\n";
        } else if (met->parsed()) {
            const auto g = load_graph(met_graph);
            const auto a = load_assignment(met_assign);
            if (g.node_count() != a.node_count()) throw std::invalid_argument("graph and assignment sizes differ");
            const PartyId focal = met_party.empty() ? 0 : a.index_of(met_party);
            const auto j = metrics_json(g, a, focal, parse_assortment_convention(met_aconv), parse_gap_convention(met_gconv));
            if (met_format == "json") {
                std::cout << j.dump(2) << '\n';
            } else {
                std::cout << "metric,party,value\n";
                for (const auto& [party, values] : j["influence_gap"].items()) {
                    for (const auto& v : values) std::cout << "influence_gap," << party << ',' << format_double(v.get<double>()) << '\n';
                }
                for (const auto& [party, v] : j["assortment"].items())
                    std::cout << "assortment," << party << ',' << format_double(v.get<double>()) << '\n';
                std::cout << "majority," << j["party"].get<std::string>() << ',' << format_double(j["majority"].get<double>()) << '\n';
                std::cout << "dvs," << j["party"].get<std::string>() << ',' << format_double(j["dvs"].get<double>()) << '\n';
                std::cout << "efficiency_gap," << j["party"].get<std::string>() << ','
                          << (j["efficiency_gap"].is_null() ? "" : format_double(j["efficiency_gap"].get<double>())) << '\n';
            }
        } else if (sim->parsed()) {
            Graph g;
            PartyAssignment a;
            if (!sim_graph.empty()) {
                if (sim_assign.empty()) throw std::invalid_argument("--graph needs --assignment");
                g = load_graph(sim_graph);
                a = load_assignment(sim_assign);
            } else {
                sim_gen.seed = sim_seed;
                std::tie(g, a) = sim_gen.build();
            }
            sim_cfg.stick_target = sim_stick == "current" ? StickTarget::Current : StickTarget::Assigned;
            BehaviorDistribution dist = sim_strategies.empty() ? BehaviorDistribution{} : BehaviorDistribution::from_samples_csv(sim_strategies);
            dist.concentration = sim_concentration;
            const auto strategies = sample_strategies(dist, g.node_count(), derive_seed(sim_seed, Stream::Strategies));
            const auto outcome = run_election(g, a, sim_cfg, strategies, derive_seed(sim_seed, Stream::Election));
            const PartyId focal = sim_party.empty() ? 0 : a.index_of(sim_party);
            json j;
            j["seed"] = sim_seed;
            j["nodes"] = g.node_count();
            j["ticks"] = sim_cfg.tick_count();
            j["victory_threshold"] = sim_cfg.victory_threshold;
            for (PartyId p = 0; p < a.party_count(); ++p) {
                j["initial_counts"][a.party_name(p)] = a.count(p);
                j["final_shares"][a.party_name(p)] = outcome.final_shares[p];
            }
            j["winner"] = outcome.winner ? json(a.party_name(*outcome.winner)) : json(nullptr);
            j["deadlock"] = outcome.deadlock();
            j["skew_party"] = a.party_name(focal);
            j["final_skew"] = outcome.skew(focal);
            std::cout << j.dump(2) << '\n';
            if (!sim_trajectory.empty()) {
                auto out = open_out(sim_trajectory);
                out << "tick,t_seconds";
                for (const auto& name : a.parties()) out << ",share_" << name;
                out << '\n';
                for (std::size_t r = 0; r < outcome.trajectory.size(); ++r) {
                    out << r << ',' << format_double(outcome.tick_times[r]);
                    for (double s : outcome.trajectory[r]) out << ',' << format_double(s);
                    out << '\n';
                }
            }
        } else if (swp->parsed()) {
            SweepConfig cfg;
            Settings settings;
            if (!swp_config.empty()) settings = load_settings(swp_config);
            if (swp_seed) settings["seed"] = {std::to_string(*swp_seed)};
            if (!settings.count("seed")) throw std::invalid_argument("sweep needs --seed (or seed in the config)");
            auto doubles = [](const std::vector<double>& v) {
                std::vector<std::string> s;
                for (double d : v) s.push_back(format_double(d));
                return s;
            };
            if (!swp_p0.empty()) settings["p0"] = doubles(swp_p0);
            if (!swp_h.empty()) settings["h"] = doubles(swp_h);
            if (swp_l) settings["l"] = {std::to_string(*swp_l)};
            if (swp_k) settings["k"] = {std::to_string(*swp_k)};
            if (swp_elections) settings["elections"] = {std::to_string(*swp_elections)};
            if (swp_workers) settings["workers"] = {std::to_string(*swp_workers)};
            if (!swp_parties.empty()) settings["parties"] = {swp_parties};
            if (!swp_counts.empty()) settings["counts"] = swp_counts;
            if (swp_v) settings["V"] = {format_double(*swp_v)};
            if (swp_concentration) settings["concentration"] = {format_double(*swp_concentration)};
            if (!swp_strategies.empty()) settings["strategies"] = {swp_strategies};
            if (!swp_stick.empty()) settings["stick_target"] = {swp_stick};
            // Three parties and no count rule: default to compositions with at
            // least 4 voters per party.
            if (settings.count("parties") && !settings.count("counts")) {
                std::size_t n = 0;
                for (const auto& item : settings.at("parties")) n += std::count(item.begin(), item.end(), ',') + 1;
                if (n > 2) settings["counts"] = {"composition 4"};
            }
            apply_settings(cfg, settings);
            const auto meta = describe_settings(cfg);
            std::cerr << meta;
            if (!swp_meta.empty()) open_out(swp_meta) << meta;
            const auto records = run_batch(cfg);
            auto out = open_out(swp_out);
            write_records_csv(out, records);
            std::cerr << "wrote " << records.size() << " records to " << swp_out << '\n';
        } else if (srf->parsed()) {
            const auto points = surface_mean_abs_gap(srf_h, srf_p0, srf_samples, srf_l, srf_k, srf_seed, srf_workers);
            auto out = open_out(srf_out);
            write_surface_csv(out, points);
            std::cerr << "wrote " << points.size() << " surface points to " << srf_out << '\n';
        } else if (reg->parsed()) {
            std::ifstream in(reg_records);
            if (!in) throw std::runtime_error("cannot open '" + reg_records + "'");
            const auto records = read_records_csv(in);
            const auto suite = regression_suite(records, reg_fraction, reg_seed);
            auto model = [](const RegressionResult& r, const std::vector<std::string>& names) {
                json m;
                for (std::size_t i = 0; i < names.size(); ++i) m[names[i]] = r.coefficients[i];
                m["beta_0"] = r.intercept;
                m["r2_test"] = r.r_squared;
                m["r2_train"] = r.train_r_squared;
                return m;
            };
            json j;
            j["rows"] = suite.rows;
            j["train_fraction"] = reg_fraction;
            j["seed"] = reg_seed;
            j["majority"] = model(suite.majority, {"beta_M"});
            j["ig"] = model(suite.gap, {"beta_G"});
            j["joint"] = model(suite.joint, {"beta_M", "beta_G"});
            if (reg_out.empty()) std::cout << j.dump(2) << '\n';
            else open_out(reg_out) << j.dump(2) << '\n';
        } else if (pcc->parsed()) {
            std::ifstream in(pcc_records);
            if (!in) throw std::runtime_error("cannot open '" + pcc_records + "'");
            const auto entries = pcc_curves(read_records_csv(in), pcc_metrics, pcc_parties);
            if (pcc_out.empty()) {
                write_pcc_csv(std::cout, entries);
            } else {
                auto out = open_out(pcc_out);
                write_pcc_csv(out, entries);
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
