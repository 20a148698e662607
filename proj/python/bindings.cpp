#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "cavevote/config.hpp"
#include "cavevote/dynamics.hpp"
#include "cavevote/experiments.hpp"
#include "cavevote/graph.hpp"
#include "cavevote/io.hpp"
#include "cavevote/metrics.hpp"
#include "cavevote/stats.hpp"

namespace py = pybind11;
using namespace cavevote;

namespace {

std::vector<PartyCount> to_counts(const std::vector<std::pair<std::string, std::size_t>>& counts) {
    std::vector<PartyCount> out;
    for (const auto& [name, c] : counts) out.push_back({name, c});
    return out;
}

py::tuple fraction(const Rational& q) { return py::make_tuple(q.numerator(), q.denominator()); }

PartyId party_arg(const PartyAssignment& a, const py::object& party) {
    if (py::isinstance<py::str>(party)) return a.index_of(party.cast<std::string>());
    return party.cast<PartyId>();
}

py::dict record_dict(const ElectionRecord& r) {
    py::dict d;
    d["cell"] = r.cell;
    d["repetition"] = r.repetition;
    d["seed"] = r.seed;
    d["l"] = r.l;
    d["k"] = r.k;
    d["p0"] = r.p0;
    d["h"] = r.h;
    d["parties"] = r.parties;
    d["counts"] = r.counts;
    d["influence_gap"] = r.influence_gap;
    d["majority"] = r.majority;
    d["dvs"] = r.dvs;
    d["efficiency_gap"] = r.efficiency_gap;
    d["final_skew"] = r.final_skew;
    d["winner"] = r.winner;
    return d;
}

SweepConfig sweep_config(const py::dict& settings) {
    Settings s;
    for (const auto& [key, value] : settings) {
        auto& slot = s[key.cast<std::string>()];
        if (py::isinstance<py::list>(value) || py::isinstance<py::tuple>(value)) {
            for (const auto& item : value) slot.push_back(py::str(item).cast<std::string>());
        } else {
            slot.push_back(py::str(value).cast<std::string>());
        }
    }
    SweepConfig config;
    apply_settings(config, s);
    return config;
}

py::dict regression_dict(const RegressionResult& r) {
    py::dict d;
    d["coefficients"] = r.coefficients;
    d["intercept"] = r.intercept;
    d["r2_test"] = r.r_squared;
    d["r2_train"] = r.train_r_squared;
    d["train_rows"] = r.train_rows;
    d["test_rows"] = r.test_rows;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Influence gap metrics, hRC graph generation and voting dynamics";

    py::class_<Graph>(m, "Graph")
        .def(py::init<std::size_t>(), py::arg("node_count"))
        .def("add_edge", &Graph::add_edge)
        .def("remove_edge", &Graph::remove_edge)
        .def("has_edge", &Graph::has_edge)
        .def("edges", &Graph::edges)
        .def("neighbors", [](const Graph& g, NodeId n) {
            const auto span = g.neighbors(n);
            return std::vector<NodeId>(span.begin(), span.end());
        })
        .def("degree", &Graph::degree)
        .def("clique_of", &Graph::clique_of)
        .def_property_readonly("node_count", &Graph::node_count)
        .def_property_readonly("edge_count", &Graph::edge_count)
        .def_property_readonly("clique_count", &Graph::clique_count)
        .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
        .def("to_text", [](const Graph& g) {
            std::ostringstream s;
            write_graph(s, g);
            return s.str();
        })
        .def_static("from_text", [](const std::string& text) {
            std::istringstream s(text);
            return read_graph(s);
        });

    py::class_<PartyAssignment>(m, "PartyAssignment")
        .def(py::init<std::vector<std::string>, std::vector<PartyId>>(), py::arg("parties"), py::arg("labels"))
        .def_property_readonly("parties", &PartyAssignment::parties)
        .def_property_readonly("labels", [](const PartyAssignment& a) {
            const auto v = a.votes();
            return std::vector<PartyId>(v.begin(), v.end());
        })
        .def_property_readonly("counts", &PartyAssignment::counts)
        .def("party_of", &PartyAssignment::party_of)
        .def("index_of", [](const PartyAssignment& a, const std::string& name) { return a.index_of(name); })
        .def("__eq__", [](const PartyAssignment& a, const PartyAssignment& b) { return a == b; })
        .def("__len__", &PartyAssignment::node_count);

    m.def("build_caveman", &build_caveman, py::arg("cliques"), py::arg("clique_size"));
    m.def(
        "assign_parties_spa",
        [](std::size_t n, const std::vector<std::pair<std::string, std::size_t>>& counts, Seed seed) {
            return assign_parties_spa(n, to_counts(counts), seed);
        },
        py::arg("node_count"), py::arg("counts"), py::arg("seed"));
    m.def(
        "generate_hrc",
        [](std::size_t l, std::size_t k, double p0, double h, const PartyAssignment& a, Seed seed) {
            RewireStats stats;
            Graph g = generate_hrc({l, k, p0, h}, a, seed, stats);
            py::dict d;
            d["attempts"] = stats.attempts;
            d["rewired"] = stats.rewired;
            d["collisions"] = stats.collisions;
            return py::make_tuple(std::move(g), d);
        },
        py::arg("l"), py::arg("k"), py::arg("p0"), py::arg("h"), py::arg("assignment"), py::arg("seed"));
    m.def(
        "rewire_relaxed", [](const Graph& g, double p, Seed seed) { return rewire_relaxed(g, p, seed); }, py::arg("graph"),
        py::arg("p"), py::arg("seed"));
    m.def("poll_fractions", &poll_fractions, py::arg("graph"), py::arg("assignment"), py::arg("node"));

    m.def(
        "node_assortment",
        [](const Graph& g, const PartyAssignment& a, NodeId n, const std::string& conv) {
            return fraction(node_assortment<Rational>(g, a, n, parse_assortment_convention(conv)));
        },
        py::arg("graph"), py::arg("assignment"), py::arg("node"), py::arg("assortment") = "dominant-negative");
    m.def(
        "party_assortment",
        [](const Graph& g, const PartyAssignment& a, const py::object& party, const std::string& conv) {
            return fraction(party_assortment<Rational>(g, a, party_arg(a, party), parse_assortment_convention(conv)));
        },
        py::arg("graph"), py::arg("assignment"), py::arg("party"), py::arg("assortment") = "dominant-negative");
    m.def(
        "influence_gap",
        [](const Graph& g, const PartyAssignment& a, const py::object& party, const std::string& aconv,
           const std::string& gconv) {
            py::list out;
            for (const auto& q : influence_gap<Rational>(g, a, party_arg(a, party), parse_assortment_convention(aconv),
                                                         parse_gap_convention(gconv)))
                out.append(fraction(q));
            return out;
        },
        py::arg("graph"), py::arg("assignment"), py::arg("party"), py::arg("assortment") = "dominant-negative",
        py::arg("gap") = "vs-most-influential");
    m.def(
        "metric_report",
        [](const Graph& g, const PartyAssignment& a, const py::object& party, const std::string& aconv,
           const std::string& gconv) {
            const auto r = metric_report(g, a, party_arg(a, party), parse_assortment_convention(aconv),
                                         parse_gap_convention(gconv));
            py::dict d;
            py::dict gaps;
            for (PartyId p = 0; p < a.party_count(); ++p) gaps[py::str(a.parties()[p])] = r.influence_gap[p];
            d["influence_gap"] = gaps;
            d["majority"] = r.majority;
            d["dvs"] = r.dvs;
            d["efficiency_gap"] = r.efficiency_gap;
            return d;
        },
        py::arg("graph"), py::arg("assignment"), py::arg("party") = 0, py::arg("assortment") = "dominant-negative",
        py::arg("gap") = "vs-most-influential");
    m.def("caveman_gap_closed", [](const std::vector<std::size_t>& red_counts, std::size_t k, std::size_t n_red,
                                   std::size_t n_blue) { return caveman_gap_closed({red_counts, k}, n_red, n_blue); },
          py::arg("red_counts"), py::arg("clique_size"), py::arg("n_red"), py::arg("n_blue"));
    m.def("equal_rep_gap", &equal_rep_gap, py::arg("strict"), py::arg("weak"), py::arg("cliques"));
    m.def("clique_gap", &clique_gap, py::arg("n"), py::arg("n0"), py::arg("winners"), py::arg("is_winner"));

    m.def(
        "simulate",
        [](const Graph& g, const PartyAssignment& a, Seed seed, double victory_threshold, double concentration,
           const std::string& stick_target) {
            ElectionConfig config;
            config.victory_threshold = victory_threshold;
            if (stick_target == "assigned") config.stick_target = StickTarget::Assigned;
            else if (stick_target != "current") throw std::invalid_argument("stick_target must be current or assigned");
            BehaviorDistribution dist;
            dist.concentration = concentration;
            const auto strategies = sample_strategies(dist, g.node_count(), derive_seed(seed, Stream::Strategies));
            const auto outcome = run_election(g, a, config, strategies, derive_seed(seed, Stream::Election));
            py::dict d;
            d["final_shares"] = outcome.final_shares;
            d["winner"] = outcome.winner ? py::cast(a.parties()[*outcome.winner]) : py::none();
            d["trajectory"] = outcome.trajectory;
            d["tick_times"] = outcome.tick_times;
            d["final_votes"] = outcome.final_votes;
            return d;
        },
        py::arg("graph"), py::arg("assignment"), py::arg("seed"), py::arg("victory_threshold") = 0.6,
        py::arg("concentration") = 10.0, py::arg("stick_target") = "current");

    m.def(
        "sweep",
        [](const py::dict& settings) {
            const auto config = sweep_config(settings);
            std::vector<ElectionRecord> records;
            {
                py::gil_scoped_release release;
                records = run_batch(config);
            }
            py::list out;
            for (const auto& r : records) out.append(record_dict(r));
            return out;
        },
        py::arg("settings"), "Runs a sweep; settings use the config-file keys (seed, l, k, p0, h, elections, ...).");
    m.def(
        "sweep_csv",
        [](const py::dict& settings) {
            const auto config = sweep_config(settings);
            std::ostringstream s;
            {
                py::gil_scoped_release release;
                write_records_csv(s, run_batch(config));
            }
            return s.str();
        },
        py::arg("settings"));
    m.def(
        "surface",
        [](const std::vector<double>& h, const std::vector<double>& p0, std::size_t samples, std::size_t l, std::size_t k,
           Seed seed, std::size_t workers) {
            std::vector<SurfacePoint> pts;
            {
                py::gil_scoped_release release;
                pts = surface_mean_abs_gap(h, p0, samples, l, k, seed, workers);
            }
            py::list out;
            for (const auto& p : pts) {
                py::dict d;
                d["p0"] = p.p0;
                d["h"] = p.h;
                d["mean_abs_ig"] = p.mean_abs_gap;
                d["samples"] = p.samples;
                d["std_error"] = p.standard_error;
                out.append(d);
            }
            return out;
        },
        py::arg("h"), py::arg("p0"), py::arg("samples") = 300, py::arg("l") = 10, py::arg("k") = 10, py::arg("seed") = 0,
        py::arg("workers") = 1);
    m.def(
        "regress",
        [](const std::string& records_csv, double train_fraction, Seed seed) {
            std::istringstream in(records_csv);
            const auto suite = regression_suite(read_records_csv(in), train_fraction, seed);
            py::dict d;
            d["majority"] = regression_dict(suite.majority);
            d["ig"] = regression_dict(suite.gap);
            d["joint"] = regression_dict(suite.joint);
            d["rows"] = suite.rows;
            return d;
        },
        py::arg("records_csv"), py::arg("train_fraction") = 0.7, py::arg("seed") = 0);
    m.def(
        "pcc",
        [](const std::string& records_csv, const std::vector<std::string>& metrics, const std::vector<std::string>& parties) {
            std::istringstream in(records_csv);
            py::list out;
            for (const auto& e : pcc_curves(read_records_csv(in), metrics, parties)) {
                py::dict d;
                d["p0"] = e.p0;
                d["h"] = e.h;
                d["party"] = e.party;
                d["metric"] = e.metric;
                d["samples"] = e.samples;
                d["pcc"] = e.pcc;
                d["note"] = e.note;
                out.append(d);
            }
            return out;
        },
        py::arg("records_csv"), py::arg("metrics") = std::vector<std::string>{"majority", "ig"},
        py::arg("parties") = std::vector<std::string>{"red"});
    m.def("pearson", [](const std::vector<double>& x, const std::vector<double>& y) { return pearson(x, y); });
}
