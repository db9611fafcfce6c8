#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "lsemplus/baseline.hpp"
#include "lsemplus/data.hpp"
#include "lsemplus/discovery.hpp"
#include "lsemplus/extremes.hpp"
#include "lsemplus/graph.hpp"
#include "lsemplus/lsem.hpp"
#include "lsemplus/metrics.hpp"

namespace py = pybind11;
using namespace lsemplus;

namespace {

Dag make_dag(int d, const std::vector<std::pair<Node, Node>>& edges) {
    std::vector<Edge> e;
    for (auto [from, to] : edges) e.push_back({from, to});
    return Dag(d, std::move(e));
}

std::vector<std::pair<Node, Node>> edge_list(const Dag& dag) {
    std::vector<std::pair<Node, Node>> out;
    for (const auto& e : dag.edges()) out.emplace_back(e.from, e.to);
    return out;
}

SampleMatrix as_sample(const Eigen::MatrixXd& values, const std::string& margins) {
    if (margins != "raw" && margins != "frechet2") throw py::value_error("margins must be 'raw' or 'frechet2'");
    return {values, margins == "raw" ? Margins::raw : Margins::frechet2};
}

py::dict ordering_dict(const OrderingResult& r) {
    py::list steps;
    for (const auto& s : r.steps) {
        py::dict step;
        step["identified"] = s.identified;
        step["selected"] = s.selected;
        step["epsilon_hat"] = s.epsilon_hat;
        step["column_minima"] = s.column_minima;
        step["deltas"] = s.deltas;
        step["delta"] = s.delta.values;
        steps.append(step);
    }
    py::dict out;
    out["ordering"] = r.ordering;
    out["ancestral_order"] = r.ancestral_order();
    out["steps"] = steps;
    out["auto_standardized"] = r.auto_standardized;
    out["warnings"] = r.warnings;
    return out;
}

}  // namespace

PYBIND11_MODULE(_lsemplus, m) {
    m.doc() = "Extremal causal ordering for heavy-tailed linear structural equation models";

    py::class_<Dag>(m, "Dag")
        .def(py::init(&make_dag), py::arg("d"), py::arg("edges"))
        .def_property_readonly("d", &Dag::size)
        .def_property_readonly("edges", &edge_list)
        .def("parents", &Dag::parents)
        .def("children", &Dag::children)
        .def("topological_order", &Dag::topological_order)
        .def("__repr__", [](const Dag& g) {
            return "<Dag d=" + std::to_string(g.size()) + " edges=" + std::to_string(g.edge_count()) + ">";
        });

    py::class_<LsemModel>(m, "LsemModel")
        .def(py::init([](const Dag& dag, const Eigen::MatrixXd& c, const Eigen::VectorXd& s, double alpha) {
                 return make_model(dag, c, s, alpha);
             }),
             py::arg("dag"), py::arg("edge_weights"), py::arg("innovation_weights"), py::arg("alpha") = 2.0)
        .def_readonly("dag", &LsemModel::dag)
        .def_readonly("edge_weights", &LsemModel::edge_weights)
        .def_readonly("innovation_weights", &LsemModel::innovation_weights)
        .def_readonly("alpha", &LsemModel::alpha);

    m.def("random_dag", [](int d, double p, std::uint64_t seed) {
        Rng rng(seed);
        return random_dag(d, p, rng);
    }, py::arg("d"), py::arg("p"), py::arg("seed"));

    m.def("random_lsem", [](int d, double p, std::uint64_t seed, double alpha) {
        Rng rng(seed);
        return random_lsem(d, p, rng, alpha);
    }, py::arg("d"), py::arg("p"), py::arg("seed"), py::arg("alpha") = 2.0);

    m.def("coefficient_matrix", [](const LsemModel& model, bool standardized) {
        CoefficientMatrix a = coefficient_matrix(model);
        return standardized ? standardize(a, model.alpha).values : a.values;
    }, py::arg("model"), py::arg("standardized") = true);

    m.def("simulate_model", [](const LsemModel& model, int n, std::uint64_t seed) {
        Rng rng(seed);
        return simulate(standardize(coefficient_matrix(model), model.alpha), n, model.alpha, rng).values;
    }, py::arg("model"), py::arg("n"), py::arg("seed"),
       "Raw samples of X = abar Z. The generator is seeded directly with `seed`.");

    m.def("simulate", [](int d, double p, double alpha, int n, std::uint64_t seed) {
        Rng rng(seed);
        const LsemModel model = random_lsem(d, p, rng, alpha);
        const SampleMatrix x = simulate(standardize(coefficient_matrix(model), alpha), n, alpha, rng);
        return py::make_tuple(model, x.values);
    }, py::arg("d"), py::arg("p"), py::arg("alpha"), py::arg("n"), py::arg("seed"),
       "Random model and raw samples drawn from one seeded stream, as the CLI does.");

    m.def("pit_frechet2", [](const Eigen::MatrixXd& x) { return pit_frechet2({x, Margins::raw}).values; });

    m.def("default_threshold", &default_threshold);

    m.def("estimate_scaling_scaled", [](const Eigen::MatrixXd& x, Node i, Node j, const NodeSet& I, double a, int k) {
        return estimate_scaling_scaled({x, Margins::frechet2}, i, j, I, a, k);
    }, py::arg("x"), py::arg("i"), py::arg("j"), py::arg("identified"), py::arg("a"), py::arg("k"));

    m.def("estimate_scaling_unscaled", [](const Eigen::MatrixXd& x, Node i, Node j, const NodeSet& I, double a, int k) {
        return estimate_scaling_unscaled({x, Margins::frechet2}, i, j, I, a, k);
    }, py::arg("x"), py::arg("i"), py::arg("j"), py::arg("identified"), py::arg("a"), py::arg("k"));

    m.def("causal_order", [](const Eigen::MatrixXd& x, double a, double epsilon, int k, const std::string& margins) {
        return ordering_dict(causal_order(as_sample(x, margins), {a, epsilon, k}));
    }, py::arg("x"), py::arg("a") = 1.3, py::arg("epsilon") = 0.4, py::arg("k") = 0, py::arg("margins") = "raw");

    m.def("causal_order_oracle", [](const LsemModel& model, double a, double epsilon) {
        return ordering_dict(causal_order_oracle(standardize(coefficient_matrix(model), 2.0), a, epsilon));
    }, py::arg("model"), py::arg("a") = 1.3, py::arg("epsilon") = 0.4);

    m.def("full_dag_from_order", &full_dag_from_order, py::arg("ancestral_order"));

    m.def("sid", [](const Dag& truth, const Dag& estimate) {
        const SidScore s = sid(truth, estimate);
        return py::make_tuple(s.raw, s.normalized);
    }, py::arg("truth"), py::arg("estimate"), "Returns (raw, normalized).");

    m.def("gamma_matrix", [](const Eigen::MatrixXd& x, int k) { return gamma_matrix({x, Margins::raw}, k); },
          py::arg("x"), py::arg("k"));
    m.def("gamma_order", [](const Eigen::MatrixXd& x, int k) { return gamma_order({x, Margins::raw}, k); },
          py::arg("x"), py::arg("k"));

    m.def("decluster_rows", [](const Eigen::MatrixXd& x, int window, const std::vector<std::size_t>& segment_starts) {
        TimeSeriesPanel panel;
        panel.values = x;
        panel.segment_starts = segment_starts;
        return decluster_rows(panel, window);
    }, py::arg("x"), py::arg("window"), py::arg("segment_starts") = std::vector<std::size_t>{});
}
