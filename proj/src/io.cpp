#include "lsemplus/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lsemplus/data.hpp"

namespace lsemplus::io {

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    return in;
}

nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

nlohmann::json vector_json(const Eigen::VectorXd& v) {
    auto arr = nlohmann::json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(finite_or_null(v(i)));
    return arr;
}

}  // namespace

std::string format_double(double v) {
    if (!std::isfinite(v)) return "NA";
    // Shortest text that parses back to the same double.
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return {buf, res.ptr};
}

void write_dag(std::ostream& out, const Dag& dag) {
    out << dag.size() << '\n';
    for (const auto& e : dag.edges()) out << e.from << ' ' << e.to << '\n';
}

Dag read_dag(std::istream& in) {
    int d = 0;
    if (!(in >> d)) throw std::runtime_error("DAG file: missing node count");
    std::vector<Edge> edges;
    Node j = 0, i = 0;
    while (in >> j) {
        if (!(in >> i)) throw std::runtime_error("DAG file: dangling edge endpoint");
        edges.push_back({j, i});
    }
    if (!in.eof()) throw std::runtime_error("DAG file: malformed edge line");
    return Dag(d, std::move(edges));
}

Dag load_dag(const std::filesystem::path& path) {
    auto in = open_input(path);
    return read_dag(in);
}

nlohmann::json model_to_json(const LsemModel& model) {
    nlohmann::json doc;
    doc["d"] = model.dag.size();
    auto edges = nlohmann::json::array();
    for (const auto& e : model.dag.edges())
        edges.push_back({e.from, e.to, model.edge_weights(e.to - 1, e.from - 1)});
    doc["edges"] = edges;
    doc["s"] = std::vector<double>(model.innovation_weights.data(),
                                   model.innovation_weights.data() + model.innovation_weights.size());
    doc["alpha"] = model.alpha;
    return doc;
}

LsemModel model_from_json(const nlohmann::json& doc) {
    const int d = doc.at("d").get<int>();
    if (d < 1) throw std::runtime_error("model: d must be positive");
    std::vector<Edge> edges;
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d, d);
    for (const auto& e : doc.at("edges")) {
        if (!e.is_array() || e.size() != 3) throw std::runtime_error("model: each edge must be [j, i, c_ij]");
        const Node j = e[0].get<int>();
        const Node i = e[1].get<int>();
        if (i < 1 || i > d || j < 1 || j > d) throw std::runtime_error("model: edge endpoint out of range");
        edges.push_back({j, i});
        c(i - 1, j - 1) = e[2].get<double>();
    }
    const auto s = doc.at("s").get<std::vector<double>>();
    if (static_cast<int>(s.size()) != d) throw std::runtime_error("model: s must have d entries");
    Eigen::VectorXd sv = Eigen::Map<const Eigen::VectorXd>(s.data(), d);
    return make_model(Dag(d, std::move(edges)), std::move(c), std::move(sv), doc.value("alpha", 2.0));
}

nlohmann::json read_json(const std::filesystem::path& path) {
    auto in = open_input(path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

LsemModel load_model(const std::filesystem::path& path) {
    try {
        return model_from_json(read_json(path));
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

void write_samples(std::ostream& out, const Eigen::MatrixXd& values, const std::vector<std::string>& names) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) {
        if (c) out << ',';
        out << (names.size() == static_cast<std::size_t>(values.cols()) ? names[c] : "X" + std::to_string(c + 1));
    }
    out << '\n';
    for (Eigen::Index r = 0; r < values.rows(); ++r) {
        for (Eigen::Index c = 0; c < values.cols(); ++c) {
            if (c) out << ',';
            out << format_double(values(r, c));
        }
        out << '\n';
    }
}

SampleMatrix load_samples(const std::filesystem::path& path) {
    const TimeSeriesPanel panel = load_csv(path, CsvConfig{});
    if (panel.rows() < 1) throw std::runtime_error(path.string() + ": no observations");
    if ((panel.values.array() < 0.0).any()) throw std::runtime_error(path.string() + ": negative observation");
    return panel.sample();
}

nlohmann::json ordering_to_json(const OrderingResult& result, std::optional<std::uint64_t> seed) {
    nlohmann::json doc;
    doc["ordering"] = result.ordering;
    doc["ancestral_order"] = result.ancestral_order();
    doc["parameters"] = {{"a", result.params.a}, {"epsilon", result.params.epsilon}, {"k", result.params.k}};
    doc["auto_standardized"] = result.auto_standardized;
    if (seed) doc["seed"] = *seed;
    auto steps = nlohmann::json::array();
    for (const auto& step : result.steps) {
        nlohmann::json s;
        s["identified"] = step.identified;
        s["selected"] = step.selected;
        s["epsilon_hat"] = step.epsilon_hat;
        s["column_minima"] = vector_json(step.column_minima);
        s["deltas"] = vector_json(step.deltas);
        auto rows = nlohmann::json::array();
        for (Eigen::Index i = 0; i < step.delta.values.rows(); ++i) rows.push_back(vector_json(step.delta.values.row(i)));
        s["delta"] = rows;
        steps.push_back(std::move(s));
    }
    doc["steps"] = steps;
    return doc;
}

std::vector<Node> ancestral_order_from_json(const nlohmann::json& doc) {
    if (doc.contains("ancestral_order")) return doc.at("ancestral_order").get<std::vector<Node>>();
    auto ordering = doc.at("ordering").get<std::vector<Node>>();
    return {ordering.rbegin(), ordering.rend()};
}

nlohmann::json sid_to_json(const SidScore& score) { return {{"raw", score.raw}, {"normalized", score.normalized}}; }

void write_bootstrap_csv(std::ostream& out, const std::vector<BootstrapReplicate>& replicates) {
    out << "replicate,raw,normalized,seed\n";
    for (const auto& r : replicates)
        out << r.index << ',' << r.score.raw << ',' << format_double(r.score.normalized) << ',' << r.seed << '\n';
}

void write_matrix_csv(std::ostream& out, const Eigen::MatrixXd& m) {
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ',';
            out << format_double(m(r, c));
        }
        out << '\n';
    }
}

}  // namespace lsemplus::io
