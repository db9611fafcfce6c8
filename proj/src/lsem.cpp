#include "lsemplus/lsem.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lsemplus {

LsemModel make_model(Dag dag, Eigen::MatrixXd edge_weights, Eigen::VectorXd innovation_weights, double alpha) {
    const int d = dag.size();
    if (edge_weights.rows() != d || edge_weights.cols() != d)
        throw std::invalid_argument("make_model: edge weight matrix must be d x d");
    if (innovation_weights.size() != d) throw std::invalid_argument("make_model: need d innovation weights");
    if (!(alpha > 0.0)) throw std::invalid_argument("make_model: alpha must be positive");
    for (Node i = 1; i <= d; ++i) {
        if (!(innovation_weights(i - 1) > 0.0))
            throw std::invalid_argument("make_model: s_" + std::to_string(i) + " must be positive");
        for (Node j = 1; j <= d; ++j) {
            const double c = edge_weights(i - 1, j - 1);
            const bool edge = i != j && dag.has_edge(j, i);
            if (edge ? !(c > 0.0) : c != 0.0)
                throw std::invalid_argument("make_model: c_" + std::to_string(i) + std::to_string(j) +
                                            " inconsistent with the DAG");
        }
    }
    return {std::move(dag), std::move(edge_weights), std::move(innovation_weights), alpha};
}

CoefficientMatrix coefficient_matrix(const LsemModel& model) {
    const int d = model.dag.size();
    const Eigen::MatrixXd& c = model.edge_weights;
    // C is nilpotent of index <= d, so sum_{m<d} C^m is exact.
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd sum = power;
    for (int m = 1; m < d; ++m) {
        power = power * c;
        sum += power;
    }
    return {sum * model.innovation_weights.asDiagonal(), false};
}

CoefficientMatrix coefficient_matrix_paths(const LsemModel& model, std::size_t path_cap) {
    const int d = model.dag.size();
    const auto& c = model.edge_weights;
    const auto& s = model.innovation_weights;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(d, d);
    for (Node i = 1; i <= d; ++i) {
        a(i - 1, i - 1) = s(i - 1);
        for (Node j : ancestors(model.dag, i)) {
            double total = 0.0;
            for (const Path& path : enumerate_paths(model.dag, j, i, path_cap)) {
                double w = s(j - 1);
                for (std::size_t step = 1; step < path.size(); ++step)
                    w *= c(path[step] - 1, path[step - 1] - 1);
                total += w;
            }
            a(i - 1, j - 1) = total;
        }
    }
    return {a, false};
}

CoefficientMatrix standardize(const CoefficientMatrix& a, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("standardize: alpha must be positive");
    Eigen::MatrixXd out = a.values;
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
        double norm = 0.0;
        for (Eigen::Index k = 0; k < out.cols(); ++k) {
            if (out(i, k) < 0.0) throw std::invalid_argument("standardize: negative coefficient");
            norm += std::pow(out(i, k), alpha);
        }
        if (!(norm > 0.0)) throw std::invalid_argument("standardize: zero row");
        norm = std::pow(norm, 1.0 / alpha);
        out.row(i) /= norm;
    }
    return {out, true};
}

bool verify_path_inequality(const CoefficientMatrix& a, double slack) {
    const auto& m = a.values;
    const Eigen::Index d = m.rows();
    for (Eigen::Index k = 0; k < d; ++k) {
        if (!(m(k, k) > 0.0)) throw std::invalid_argument("verify_path_inequality: nonpositive diagonal");
        for (Eigen::Index i = 0; i < d; ++i)
            for (Eigen::Index j = 0; j < d; ++j)
                if (m(i, j) < m(i, k) * m(k, j) / m(k, k) - slack) return false;
    }
    return true;
}

LsemModel random_lsem(int d, double p, Rng& rng, double alpha) {
    Dag dag = random_dag(d, p, rng);
    auto draw = [&rng] { return 0.1 + 1.4 * uniform01(rng); };
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(d, d);
    for (const auto& e : dag.edges()) c(e.to - 1, e.from - 1) = draw();
    Eigen::VectorXd s(d);
    for (int i = 0; i < d; ++i) s(i) = draw();
    return make_model(std::move(dag), std::move(c), std::move(s), alpha);
}

double abs_student_t(double nu, Rng& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    std::gamma_distribution<double> chi2(nu / 2.0, 2.0);
    const double z = normal(rng);
    const double v = chi2(rng);
    return std::abs(z / std::sqrt(v / nu));
}

SampleMatrix simulate(const CoefficientMatrix& abar, int n, double alpha, Rng& rng) {
    if (!abar.standardized) throw std::invalid_argument("simulate: coefficient matrix must be standardized");
    if (n < 1) throw std::invalid_argument("simulate: n must be positive");
    if (!(alpha > 0.0)) throw std::invalid_argument("simulate: alpha must be positive");
    const Eigen::Index d = abar.values.rows();
    Eigen::MatrixXd z(n, d);
    for (int row = 0; row < n; ++row)
        for (Eigen::Index k = 0; k < d; ++k) z(row, k) = abs_student_t(alpha, rng);
    return {z * abar.values.transpose(), Margins::raw};
}

}  // namespace lsemplus
