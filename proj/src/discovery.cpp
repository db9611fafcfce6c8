#include "lsemplus/discovery.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

#include "lsemplus/extremes.hpp"

namespace lsemplus {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kOracleZero = 1e-12;

std::vector<char> membership(int d, const NodeSet& identified) {
    std::vector<char> in(d + 1, 0);
    for (Node r : identified) {
        if (r < 1 || r > d) throw std::out_of_range("identified node " + std::to_string(r) + " out of range");
        if (in[r]) throw std::invalid_argument("identified set has a repeated node");
        in[r] = 1;
    }
    return in;
}

NodeSet remaining_nodes(int d, const std::vector<char>& in) {
    NodeSet out;
    for (Node v = 1; v <= d; ++v)
        if (!in[v]) out.push_back(v);
    return out;
}

}  // namespace

DeltaMatrix delta_matrix(const SampleMatrix& x, const NodeSet& identified, const AlgoParams& params) {
    const int d = static_cast<int>(x.cols());
    const auto in = membership(d, identified);
    if (static_cast<int>(identified.size()) >= d) throw std::invalid_argument("delta_matrix: no unidentified nodes");
    if (!(params.a > 1.0)) throw std::invalid_argument("delta_matrix: a must exceed 1");
    const int k = params.k > 0 ? params.k : default_threshold(static_cast<int>(x.rows()));
    const NodeSet rest = remaining_nodes(d, in);
    const double s2m1 = params.a * params.a - 1.0;

    const detail::BlockSummary block = detail::summarize_block(x, identified);
    // s2(M_{j,I}): direct estimate when I is empty, otherwise the unscaled
    // estimator on (X_j, a X_{I_1}, a X_{I_2..}).
    std::vector<double> baseline(d + 1, 0.0);
    std::vector<double> scratch;
    if (identified.empty()) {
        for (Node j : rest) baseline[j] = estimate_scaling_init(x, {j}, k);
    } else {
        const NodeSet tail(identified.begin() + 1, identified.end());
        const detail::BlockSummary tail_block = detail::summarize_block(x, tail);
        for (Node j : rest)
            baseline[j] = detail::pair_estimate(x, j, identified.front(), tail_block, params.a, k, scratch).unscaled;
    }

    DeltaMatrix delta{Eigen::MatrixXd::Constant(d, d, kInf)};
    for (Node j : rest)
        for (Node i : rest) {
            if (i == j) continue;
            const auto est = detail::pair_estimate(x, i, j, block, params.a, k, scratch);
            delta.values(i - 1, j - 1) = est.scaled - est.unscaled - s2m1 * baseline[j];
        }
    return delta;
}

DeltaMatrix theoretical_delta(const CoefficientMatrix& abar, const NodeSet& identified, double a) {
    const int d = abar.size();
    const auto in = membership(d, identified);
    if (static_cast<int>(identified.size()) >= d)
        throw std::invalid_argument("theoretical_delta: no unidentified nodes");
    if (!(a > 1.0)) throw std::invalid_argument("theoretical_delta: a must exceed 1");
    // Positive weights: q is an ancestor of r iff abar_rq > 0.
    for (Node r : identified)
        for (Node q = 1; q <= d; ++q)
            if (!in[q] && abar(r, q) > 0.0)
                throw std::invalid_argument("theoretical_delta: identified set is not closed under ancestors (node " +
                                            std::to_string(q) + " -> " + std::to_string(r) + ")");
    const NodeSet rest = remaining_nodes(d, in);
    const double s2m1 = a * a - 1.0;

    DeltaMatrix delta{Eigen::MatrixXd::Constant(d, d, kInf)};
    for (Node j : rest) {
        NodeSet j_block = identified;
        j_block.push_back(j);
        const double baseline = theoretical_max_scaling(abar, j_block);
        for (Node i : rest) {
            if (i == j) continue;
            NodeSet ij_block = j_block;
            ij_block.push_back(i);
            delta.values(i - 1, j - 1) = theoretical_scaled_max_scaling(abar, i, j, identified, a) -
                                         theoretical_max_scaling(abar, ij_block) - s2m1 * baseline;
        }
    }
    return delta;
}

Eigen::VectorXd column_minima(const DeltaMatrix& delta, const NodeSet& identified) {
    const int d = delta.size();
    const auto in = membership(d, identified);
    const NodeSet rest = remaining_nodes(d, in);
    Eigen::VectorXd mins = Eigen::VectorXd::Constant(d, kInf);
    for (Node j : rest) mins(j - 1) = rest.size() == 1 ? 0.0 : delta.values.col(j - 1).minCoeff();
    return mins;
}

namespace {

double best_column_minimum(const Eigen::VectorXd& mins, const NodeSet& rest) {
    if (rest.empty()) throw std::invalid_argument("no unidentified columns");
    double best = -kInf;
    for (Node j : rest) best = std::max(best, mins(j - 1));
    return best;
}

}  // namespace

double epsilon_threshold(const DeltaMatrix& delta, const NodeSet& identified, double epsilon) {
    if (!(epsilon >= 0.0)) throw std::invalid_argument("epsilon_threshold: epsilon must be nonnegative");
    const NodeSet rest = remaining_nodes(delta.size(), membership(delta.size(), identified));
    return epsilon * std::abs(best_column_minimum(column_minima(delta, identified), rest));
}

Selection select_nodes(const DeltaMatrix& delta, const NodeSet& identified, double eps_hat) {
    const int d = delta.size();
    const NodeSet rest = remaining_nodes(d, membership(d, identified));
    Selection sel;
    sel.column_minima = column_minima(delta, identified);
    const double best = best_column_minimum(sel.column_minima, rest);
    sel.deltas = Eigen::VectorXd::Constant(d, kInf);
    for (Node p : rest) {
        sel.deltas(p - 1) = sel.column_minima(p - 1) - best;
        if (std::abs(sel.deltas(p - 1)) <= eps_hat) sel.selected.push_back(p);
    }
    std::stable_sort(sel.selected.begin(), sel.selected.end(),
                     [&](Node l, Node r) { return sel.deltas(l - 1) < sel.deltas(r - 1); });
    return sel;
}

std::vector<Node> OrderingResult::ancestral_order() const { return {ordering.rbegin(), ordering.rend()}; }

OrderingResult order_with(int d, double epsilon, const DeltaProvider& provider) {
    if (d < 1) throw std::invalid_argument("order_with: d must be positive");
    OrderingResult result;
    while (static_cast<int>(result.ordering.size()) < d) {
        OrderingStep step;
        step.identified = result.ordering;
        step.delta = provider(step.identified);
        step.epsilon_hat = epsilon_threshold(step.delta, step.identified, epsilon);
        Selection sel = select_nodes(step.delta, step.identified, step.epsilon_hat);
        // The best column has delta exactly 0, so the selection is never empty.
        if (sel.selected.empty()) throw std::logic_error("order_with: empty selection");
        step.column_minima = std::move(sel.column_minima);
        step.deltas = std::move(sel.deltas);
        step.selected = std::move(sel.selected);
        result.ordering.insert(result.ordering.begin(), step.selected.begin(), step.selected.end());
        result.steps.push_back(std::move(step));
    }
    return result;
}

OrderingResult causal_order(const SampleMatrix& x, const AlgoParams& params) {
    const int n = static_cast<int>(x.rows());
    const int d = static_cast<int>(x.cols());
    AlgoParams used = params;
    if (used.k <= 0) used.k = default_threshold(n);
    if (used.k > n) throw std::invalid_argument("causal_order: k exceeds the sample size");
    if (!(used.a > 1.0)) throw std::invalid_argument("causal_order: a must exceed 1");
    if (!(used.epsilon >= 0.0)) throw std::invalid_argument("causal_order: epsilon must be nonnegative");

    std::vector<std::string> warnings;
    const SampleMatrix* data = &x;
    SampleMatrix standardized;
    if (x.margins == Margins::raw) {
        standardized = pit_frechet2(x);
        data = &standardized;
        warnings.emplace_back("raw margins: applied empirical PIT to Frechet(2) before ordering");
    }
    OrderingResult result =
        order_with(d, used.epsilon, [&](const NodeSet& identified) { return delta_matrix(*data, identified, used); });
    result.params = used;
    result.auto_standardized = x.margins == Margins::raw;
    result.warnings = std::move(warnings);
    return result;
}

OrderingResult causal_order_oracle(const CoefficientMatrix& abar, double a, double epsilon) {
    if (!abar.standardized) throw std::invalid_argument("causal_order_oracle: matrix must be standardized");
    // Exact zeros come out of the floating-point formulas as +-1e-16 noise,
    // which would split ties between true sources. Snap them back.
    OrderingResult result = order_with(abar.size(), epsilon, [&](const NodeSet& identified) {
        DeltaMatrix delta = theoretical_delta(abar, identified, a);
        delta.values = delta.values.unaryExpr([](double v) { return std::abs(v) <= kOracleZero ? 0.0 : v; });
        return delta;
    });
    result.params = {a, epsilon, 0};
    return result;
}

}  // namespace lsemplus
