#include "lsemplus/baseline.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lsemplus {

namespace {

// rank / (n + 1) for every entry of one column.
std::vector<double> empirical_cdf(const Eigen::Ref<const Eigen::VectorXd>& column) {
    const Eigen::Index n = column.size();
    std::vector<double> sorted(column.data(), column.data() + n);
    std::sort(sorted.begin(), sorted.end());
    std::vector<double> out(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto rank = std::upper_bound(sorted.begin(), sorted.end(), column(r)) - sorted.begin();
        out[r] = static_cast<double>(rank) / (static_cast<double>(n) + 1.0);
    }
    return out;
}

std::vector<Eigen::Index> top_rows(const Eigen::Ref<const Eigen::VectorXd>& column, int k) {
    std::vector<Eigen::Index> idx(column.size());
    std::iota(idx.begin(), idx.end(), Eigen::Index{0});
    std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return column(a) > column(b); });
    idx.resize(k);
    return idx;
}

void check_args(const SampleMatrix& x, int k) {
    if (k < 1 || k > x.rows())
        throw std::invalid_argument("causal tail coefficient: k=" + std::to_string(k) + " outside 1.." +
                                    std::to_string(x.rows()));
}

double mean_over(const std::vector<double>& cdf, const std::vector<Eigen::Index>& rows) {
    double total = 0.0;
    for (Eigen::Index r : rows) total += cdf[r];
    return total / static_cast<double>(rows.size());
}

}  // namespace

double causal_tail_coefficient(const SampleMatrix& x, Node i, Node j, int k) {
    check_args(x, k);
    const int d = static_cast<int>(x.cols());
    if (i < 1 || i > d || j < 1 || j > d) throw std::out_of_range("causal_tail_coefficient: node out of range");
    if (i == j) throw std::invalid_argument("causal_tail_coefficient: i and j must differ");
    return mean_over(empirical_cdf(x.values.col(j - 1)), top_rows(x.values.col(i - 1), k));
}

Eigen::MatrixXd gamma_matrix(const SampleMatrix& x, int k) {
    check_args(x, k);
    const Eigen::Index d = x.cols();
    std::vector<std::vector<double>> cdf;
    std::vector<std::vector<Eigen::Index>> tops;
    for (Eigen::Index c = 0; c < d; ++c) {
        cdf.push_back(empirical_cdf(x.values.col(c)));
        tops.push_back(top_rows(x.values.col(c), k));
    }
    Eigen::MatrixXd gamma = Eigen::MatrixXd::Constant(d, d, std::numeric_limits<double>::quiet_NaN());
    for (Eigen::Index i = 0; i < d; ++i)
        for (Eigen::Index j = 0; j < d; ++j)
            if (i != j) gamma(i, j) = mean_over(cdf[j], tops[i]);
    return gamma;
}

std::vector<Node> gamma_order(const SampleMatrix& x, int k) {
    const int d = static_cast<int>(x.cols());
    if (d < 2) throw std::invalid_argument("gamma_order: need at least two variables");
    const Eigen::MatrixXd gamma = gamma_matrix(x, k);
    std::vector<Node> remaining(d);
    std::iota(remaining.begin(), remaining.end(), 1);
    std::vector<Node> order;
    while (!remaining.empty()) {
        std::size_t best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < remaining.size(); ++a) {
            double score = std::numeric_limits<double>::infinity();
            for (std::size_t b = 0; b < remaining.size(); ++b)
                if (a != b) score = std::min(score, gamma(remaining[a] - 1, remaining[b] - 1));
            if (score > best_score) {
                best_score = score;
                best = a;
            }
        }
        order.push_back(remaining[best]);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    }
    return order;
}

}  // namespace lsemplus
