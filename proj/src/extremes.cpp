#include "lsemplus/extremes.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace lsemplus {

double AngularMeasure::total_mass() const {
    return std::accumulate(masses.begin(), masses.end(), 0.0);
}

AngularMeasure angular_measure(const CoefficientMatrix& a, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("angular_measure: alpha must be positive");
    AngularMeasure h;
    for (Eigen::Index j = 0; j < a.values.cols(); ++j) {
        const Eigen::VectorXd column = a.values.col(j);
        if ((column.array() < 0.0).any()) throw std::invalid_argument("angular_measure: negative coefficient");
        const double norm = column.norm();
        if (!(norm > 0.0)) throw std::invalid_argument("angular_measure: zero column " + std::to_string(j + 1));
        h.atoms.push_back(column / norm);
        h.masses.push_back(std::pow(norm, alpha));
    }
    return h;
}

namespace {

void check_index(const CoefficientMatrix& a, Node i) {
    if (i < 1 || i > a.size()) throw std::out_of_range("node " + std::to_string(i) + " out of range");
}

void check_disjoint(Node i, Node j, const NodeSet& identified) {
    if (i == j) throw std::invalid_argument("scaling: i and j must differ");
    for (Node r : identified)
        if (r == i || r == j) throw std::invalid_argument("scaling: i, j must not belong to the identified set");
}

}  // namespace

double theoretical_scaling(const CoefficientMatrix& a, Node i, Node j) {
    check_index(a, i);
    check_index(a, j);
    return a.values.row(i - 1).dot(a.values.row(j - 1));
}

double theoretical_max_scaling(const CoefficientMatrix& a, const NodeSet& nodes) {
    if (nodes.empty()) throw std::invalid_argument("theoretical_max_scaling: empty node set");
    for (Node r : nodes) check_index(a, r);
    double total = 0.0;
    for (Eigen::Index k = 0; k < a.values.cols(); ++k) {
        double best = 0.0;
        for (Node r : nodes) best = std::max(best, a.values(r - 1, k) * a.values(r - 1, k));
        total += best;
    }
    return total;
}

double theoretical_scaled_max_scaling(const CoefficientMatrix& a, Node i, Node j, const NodeSet& identified,
                                      double scale) {
    check_index(a, i);
    check_index(a, j);
    for (Node r : identified) check_index(a, r);
    check_disjoint(i, j, identified);
    if (!(scale > 0.0)) throw std::invalid_argument("theoretical_scaled_max_scaling: scale must be positive");
    const double s2 = scale * scale;
    double total = 0.0;
    for (Eigen::Index k = 0; k < a.values.cols(); ++k) {
        double rest = a.values(j - 1, k) * a.values(j - 1, k);
        for (Node r : identified) rest = std::max(rest, a.values(r - 1, k) * a.values(r - 1, k));
        total += std::max(a.values(i - 1, k) * a.values(i - 1, k), s2 * rest);
    }
    return total;
}

SampleMatrix pit_frechet2(const SampleMatrix& raw) {
    const Eigen::Index n = raw.rows();
    if (n < 1) throw std::invalid_argument("pit_frechet2: empty sample");
    SampleMatrix out{Eigen::MatrixXd(n, raw.cols()), Margins::frechet2};
    std::vector<double> sorted(n);
    const double denom = static_cast<double>(n) + 1.0;
    for (Eigen::Index c = 0; c < raw.cols(); ++c) {
        for (Eigen::Index r = 0; r < n; ++r) sorted[r] = raw.values(r, c);
        std::sort(sorted.begin(), sorted.end());
        for (Eigen::Index r = 0; r < n; ++r) {
            const auto rank = std::upper_bound(sorted.begin(), sorted.end(), raw.values(r, c)) - sorted.begin();
            out.values(r, c) = 1.0 / std::sqrt(-std::log(static_cast<double>(rank) / denom));
        }
    }
    return out;
}

AngularRepresentation angular_decomposition(const SampleMatrix& x) {
    AngularRepresentation rep{Eigen::VectorXd(x.rows()), Eigen::MatrixXd(x.rows(), x.cols())};
    for (Eigen::Index r = 0; r < x.rows(); ++r) {
        const double radius = x.values.row(r).norm();
        if (!(radius > 0.0)) throw std::invalid_argument("angular_decomposition: zero row " + std::to_string(r + 1));
        rep.radii(r) = radius;
        rep.angles.row(r) = x.values.row(r) / radius;
    }
    return rep;
}

int default_threshold(int n) {
    return std::max(1, static_cast<int>(std::floor(std::pow(static_cast<double>(n), 0.4))));
}

namespace detail {

namespace {

void check_sample_node(const SampleMatrix& x, Node i) {
    if (i < 1 || i > x.cols()) throw std::out_of_range("node " + std::to_string(i) + " out of range");
}

void check_threshold(const SampleMatrix& x, int k) {
    if (k < 1 || k > x.rows())
        throw std::invalid_argument("threshold k=" + std::to_string(k) + " outside 1.." + std::to_string(x.rows()));
}

// Squared radius of the k-th largest row.
double kth_largest(std::vector<double>& scratch, int k) {
    auto nth = scratch.begin() + (k - 1);
    std::nth_element(scratch.begin(), nth, scratch.end(), std::greater<>());
    return *nth;
}

}  // namespace

BlockSummary summarize_block(const SampleMatrix& x, const NodeSet& block) {
    BlockSummary s{Eigen::VectorXd::Zero(x.rows()), Eigen::VectorXd::Zero(x.rows()), static_cast<int>(block.size())};
    for (Node r : block) {
        check_sample_node(x, r);
        const auto col = x.values.col(r - 1);
        for (Eigen::Index l = 0; l < x.rows(); ++l) {
            const double v = col(l) * col(l);
            s.max_sq(l) = std::max(s.max_sq(l), v);
            s.sum_sq(l) += v;
        }
    }
    return s;
}

PairEstimate pair_estimate(const SampleMatrix& x, Node i, Node j, const BlockSummary& block, double scale, int k,
                           std::vector<double>& scratch) {
    check_sample_node(x, i);
    check_sample_node(x, j);
    check_threshold(x, k);
    if (!(scale > 0.0)) throw std::invalid_argument("scale must be positive");
    const Eigen::Index n = x.rows();
    const double s2 = scale * scale;
    const auto xi = x.values.col(i - 1);
    const auto xj = x.values.col(j - 1);

    scratch.resize(n);
    for (Eigen::Index l = 0; l < n; ++l) scratch[l] = xi(l) * xi(l) + s2 * (xj(l) * xj(l) + block.sum_sq(l));
    std::vector<double> radii_sq(scratch);
    const double threshold = kth_largest(scratch, k);
    if (!(threshold > 0.0)) throw std::invalid_argument("pair estimate: fewer than k nonzero rows");

    double scaled = 0.0;
    double unscaled = 0.0;
    for (Eigen::Index l = 0; l < n; ++l) {
        if (radii_sq[l] < threshold) continue;
        const double vi = xi(l) * xi(l);
        const double rest = std::max(xj(l) * xj(l), block.max_sq(l));
        scaled += std::max(vi, s2 * rest) / radii_sq[l];
        unscaled += std::max(vi, rest) / radii_sq[l];
    }
    const double prefactor = (1.0 + s2 * (block.size + 1)) / k;
    return {prefactor * scaled, prefactor * unscaled};
}

}  // namespace detail

double estimate_scaling_scaled(const SampleMatrix& x, Node i, Node j, const NodeSet& identified, double scale,
                               int k) {
    check_disjoint(i, j, identified);
    std::vector<double> scratch;
    return detail::pair_estimate(x, i, j, detail::summarize_block(x, identified), scale, k, scratch).scaled;
}

double estimate_scaling_unscaled(const SampleMatrix& x, Node i, Node j, const NodeSet& identified, double scale,
                                 int k) {
    check_disjoint(i, j, identified);
    std::vector<double> scratch;
    return detail::pair_estimate(x, i, j, detail::summarize_block(x, identified), scale, k, scratch).unscaled;
}

double estimate_scaling_init(const SampleMatrix& x, const NodeSet& indices, int k) {
    if (indices.empty()) throw std::invalid_argument("estimate_scaling_init: empty index set");
    if (k < 1 || k > x.rows()) throw std::invalid_argument("estimate_scaling_init: k out of range");
    const detail::BlockSummary block = detail::summarize_block(x, indices);
    std::vector<double> scratch(block.sum_sq.data(), block.sum_sq.data() + block.sum_sq.size());
    auto nth = scratch.begin() + (k - 1);
    std::nth_element(scratch.begin(), nth, scratch.end(), std::greater<>());
    const double threshold = *nth;
    if (!(threshold > 0.0)) throw std::invalid_argument("estimate_scaling_init: fewer than k nonzero rows");
    double total = 0.0;
    for (Eigen::Index l = 0; l < x.rows(); ++l)
        if (block.sum_sq(l) >= threshold) total += block.max_sq(l) / block.sum_sq(l);
    return static_cast<double>(indices.size()) / k * total;
}

}  // namespace lsemplus
