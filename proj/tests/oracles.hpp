#pragma once

// Independent reference implementations used only by the tests. None of
// these call into the routines they check.

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "lsemplus/graph.hpp"
#include "lsemplus/rng.hpp"
#include "lsemplus/sample.hpp"

namespace oracle {

using lsemplus::Dag;
using lsemplus::Edge;
using lsemplus::Node;
using lsemplus::NodeSet;

// Every labelled DAG on d nodes: each unordered pair is absent, a->b or b->a.
inline std::vector<Dag> all_dags(int d) {
    std::vector<std::pair<Node, Node>> pairs;
    for (Node a = 1; a <= d; ++a)
        for (Node b = a + 1; b <= d; ++b) pairs.emplace_back(a, b);
    std::size_t total = 1;
    for (std::size_t p = 0; p < pairs.size(); ++p) total *= 3;
    std::vector<Dag> out;
    for (std::size_t code = 0; code < total; ++code) {
        std::vector<Edge> edges;
        std::size_t c = code;
        for (auto [a, b] : pairs) {
            if (c % 3 == 1) edges.push_back({a, b});
            if (c % 3 == 2) edges.push_back({b, a});
            c /= 3;
        }
        // Cycle check by repeated removal of nodes without incoming edges.
        std::vector<int> indeg(d + 1, 0);
        for (const auto& e : edges) ++indeg[e.to];
        std::vector<bool> gone(d + 1, false);
        int removed = 0;
        for (bool progress = true; progress;) {
            progress = false;
            for (Node v = 1; v <= d; ++v)
                if (!gone[v] && indeg[v] == 0) {
                    gone[v] = true;
                    ++removed;
                    progress = true;
                    for (const auto& e : edges)
                        if (e.from == v) --indeg[e.to];
                }
        }
        if (removed == d) out.emplace_back(d, edges);
    }
    return out;
}

inline bool has(const NodeSet& s, Node v) { return std::find(s.begin(), s.end(), v) != s.end(); }

// Descendants of v (inclusive) in the edge list.
inline std::set<Node> descendants_incl(int d, const std::vector<Edge>& edges, Node v) {
    std::set<Node> seen{v};
    std::vector<Node> stack{v};
    while (!stack.empty()) {
        const Node u = stack.back();
        stack.pop_back();
        for (const auto& e : edges)
            if (e.from == u && seen.insert(e.to).second) stack.push_back(e.to);
    }
    (void)d;
    return seen;
}

// d-separation by listing every simple path of the skeleton and applying the
// blocking rules to each interior node.
inline bool d_separated_paths(const Dag& dag, Node i, Node j, const NodeSet& given,
                              const std::vector<Edge>& removed = {}) {
    const int d = dag.size();
    std::vector<Edge> edges;
    for (const auto& e : dag.edges())
        if (std::find(removed.begin(), removed.end(), e) == removed.end()) edges.push_back(e);
    auto directed = [&](Node a, Node b) { return std::find(edges.begin(), edges.end(), Edge{a, b}) != edges.end(); };
    std::vector<std::set<Node>> desc(d + 1);
    for (Node v = 1; v <= d; ++v) desc[v] = descendants_incl(d, edges, v);

    std::vector<Node> path{i};
    std::vector<bool> on_path(d + 1, false);
    on_path[i] = true;
    bool open_found = false;
    std::function<void(Node)> walk = [&](Node u) {
        if (open_found) return;
        if (u == j) {
            for (std::size_t m = 1; m + 1 < path.size(); ++m) {
                const Node prev = path[m - 1], mid = path[m], next = path[m + 1];
                const bool collider = directed(prev, mid) && directed(next, mid);
                if (collider) {
                    bool active = false;
                    for (Node z : given) active = active || desc[mid].count(z);
                    if (!active) return;
                } else if (has(given, mid)) {
                    return;
                }
            }
            open_found = true;
            return;
        }
        for (Node v = 1; v <= d; ++v) {
            if (on_path[v] || !(directed(u, v) || directed(v, u))) continue;
            on_path[v] = true;
            path.push_back(v);
            walk(v);
            path.pop_back();
            on_path[v] = false;
        }
    };
    walk(i);
    return !open_found;
}

// Generic linear-Gaussian model on a DAG: weights b(to, from) with random
// sign and magnitude in [0.5, 1.5], noise variances in [0.5, 1.5].
struct GaussianModel {
    Eigen::MatrixXd b;
    Eigen::VectorXd noise;
};

inline GaussianModel random_gaussian(const Dag& dag, lsemplus::Rng& rng) {
    const int d = dag.size();
    GaussianModel m{Eigen::MatrixXd::Zero(d, d), Eigen::VectorXd(d)};
    for (const auto& e : dag.edges()) {
        const double w = 0.5 + lsemplus::uniform01(rng);
        m.b(e.to - 1, e.from - 1) = lsemplus::uniform01(rng) < 0.5 ? -w : w;
    }
    for (int v = 0; v < d; ++v) m.noise(v) = 0.5 + lsemplus::uniform01(rng);
    return m;
}

inline Eigen::MatrixXd covariance(const GaussianModel& m) {
    const int d = static_cast<int>(m.b.rows());
    const Eigen::MatrixXd a = (Eigen::MatrixXd::Identity(d, d) - m.b).inverse();
    return a * m.noise.asDiagonal() * a.transpose();
}

// Partial correlation of X_i, X_j given Z is zero (population).
inline bool conditionally_independent(const GaussianModel& m, Node i, Node j, const NodeSet& given) {
    const Eigen::MatrixXd s = covariance(m);
    std::vector<int> idx{i - 1, j - 1};
    for (Node z : given) idx.push_back(z - 1);
    Eigen::MatrixXd sub(idx.size(), idx.size());
    for (std::size_t r = 0; r < idx.size(); ++r)
        for (std::size_t c = 0; c < idx.size(); ++c) sub(r, c) = s(idx[r], idx[c]);
    const Eigen::MatrixXd prec = sub.inverse();
    return std::abs(prec(0, 1)) / std::sqrt(prec(0, 0) * prec(1, 1)) < 1e-9;
}

// Does the adjustment formula with set `z` reproduce the distribution of X_j
// under do(X_i = x) for all x? Both sides are Gaussian with mean linear in x,
// so it suffices to compare slope and variance. j in z means the estimate
// claims X_j is unaffected by the intervention.
inline bool adjustment_reproduces_intervention(const GaussianModel& m, Node i, Node j, const NodeSet& z) {
    const int d = static_cast<int>(m.b.rows());
    Eigen::MatrixXd b_do = m.b;
    b_do.row(i - 1).setZero();
    const Eigen::MatrixXd a_do = (Eigen::MatrixXd::Identity(d, d) - b_do).inverse();
    const double true_slope = a_do(j - 1, i - 1);
    double true_var = 0.0;
    for (int k = 0; k < d; ++k)
        if (k != i - 1) true_var += a_do(j - 1, k) * a_do(j - 1, k) * m.noise(k);

    const Eigen::MatrixXd s = covariance(m);
    double slope = 0.0, var = 0.0;
    if (has(z, j)) {
        var = s(j - 1, j - 1);
    } else {
        std::vector<int> idx{i - 1};
        for (Node v : z) idx.push_back(v - 1);
        const auto p = static_cast<Eigen::Index>(idx.size());
        Eigen::MatrixXd sxx(p, p);
        Eigen::VectorXd sxy(p);
        for (Eigen::Index r = 0; r < p; ++r) {
            sxy(r) = s(idx[r], j - 1);
            for (Eigen::Index c = 0; c < p; ++c) sxx(r, c) = s(idx[r], idx[c]);
        }
        const Eigen::VectorXd beta = sxx.ldlt().solve(sxy);
        const double residual = s(j - 1, j - 1) - beta.dot(sxy);
        const Eigen::VectorXd bz = beta.tail(p - 1);
        const Eigen::MatrixXd szz = sxx.bottomRightCorner(p - 1, p - 1);
        slope = beta(0);
        var = residual + bz.dot(szz * bz);
    }
    const double tol = 1e-8 * (1.0 + std::abs(true_var));
    return std::abs(slope - true_slope) < tol && std::abs(var - true_var) < tol;
}

// Structural intervention distance from first principles.
inline long sid_by_intervention(const Dag& truth, const Dag& estimate, lsemplus::Rng& rng) {
    const GaussianModel m = random_gaussian(truth, rng);
    long wrong = 0;
    for (Node i = 1; i <= truth.size(); ++i)
        for (Node j = 1; j <= truth.size(); ++j)
            if (i != j && !adjustment_reproduces_intervention(m, i, j, estimate.parents(i))) ++wrong;
    return wrong;
}

// Scaling estimators written out directly from the definitions.
struct NaiveScalings {
    double scaled;
    double unscaled;
};

inline NaiveScalings naive_pair(const Eigen::MatrixXd& x, Node i, Node j, const NodeSet& identified, double a, int k) {
    const Eigen::Index n = x.rows();
    std::vector<int> cols{j - 1};
    for (Node r : identified) cols.push_back(r - 1);
    std::vector<double> radius(n);
    for (Eigen::Index l = 0; l < n; ++l) {
        double r2 = x(l, i - 1) * x(l, i - 1);
        for (int c : cols) r2 += a * a * x(l, c) * x(l, c);
        radius[l] = std::sqrt(r2);
    }
    std::vector<double> sorted = radius;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const double threshold = sorted[k - 1];
    double scaled = 0.0, unscaled = 0.0;
    for (Eigen::Index l = 0; l < n; ++l) {
        if (radius[l] < threshold) continue;
        double ws = std::pow(x(l, i - 1) / radius[l], 2), wu = ws;
        for (int c : cols) {
            ws = std::max(ws, std::pow(a * x(l, c) / radius[l], 2));
            wu = std::max(wu, std::pow(x(l, c) / radius[l], 2));
        }
        scaled += ws;
        unscaled += wu;
    }
    const double pre = (1.0 + a * a * static_cast<double>(cols.size())) / k;
    return {pre * scaled, pre * unscaled};
}

inline double naive_init(const Eigen::MatrixXd& x, const NodeSet& indices, int k) {
    const Eigen::Index n = x.rows();
    std::vector<double> radius(n);
    for (Eigen::Index l = 0; l < n; ++l) {
        double r2 = 0.0;
        for (Node v : indices) r2 += x(l, v - 1) * x(l, v - 1);
        radius[l] = std::sqrt(r2);
    }
    std::vector<double> sorted = radius;
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double total = 0.0;
    for (Eigen::Index l = 0; l < n; ++l) {
        if (radius[l] < sorted[k - 1]) continue;
        double w = 0.0;
        for (Node v : indices) w = std::max(w, std::pow(x(l, v - 1) / radius[l], 2));
        total += w;
    }
    return static_cast<double>(indices.size()) / k * total;
}

}  // namespace oracle
