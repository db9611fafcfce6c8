#include "lsemplus/metrics.hpp"

#include <algorithm>
#include <stdexcept>

#include "lsemplus/extremes.hpp"

namespace lsemplus {

Dag full_dag_from_order(const std::vector<Node>& ancestral_order) {
    const int d = static_cast<int>(ancestral_order.size());
    if (d < 1) throw std::invalid_argument("full_dag_from_order: empty ordering");
    std::vector<char> seen(d + 1, 0);
    for (Node v : ancestral_order) {
        if (v < 1 || v > d || seen[v]) throw std::invalid_argument("full_dag_from_order: not a permutation");
        seen[v] = 1;
    }
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(d) * (d - 1) / 2);
    for (int a = 0; a < d; ++a)
        for (int b = a + 1; b < d; ++b) edges.push_back({ancestral_order[a], ancestral_order[b]});
    return Dag(d, std::move(edges));
}

bool parent_adjustment_valid(const Dag& truth, const Dag& estimate, Node i, Node j) {
    if (truth.size() != estimate.size()) throw std::invalid_argument("parent_adjustment_valid: size mismatch");
    if (i == j) throw std::invalid_argument("parent_adjustment_valid: i and j must differ");
    const NodeSet& adjust = estimate.parents(i);

    // A parent j means the estimate claims do(X_i) leaves X_j unchanged.
    if (std::binary_search(adjust.begin(), adjust.end(), j)) return !truth.is_ancestor(i, j);
    if (!truth.is_ancestor(i, j)) return d_separated(truth, i, j, adjust);

    // Nodes other than i on a directed path i ~> j.
    const int d = truth.size();
    std::vector<char> on_causal_path(d + 1, 0);
    for (Node w = 1; w <= d; ++w)
        if (w != i && truth.is_ancestor(i, w) && (w == j || truth.is_ancestor(w, j))) on_causal_path[w] = 1;

    // Forbidden: causal-path nodes and their descendants.
    for (Node z : adjust) {
        if (on_causal_path[z]) return false;
        for (Node w = 1; w <= d; ++w)
            if (on_causal_path[w] && truth.is_ancestor(w, z)) return false;
    }

    // Proper back-door graph: drop the first edge of every causal path.
    std::vector<Edge> removed;
    for (Node c : truth.children(i))
        if (on_causal_path[c]) removed.push_back({i, c});
    return d_separated(truth, i, j, adjust, removed);
}

SidScore sid(const Dag& truth, const Dag& estimate) {
    if (truth.size() != estimate.size()) throw std::invalid_argument("sid: DAGs have different node counts");
    const int d = truth.size();
    SidScore score;
    for (Node i = 1; i <= d; ++i)
        for (Node j = 1; j <= d; ++j)
            if (i != j && !parent_adjustment_valid(truth, estimate, i, j)) ++score.raw;
    score.normalized = d > 1 ? static_cast<double>(score.raw) / (static_cast<double>(d) * (d - 1)) : 0.0;
    return score;
}

std::vector<Eigen::Index> bootstrap_rows(Eigen::Index n, Rng& rng) {
    std::vector<Eigen::Index> rows(n);
    for (auto& r : rows) {
        r = static_cast<Eigen::Index>(uniform01(rng) * static_cast<double>(n));
        if (r >= n) r = n - 1;
    }
    return rows;
}

std::vector<BootstrapReplicate> bootstrap_sid(const SampleMatrix& x, const Dag& truth, const AlgoParams& params,
                                              int replicates, std::uint64_t seed) {
    if (replicates < 1) throw std::invalid_argument("bootstrap_sid: need at least one replicate");
    if (x.cols() != truth.size()) throw std::invalid_argument("bootstrap_sid: sample and DAG dimensions differ");
    std::vector<BootstrapReplicate> out;
    out.reserve(replicates);
    for (int b = 0; b < replicates; ++b) {
        const std::uint64_t replicate_seed = derive_seed(seed, static_cast<std::uint64_t>(b));
        Rng rng(replicate_seed);
        const auto rows = bootstrap_rows(x.rows(), rng);
        SampleMatrix resample{Eigen::MatrixXd(x.rows(), x.cols()), Margins::raw};
        for (Eigen::Index r = 0; r < x.rows(); ++r) resample.values.row(r) = x.values.row(rows[r]);
        const OrderingResult order = causal_order(pit_frechet2(resample), params);
        out.push_back({b, replicate_seed, sid(truth, full_dag_from_order(order.ancestral_order()))});
    }
    return out;
}

}  // namespace lsemplus
