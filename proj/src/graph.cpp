#include "lsemplus/graph.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

namespace lsemplus {

Dag::Dag(int d, std::vector<Edge> edges)
    : d_(d), edges_(std::move(edges)), parents_(d > 0 ? d : 0), children_(d > 0 ? d : 0) {
    if (d < 1) throw std::invalid_argument("Dag: node count must be positive");
    std::sort(edges_.begin(), edges_.end());
    for (std::size_t e = 0; e < edges_.size(); ++e) {
        const auto [from, to] = edges_[e];
        check_node(from);
        check_node(to);
        if (from == to) throw std::invalid_argument("Dag: self-loop at node " + std::to_string(from));
        if (e > 0 && edges_[e - 1] == edges_[e])
            throw std::invalid_argument("Dag: duplicate edge " + std::to_string(from) + " -> " +
                                        std::to_string(to));
        parents_[to - 1].push_back(from);
        children_[from - 1].push_back(to);
    }
    for (auto& p : parents_) std::sort(p.begin(), p.end());

    // Kahn's algorithm, smallest available label first.
    std::vector<int> indegree(d_);
    for (int i = 0; i < d_; ++i) indegree[i] = static_cast<int>(parents_[i].size());
    std::priority_queue<Node, std::vector<Node>, std::greater<>> ready;
    for (int i = 0; i < d_; ++i)
        if (indegree[i] == 0) ready.push(i + 1);
    while (!ready.empty()) {
        const Node v = ready.top();
        ready.pop();
        topo_.push_back(v);
        for (Node c : children_[v - 1])
            if (--indegree[c - 1] == 0) ready.push(c);
    }
    if (static_cast<int>(topo_.size()) != d_) throw std::invalid_argument("Dag: graph has a directed cycle");

    reach_.assign(static_cast<std::size_t>(d_) * d_, 0);
    // Reverse topological sweep: reach(v) = children(v) plus their reach.
    for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
        const std::size_t row = static_cast<std::size_t>(*it - 1) * d_;
        for (Node c : children_[*it - 1]) {
            reach_[row + c - 1] = 1;
            const std::size_t crow = static_cast<std::size_t>(c - 1) * d_;
            for (int t = 0; t < d_; ++t) reach_[row + t] |= reach_[crow + t];
        }
    }
}

void Dag::check_node(Node i) const {
    if (i < 1 || i > d_)
        throw std::out_of_range("node " + std::to_string(i) + " outside 1.." + std::to_string(d_));
}

const NodeSet& Dag::parents(Node i) const {
    check_node(i);
    return parents_[i - 1];
}

const NodeSet& Dag::children(Node i) const {
    check_node(i);
    return children_[i - 1];
}

bool Dag::has_edge(Node from, Node to) const {
    const auto& p = parents(to);
    return std::binary_search(p.begin(), p.end(), from);
}

bool Dag::is_ancestor(Node j, Node i) const {
    check_node(j);
    check_node(i);
    return reach_[static_cast<std::size_t>(j - 1) * d_ + (i - 1)] != 0;
}

NodeSet ancestors(const Dag& dag, Node i) {
    dag.check_node(i);
    NodeSet out;
    for (Node j = 1; j <= dag.size(); ++j)
        if (dag.is_ancestor(j, i)) out.push_back(j);
    return out;
}

NodeSet descendants(const Dag& dag, Node i) {
    dag.check_node(i);
    NodeSet out;
    for (Node j = 1; j <= dag.size(); ++j)
        if (dag.is_ancestor(i, j)) out.push_back(j);
    return out;
}

NodeSet source_nodes(const Dag& dag) {
    NodeSet out;
    for (Node i = 1; i <= dag.size(); ++i)
        if (dag.parents(i).empty()) out.push_back(i);
    return out;
}

bool is_well_ordered(const Dag& dag) {
    return std::all_of(dag.edges().begin(), dag.edges().end(),
                       [](const Edge& e) { return e.from > e.to; });
}

Dag relabel(const Dag& dag, const std::vector<Node>& permutation) {
    if (static_cast<int>(permutation.size()) != dag.size())
        throw std::invalid_argument("relabel: permutation size mismatch");
    std::vector<Edge> edges;
    edges.reserve(dag.edge_count());
    for (const auto& e : dag.edges()) edges.push_back({permutation[e.from - 1], permutation[e.to - 1]});
    return Dag(dag.size(), std::move(edges));
}

Relabeling relabel_well_ordered(const Dag& dag) {
    const int d = dag.size();
    // Kahn's algorithm taking the largest available label first; the m-th
    // emitted node receives label d - m. A well-ordered input maps to itself.
    std::vector<int> indegree(d);
    for (Node i = 1; i <= d; ++i) indegree[i - 1] = static_cast<int>(dag.parents(i).size());
    std::priority_queue<Node> ready;
    for (Node i = 1; i <= d; ++i)
        if (indegree[i - 1] == 0) ready.push(i);
    std::vector<Node> permutation(d);
    int next = d;
    while (!ready.empty()) {
        const Node v = ready.top();
        ready.pop();
        permutation[v - 1] = next--;
        for (Node c : dag.children(v))
            if (--indegree[c - 1] == 0) ready.push(c);
    }
    return {relabel(dag, permutation), std::move(permutation)};
}

std::vector<Path> enumerate_paths(const Dag& dag, Node from, Node to, std::size_t cap) {
    dag.check_node(from);
    dag.check_node(to);
    if (from == to) throw std::invalid_argument("enumerate_paths: endpoints must differ");
    std::vector<Path> paths;
    if (!dag.is_ancestor(from, to)) return paths;

    Path current{from};
    // Depth-first, pruning children that cannot reach the target.
    auto visit = [&](auto&& self, Node v) -> void {
        for (Node c : dag.children(v)) {
            if (c == to) {
                if (paths.size() >= cap) throw std::length_error("enumerate_paths: path cap exceeded");
                current.push_back(c);
                paths.push_back(current);
                current.pop_back();
            } else if (dag.is_ancestor(c, to)) {
                current.push_back(c);
                self(self, c);
                current.pop_back();
            }
        }
    };
    visit(visit, from);
    return paths;
}

namespace {

// Directed reachability from `start` to `target` that never enters `avoid`.
bool reaches_avoiding(const Dag& dag, Node start, Node target, Node avoid) {
    std::vector<char> seen(dag.size() + 1, 0);
    std::vector<Node> stack{start};
    seen[start] = 1;
    while (!stack.empty()) {
        const Node v = stack.back();
        stack.pop_back();
        for (Node c : dag.children(v)) {
            if (c == avoid || seen[c]) continue;
            if (c == target) return true;
            seen[c] = 1;
            stack.push_back(c);
        }
    }
    return false;
}

}  // namespace

bool is_confounder(const Dag& dag, Node i, Node j, Node k) {
    dag.check_node(i);
    dag.check_node(j);
    dag.check_node(k);
    if (i == j || i == k || j == k) throw std::invalid_argument("is_confounder: nodes must be distinct");
    return reaches_avoiding(dag, i, j, k) && reaches_avoiding(dag, i, k, j);
}

bool d_separated(const Dag& dag, Node i, Node j, const NodeSet& given) {
    return d_separated(dag, i, j, given, {});
}

bool d_separated(const Dag& dag, Node i, Node j, const NodeSet& given, const std::vector<Edge>& removed) {
    const int d = dag.size();
    dag.check_node(i);
    dag.check_node(j);
    if (i == j) throw std::invalid_argument("d_separated: endpoints must differ");
    std::vector<char> in_given(d + 1, 0);
    for (Node z : given) {
        dag.check_node(z);
        if (z == i || z == j) throw std::invalid_argument("d_separated: endpoint in conditioning set");
        in_given[z] = 1;
    }

    std::vector<NodeSet> parents(d + 1), children(d + 1);
    for (const auto& e : dag.edges()) {
        if (std::find(removed.begin(), removed.end(), e) != removed.end()) continue;
        parents[e.to].push_back(e.from);
        children[e.from].push_back(e.to);
    }

    // Nodes that are in `given` or have a descendant in it.
    std::vector<char> opens_collider(d + 1, 0);
    std::vector<Node> stack;
    for (Node z : given)
        if (!opens_collider[z]) {
            opens_collider[z] = 1;
            stack.push_back(z);
        }
    while (!stack.empty()) {
        const Node v = stack.back();
        stack.pop_back();
        for (Node p : parents[v])
            if (!opens_collider[p]) {
                opens_collider[p] = 1;
                stack.push_back(p);
            }
    }

    // Bayes ball over (node, arrived-from-child) states.
    std::vector<char> seen_up(d + 1, 0), seen_down(d + 1, 0);
    std::vector<std::pair<Node, bool>> queue{{i, true}};
    while (!queue.empty()) {
        const auto [v, up] = queue.back();
        queue.pop_back();
        if (up ? seen_up[v] : seen_down[v]) continue;
        (up ? seen_up[v] : seen_down[v]) = 1;
        if (v == j && !in_given[v]) return false;
        if (up) {
            if (in_given[v]) continue;
            for (Node p : parents[v]) queue.emplace_back(p, true);
            for (Node c : children[v]) queue.emplace_back(c, false);
        } else {
            if (!in_given[v])
                for (Node c : children[v]) queue.emplace_back(c, false);
            if (opens_collider[v])
                for (Node p : parents[v]) queue.emplace_back(p, true);
        }
    }
    return true;
}

Dag random_dag(int d, double p, Rng& rng) {
    if (d < 1) throw std::invalid_argument("random_dag: d must be positive");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("random_dag: p must lie in [0, 1]");
    std::vector<Edge> edges;
    for (Node i = 1; i <= d; ++i)
        for (Node j = i + 1; j <= d; ++j)
            if (uniform01(rng) < p) edges.push_back({j, i});
    return Dag(d, std::move(edges));
}

}  // namespace lsemplus
