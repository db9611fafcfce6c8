#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "lsemplus/rng.hpp"

namespace lsemplus {

/// Node label, 1-based on every public interface.
using Node = int;
using NodeSet = std::vector<Node>;

struct Edge {
    Node from;
    Node to;
    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Directed path l0 -> l1 -> ... -> lm, stored as its node sequence.
using Path = std::vector<Node>;

inline constexpr std::size_t kDefaultPathCap = 1'000'000;

/// Immutable directed acyclic graph on nodes {1, ..., d}.
///
/// Construction validates labels, rejects self-loops, duplicate edges and
/// cycles, and precomputes the ancestor relation so that reachability
/// queries are O(1).
class Dag {
public:
    explicit Dag(int d, std::vector<Edge> edges = {});

    int size() const { return d_; }
    const std::vector<Edge>& edges() const { return edges_; }
    std::size_t edge_count() const { return edges_.size(); }

    const NodeSet& parents(Node i) const;
    const NodeSet& children(Node i) const;
    bool has_edge(Node from, Node to) const;

    /// True iff there is a directed path j ~> i of length >= 1.
    bool is_ancestor(Node j, Node i) const;

    /// A topological order (every parent precedes its children).
    const std::vector<Node>& topological_order() const { return topo_; }

    void check_node(Node i) const;

private:
    int d_;
    std::vector<Edge> edges_;
    std::vector<NodeSet> parents_;
    std::vector<NodeSet> children_;
    std::vector<unsigned char> reach_;  // reach_[(j-1)*d + (i-1)] : j ~> i
    std::vector<Node> topo_;
};

NodeSet ancestors(const Dag& dag, Node i);
NodeSet descendants(const Dag& dag, Node i);
NodeSet source_nodes(const Dag& dag);

/// Every edge j -> i has j > i.
bool is_well_ordered(const Dag& dag);

struct Relabeling {
    Dag dag;
    /// permutation[old - 1] is the new label of node `old`.
    std::vector<Node> permutation;
};

/// Relabels nodes so the result is well-ordered. Already well-ordered input
/// yields the identity permutation.
Relabeling relabel_well_ordered(const Dag& dag);

/// Applies `permutation` (old -> new, 1-based values) to every edge.
Dag relabel(const Dag& dag, const std::vector<Node>& permutation);

/// All directed paths from `from` to `to`. Throws once more than `cap`
/// paths have been found.
std::vector<Path> enumerate_paths(const Dag& dag, Node from, Node to,
                                  std::size_t cap = kDefaultPathCap);

/// i is a confounder of j and k: some path i ~> j avoids k and some path
/// i ~> k avoids j.
bool is_confounder(const Dag& dag, Node i, Node j, Node k);

/// d-separation of i and j given `given`, by Bayes-ball reachability.
bool d_separated(const Dag& dag, Node i, Node j, const NodeSet& given);

/// Same test on the graph with the listed edges deleted.
bool d_separated(const Dag& dag, Node i, Node j, const NodeSet& given,
                 const std::vector<Edge>& removed);

/// Well-ordered random DAG: each pair (j, i), j > i, is an edge j -> i with
/// probability p. Draws happen row-major over the upper triangle
/// (i = 1..d, j = i+1..d).
Dag random_dag(int d, double p, Rng& rng);

}  // namespace lsemplus
