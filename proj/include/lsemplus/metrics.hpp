#pragma once

#include <cstdint>
#include <vector>

#include "lsemplus/discovery.hpp"
#include "lsemplus/graph.hpp"
#include "lsemplus/rng.hpp"
#include "lsemplus/sample.hpp"

namespace lsemplus {

struct SidScore {
    long raw = 0;           // wrongly inferred intervention pairs
    double normalized = 0;  // raw / (d (d - 1)); 0 when d == 1
};

/// Fully connected DAG in which every node points to every node that comes
/// later in `ancestral_order` (roots first).
Dag full_dag_from_order(const std::vector<Node>& ancestral_order);

/// True iff pa_est(i) adjusts correctly for the effect of do(X_i) on X_j in
/// `truth`. Exposed for tests and diagnostics.
bool parent_adjustment_valid(const Dag& truth, const Dag& estimate, Node i, Node j);

/// Structural intervention distance over ordered pairs (i, j), i != j.
SidScore sid(const Dag& truth, const Dag& estimate);

struct BootstrapReplicate {
    int index = 0;
    std::uint64_t seed = 0;
    SidScore score;
};

/// B row-resamples of x (with replacement, size n). Replicate b draws its
/// rows from a stream seeded with derive_seed(seed, b). Each resample is
/// standardized, ordered, converted to a full DAG and scored against truth.
std::vector<BootstrapReplicate> bootstrap_sid(const SampleMatrix& x, const Dag& truth, const AlgoParams& params,
                                              int replicates, std::uint64_t seed);

/// Resampled row indices (0-based) for one bootstrap replicate.
std::vector<Eigen::Index> bootstrap_rows(Eigen::Index n, Rng& rng);

}  // namespace lsemplus
