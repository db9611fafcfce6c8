#pragma once

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lsemplus/graph.hpp"
#include "lsemplus/lsem.hpp"
#include "lsemplus/sample.hpp"

namespace lsemplus {

struct AlgoParams {
    double a = 1.3;        // rescaling factor, > 1
    double epsilon = 0.4;  // relative tolerance for accepting columns
    int k = 0;             // number of upper order statistics; 0 means floor(n^0.4)
};

/// d x d matrix of scaling contrasts. Rows/columns of identified nodes and
/// the diagonal hold +infinity.
struct DeltaMatrix {
    Eigen::MatrixXd values;

    int size() const { return static_cast<int>(values.rows()); }
    double operator()(Node i, Node j) const { return values(i - 1, j - 1); }
};

/// Empirical contrast matrix for the current identified set:
///   Delta_ij = s2(M_{i,aj,aI}) - s2(M_{i,j,I}) - (a^2 - 1) s2(M_{j,I}).
/// Expects Frechet(2) margins.
DeltaMatrix delta_matrix(const SampleMatrix& x, const NodeSet& identified, const AlgoParams& params);

/// Exact contrast matrix computed from a standardized coefficient matrix.
/// Throws when `identified` is not closed under ancestors.
DeltaMatrix theoretical_delta(const CoefficientMatrix& abar, const NodeSet& identified, double a);

/// Per-column minimum over rows; +inf for identified columns. A lone
/// remaining column has no finite entries and gets 0.
Eigen::VectorXd column_minima(const DeltaMatrix& delta, const NodeSet& identified);

/// epsilon * |max over unidentified columns of the column minima|.
double epsilon_threshold(const DeltaMatrix& delta, const NodeSet& identified, double epsilon);

struct Selection {
    Eigen::VectorXd column_minima;
    Eigen::VectorXd deltas;  // +inf for identified nodes
    std::vector<Node> selected;
};

/// Selects unidentified columns whose shifted minimum lies within
/// `eps_hat` of the best one, sorted by shifted minimum (ties by label).
Selection select_nodes(const DeltaMatrix& delta, const NodeSet& identified, double eps_hat);

struct OrderingStep {
    NodeSet identified;  // state before the step
    DeltaMatrix delta;
    Eigen::VectorXd column_minima;
    double epsilon_hat = 0.0;
    Eigen::VectorXd deltas;
    std::vector<Node> selected;
};

struct OrderingResult {
    /// Identified set after the last step. New selections are prepended, so
    /// the first entry was identified last (most downstream).
    std::vector<Node> ordering;
    std::vector<OrderingStep> steps;
    AlgoParams params;
    bool auto_standardized = false;
    std::vector<std::string> warnings;

    /// `ordering` reversed: roots first.
    std::vector<Node> ancestral_order() const;
};

using DeltaProvider = std::function<DeltaMatrix(const NodeSet& identified)>;

/// Shared driver: repeatedly builds Delta for the current identified set,
/// selects nodes and prepends them until every node is ordered.
OrderingResult order_with(int d, double epsilon, const DeltaProvider& provider);

/// Causal order estimated from data. Raw margins are standardized with
/// pit_frechet2 first (recorded as a warning).
OrderingResult causal_order(const SampleMatrix& x, const AlgoParams& params);

/// Same procedure driven by theoretical_delta. Entries within 1e-12 of zero
/// are set to exactly zero so that ties between sources survive rounding.
OrderingResult causal_order_oracle(const CoefficientMatrix& abar, double a, double epsilon);

}  // namespace lsemplus
