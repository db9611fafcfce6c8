#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lsemplus/graph.hpp"
#include "lsemplus/sample.hpp"

namespace lsemplus {

/// Empirical causal tail coefficient: mean of F_j(X_j) over the k rows with
/// the largest X_i (ties by row index), with F_j(x) = rank / (n + 1).
double causal_tail_coefficient(const SampleMatrix& x, Node i, Node j, int k);

/// d x d matrix of causal tail coefficients; NaN on the diagonal.
Eigen::MatrixXd gamma_matrix(const SampleMatrix& x, int k);

/// Gamma-baseline ordering (not EASE): repeatedly picks the remaining node
/// p maximizing min_{q != p remaining} Gamma_pq, smallest label on ties.
/// Returns an ancestral order (roots first).
std::vector<Node> gamma_order(const SampleMatrix& x, int k);

}  // namespace lsemplus
