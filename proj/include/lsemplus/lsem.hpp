#pragma once

#include <Eigen/Dense>

#include "lsemplus/graph.hpp"
#include "lsemplus/rng.hpp"
#include "lsemplus/sample.hpp"

namespace lsemplus {

/// Linear structural equation model with positive weights on a DAG:
///   X_i = sum_{j in pa(i)} c_ij X_j + s_ii Z_i.
///
/// `edge_weights(i-1, j-1)` holds c_ij for the edge j -> i and is zero
/// elsewhere; `innovation_weights(i-1)` holds s_ii.
struct LsemModel {
    Dag dag;
    Eigen::MatrixXd edge_weights;
    Eigen::VectorXd innovation_weights;
    double alpha = 2.0;
};

/// Builds a model and checks its invariants (sparsity matches the DAG,
/// positive edge and innovation weights, alpha > 0).
LsemModel make_model(Dag dag, Eigen::MatrixXd edge_weights, Eigen::VectorXd innovation_weights,
                     double alpha = 2.0);

/// Innovation coefficient matrix A with X = A Z. a_ij sums the weights of
/// all paths j ~> i, a_ii = s_ii.
struct CoefficientMatrix {
    Eigen::MatrixXd values;
    bool standardized = false;

    int size() const { return static_cast<int>(values.rows()); }
    double operator()(Node i, Node j) const { return values(i - 1, j - 1); }
};

/// A = (I - C)^{-1} S via the finite Neumann series sum_{m<d} C^m S.
CoefficientMatrix coefficient_matrix(const LsemModel& model);

/// Same matrix computed by summing path weights over enumerated paths.
CoefficientMatrix coefficient_matrix_paths(const LsemModel& model, std::size_t path_cap = kDefaultPathCap);

/// Row-wise alpha-normalisation: abar_ij = (a_ij^alpha / sum_k a_ik^alpha)^(1/alpha).
CoefficientMatrix standardize(const CoefficientMatrix& a, double alpha);

/// a_ij >= a_ik a_kj / a_kk for every triple, up to `slack`.
bool verify_path_inequality(const CoefficientMatrix& a, double slack = 1e-12);

/// Random model on random_dag(d, p): nonzero c_ij and all s_ii are
/// independent Uniform[0.1, 1.5]. Edge weights are drawn in the DAG's
/// sorted edge order, then the d innovation weights.
LsemModel random_lsem(int d, double p, Rng& rng, double alpha = 2.0);

/// n rows of X = abar Z with Z_k i.i.d. |t_alpha|. Row-major draw order:
/// Z for row 1 (coordinates 1..d), then row 2, and so on.
SampleMatrix simulate(const CoefficientMatrix& abar, int n, double alpha, Rng& rng);

/// One |t_nu| draw as |N| / sqrt(V / nu), V ~ chi^2_nu.
double abs_student_t(double nu, Rng& rng);

}  // namespace lsemplus
