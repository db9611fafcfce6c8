#pragma once

#include <vector>

#include <Eigen/Dense>

#include "lsemplus/graph.hpp"
#include "lsemplus/lsem.hpp"
#include "lsemplus/sample.hpp"

namespace lsemplus {

/// Discrete measure on the positive Euclidean unit sphere.
struct AngularMeasure {
    std::vector<Eigen::VectorXd> atoms;
    std::vector<double> masses;

    double total_mass() const;
};

/// Angular measure of X = A Z for Z regularly varying with index alpha:
/// one atom a_j / ||a_j|| of mass ||a_j||^alpha per column j.
AngularMeasure angular_measure(const CoefficientMatrix& a, double alpha);

/// sigma^2_ij = sum_k a_ik a_jk.
double theoretical_scaling(const CoefficientMatrix& a, Node i, Node j);

/// Squared scaling of max(X_r : r in nodes) = sum_k max_{r in nodes} a_rk^2.
double theoretical_max_scaling(const CoefficientMatrix& a, const NodeSet& nodes);

/// Squared scaling of max(X_i, s X_j, s X_I) for scalar s > 1.
double theoretical_scaled_max_scaling(const CoefficientMatrix& a, Node i, Node j, const NodeSet& identified,
                                      double scale);

/// Column-wise empirical probability integral transform to Frechet(2):
///   x -> (-log(rank / (n + 1)))^(-1/2),  rank = #{rows <= x}.
SampleMatrix pit_frechet2(const SampleMatrix& raw);

struct AngularRepresentation {
    Eigen::VectorXd radii;
    Eigen::MatrixXd angles;  // row l is omega_l
};

AngularRepresentation angular_decomposition(const SampleMatrix& x);

/// Scaled-vector estimate of sigma^2_{M_{i, s j, s I}} from the k largest
/// radii of (X_i, s X_j, s X_I).
double estimate_scaling_scaled(const SampleMatrix& x, Node i, Node j, const NodeSet& identified, double scale,
                               int k);

/// Estimate of sigma^2_{M_{i, j, I}} thresholded on the radii of the scaled
/// vector, with the scaled angles divided back by `scale`.
double estimate_scaling_unscaled(const SampleMatrix& x, Node i, Node j, const NodeSet& identified, double scale,
                                 int k);

/// Direct estimate of sigma^2_{M_indices} from the angular measure of the
/// sub-vector X_indices.
double estimate_scaling_init(const SampleMatrix& x, const NodeSet& indices, int k);

/// floor(n^0.4), at least 1.
int default_threshold(int n);

namespace detail {

/// Per-row aggregates of the identified block: its largest squared entry and
/// its squared Euclidean norm. Lets each (i, j) pair be evaluated in O(n)
/// regardless of |I|.
struct BlockSummary {
    Eigen::VectorXd max_sq;
    Eigen::VectorXd sum_sq;
    int size = 0;
};

BlockSummary summarize_block(const SampleMatrix& x, const NodeSet& block);

struct PairEstimate {
    double scaled;
    double unscaled;
};

/// Both threshold-sharing estimators for the vector (X_i, s X_j, s X_block).
PairEstimate pair_estimate(const SampleMatrix& x, Node i, Node j, const BlockSummary& block, double scale, int k,
                           std::vector<double>& scratch);

}  // namespace detail

}  // namespace lsemplus
