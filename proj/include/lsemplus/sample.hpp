#pragma once

#include <Eigen/Dense>

namespace lsemplus {

enum class Margins { raw, frechet2 };

/// n x d block of nonnegative observations (one row per observation) plus
/// the state of its margins.
struct SampleMatrix {
    Eigen::MatrixXd values;
    Margins margins = Margins::raw;

    Eigen::Index rows() const { return values.rows(); }
    Eigen::Index cols() const { return values.cols(); }
};

}  // namespace lsemplus
