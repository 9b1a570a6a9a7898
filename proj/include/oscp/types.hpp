#pragma once

#include <Eigen/Core>

#include "oscp/errors.hpp"

namespace oscp {

/// Residuals of one trajectory: column t holds the d-dimensional residual
/// at time step t. All series of a dataset share the same (d, T).
struct ResidualSeries {
    Eigen::MatrixXd values; // d x T

    Eigen::Index dims() const { return values.rows(); }
    Eigen::Index steps() const { return values.cols(); }
};

inline void check_finite(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite()) {
        throw NonFiniteValue(std::string(what) + ": non-finite entry");
    }
}

} // namespace oscp
