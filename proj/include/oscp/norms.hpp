#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "oscp/types.hpp"

namespace oscp {

enum class NormKind { L1, L2, LInf, Ellipsoid };

std::string to_string(NormKind kind);
NormKind norm_kind_from_string(const std::string& name);

/// Per-time norm family used to reduce d-dimensional residuals to scalars.
///
/// For Ellipsoid the norm at time t is sqrt(v' * shape_matrices[t] * v),
/// where shape_matrices[t] is the SVD pseudo-inverse of the per-time second
/// moment matrix M_t fitted on calibration residuals. singular_values[t]
/// keeps all d singular values of M_t (descending) and ranks[t] how many
/// were retained; both feed the ellipsoid volume computation downstream.
struct NormSpec {
    NormKind kind = NormKind::L2;
    double rank_tolerance = 1e-10;

    // Ellipsoid only; empty otherwise.
    std::vector<Eigen::MatrixXd> shape_matrices;
    std::vector<Eigen::VectorXd> singular_values;
    std::vector<int> ranks;

    bool has_shape_matrices() const { return !shape_matrices.empty(); }

    /// Times t with rank(M_t) < d. Empty for non-ellipsoid kinds.
    std::vector<int> degenerate_times() const;
};

/// Length-T vector of nonnegative per-time norms of one residual series.
struct NormedResidualSeries {
    std::vector<double> e;
};

/// Norm of a single residual vector under `spec` at time index t.
double norm_eval(const Eigen::VectorXd& v, const NormSpec& spec, int t);

/// Applies norm_eval to every column of the series.
NormedResidualSeries compute_normed_residuals(const ResidualSeries& series, const NormSpec& spec);

/// Fits per-time ellipsoid shape matrices from calibration residuals.
///
/// For each t, M_t = (1/n) sum_i x_i x_i' over the residual vectors at time
/// t (second moment about zero: regions are centered at the nominal point,
/// so the norm measures displacement from that center). The shape matrix is
/// the SVD pseudo-inverse of M_t, discarding singular values below
/// rank_tolerance * sigma_max(M_t).
NormSpec fit_ellipsoid_norms(const std::vector<ResidualSeries>& dataset, double rank_tolerance = 1e-10);

/// Structural checks for a (possibly deserialized) spec against (d, T):
/// matrix counts, symmetry within 1e-10 relative, PSD, tolerance range.
void validate_norm_spec(const NormSpec& spec, Eigen::Index d, Eigen::Index T);

} // namespace oscp
