#pragma once

#include <string>
#include <vector>

#include "oscp/calibration.hpp"

namespace oscp {

struct EvaluationReport {
    double coverage = 0.0;     // covered / test size, exact
    long long covered = 0;
    long long test_size = 0;
    double total_volume = 0.0; // mean over test inputs of the summed per-time volumes
    double avg_radius = 0.0;   // mean region radius over t
    std::vector<int> degenerate_times;
};

struct TrajectoryPair {
    Eigen::MatrixXd nominal; // d x T
    Eigen::MatrixXd truth;   // d x T
};

/// Fraction of pairs whose true trajectory is inside every region.
double empirical_coverage(const ConformalPredictor& predictor, const std::vector<TrajectoryPair>& test);

/// Lebesgue volume of one region of radius `radius` at time t in dimension d.
/// L2 ball, LInf cube, L1 cross-polytope, or the fitted ellipsoid (product
/// over retained singular values of M_t; degenerate times are reported in
/// the max-rank subspace rather than as zero).
double region_volume(double radius, const NormSpec& norm, int t, int d);

/// Mean over test nominals of the summed per-time volumes. The radii do not
/// depend on the nominal for this predictor family, so the mean equals the
/// single-sequence sum; it is still computed as a mean for report parity.
double total_volume(const ConformalPredictor& predictor, const std::vector<Eigen::MatrixXd>& test_nominals);

EvaluationReport evaluate(const ConformalPredictor& predictor, const std::vector<TrajectoryPair>& test);

/// Per-time independent conformal quantiles at level epsilon/T: radius at t
/// is the ceil((1-epsilon/T)(n+1))-th smallest value of column t. A simple
/// valid comparator for efficiency studies.
std::vector<double> bonferroni_baseline(const Eigen::MatrixXd& normed_residuals, double epsilon);

std::string serialize_report(const EvaluationReport& report);

} // namespace oscp
