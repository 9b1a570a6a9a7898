#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oscp/norms.hpp"
#include "oscp/selector.hpp"
#include "oscp/types.hpp"

namespace oscp {

/// Disjoint two-way split of series indices {0..N-1}, reproducible from the seed.
struct CalibrationSplit {
    std::vector<int> indices_1; // sorted ascending, size n1
    std::vector<int> indices_2; // sorted ascending, size n2
    long long seed = 0;
};

CalibrationSplit split_calibration(int N, double ratio, long long seed);

/// Frozen predictor: per-time norm, learned radii, and the calibrated
/// inflation. Immutable after fit; safe to share across threads.
struct ConformalPredictor {
    double epsilon = 0.1;
    NormSpec norm;
    RadiusProfile radii;
    double inflation = 0.0; // p2-th smallest score on the second half; may be negative
    int p1 = 0;
    int p2 = 0;
    int n1 = 0;
    int n2 = 0;
    int d = 0;
    int T = 0;
    long long seed = 0;
};

/// Per-time regions around the nominal trajectory: at time t the region is
/// { y : ||y - center_t|| <= radii[t] } under `norm`. Radii that would be
/// negative are clamped to zero and flagged.
struct RegionSequence {
    Eigen::MatrixXd centers; // d x T
    std::vector<double> radii;
    NormSpec norm;
    std::vector<int> empty_regions; // times whose raw radius was negative
};

/// Nonconformity score max_t(||residual_t|| - r[t]); may be negative.
double score(const std::vector<double>& radii, const NormSpec& norm, const ResidualSeries& series);
double score(const ConformalPredictor& predictor, const ResidualSeries& series);

/// p2-th smallest of the given scores (1-indexed order statistic).
double calibrate_inflation(const std::vector<double>& scores, double epsilon);

struct FitOptions {
    double split_ratio = 0.5;
    double rank_tolerance = 1e-10;
    SolveOptions solver;
};

struct FitResult {
    ConformalPredictor predictor;
    SolveStats solve_stats;
    std::optional<PruneResult> prune;
};

/// Full pipeline: split, (optionally) fit ellipsoid shapes on the first
/// half, learn radii on the first half, calibrate the inflation on the
/// second half. Deterministic given inputs and seed.
FitResult fit(const std::vector<ResidualSeries>& dataset, double epsilon, NormKind kind,
              long long seed, const FitOptions& options = {});

RegionSequence predict_regions(const ConformalPredictor& predictor, const Eigen::MatrixXd& nominal);

/// True iff the trajectory lies inside every per-time region (closed regions).
bool contains(const RegionSequence& regions, const Eigen::MatrixXd& trajectory);

/// JSON predictor artifact (format_version 1). Floating values round-trip
/// bit-exact. `created` is an optional ISO-8601 stamp recorded verbatim.
std::string serialize_predictor(const ConformalPredictor& predictor,
                                const std::optional<std::string>& created = std::nullopt);
ConformalPredictor deserialize_predictor(const std::string& json_text);

} // namespace oscp
