#include "oscp/evaluation.hpp"

#include <cmath>

#include <json.hpp>

namespace oscp {

using nlohmann::json;

namespace {

double unit_ball_volume(int d) {
    return std::pow(std::acos(-1.0), 0.5 * d) / std::tgamma(0.5 * d + 1.0);
}

double factorial(int d) {
    double f = 1.0;
    for (int k = 2; k <= d; ++k) f *= k;
    return f;
}

} // namespace

double empirical_coverage(const ConformalPredictor& predictor, const std::vector<TrajectoryPair>& test) {
    if (test.empty()) {
        throw EmptyTestSet("empirical coverage over an empty test set");
    }
    long long covered = 0;
    for (const TrajectoryPair& pair : test) {
        const RegionSequence regions = predict_regions(predictor, pair.nominal);
        if (contains(regions, pair.truth)) ++covered;
    }
    return static_cast<double>(covered) / static_cast<double>(test.size());
}

double region_volume(double radius, const NormSpec& norm, int t, int d) {
    if (radius < 0.0) {
        throw InvalidArgument("region volume of a negative radius");
    }
    switch (norm.kind) {
    case NormKind::L2:
        return unit_ball_volume(d) * std::pow(radius, d);
    case NormKind::LInf:
        return std::pow(2.0 * radius, d);
    case NormKind::L1:
        return std::pow(2.0 * radius, d) / factorial(d);
    case NormKind::Ellipsoid: {
        if (!norm.has_shape_matrices()) {
            throw MissingShapeMatrix("ellipsoid volume requested but no shape matrices fitted");
        }
        if (t < 0 || t >= static_cast<int>(norm.singular_values.size())) {
            throw DimensionMismatch("time index out of range for ellipsoid volume");
        }
        // Product over the retained singular values of the second-moment
        // matrix; equals sqrt(det M_t) in the full-rank case. Rank-deficient
        // times keep the max-rank subspace contribution.
        const Eigen::VectorXd& sigma = norm.singular_values[static_cast<std::size_t>(t)];
        const int rank = norm.ranks[static_cast<std::size_t>(t)];
        double scale = 1.0;
        for (int k = 0; k < rank; ++k) scale *= std::sqrt(sigma(k));
        return unit_ball_volume(d) * std::pow(radius, d) * scale;
    }
    }
    return 0.0;
}

double total_volume(const ConformalPredictor& predictor, const std::vector<Eigen::MatrixXd>& test_nominals) {
    if (test_nominals.empty()) {
        throw EmptyTestSet("total volume over an empty test set");
    }
    double sum = 0.0;
    for (const Eigen::MatrixXd& nominal : test_nominals) {
        const RegionSequence regions = predict_regions(predictor, nominal);
        double per_sequence = 0.0;
        for (int t = 0; t < predictor.T; ++t) {
            per_sequence += region_volume(regions.radii[static_cast<std::size_t>(t)], predictor.norm, t,
                                          predictor.d);
        }
        sum += per_sequence;
    }
    return sum / static_cast<double>(test_nominals.size());
}

EvaluationReport evaluate(const ConformalPredictor& predictor, const std::vector<TrajectoryPair>& test) {
    if (test.empty()) {
        throw EmptyTestSet("evaluation over an empty test set");
    }
    EvaluationReport report;
    report.test_size = static_cast<long long>(test.size());
    std::vector<Eigen::MatrixXd> nominals;
    nominals.reserve(test.size());
    for (const TrajectoryPair& pair : test) {
        const RegionSequence regions = predict_regions(predictor, pair.nominal);
        if (contains(regions, pair.truth)) ++report.covered;
        nominals.push_back(pair.nominal);
    }
    report.coverage = static_cast<double>(report.covered) / static_cast<double>(report.test_size);
    report.total_volume = total_volume(predictor, nominals);

    const RegionSequence regions = predict_regions(predictor, test.front().nominal);
    double radius_sum = 0.0;
    for (double rho : regions.radii) radius_sum += rho;
    report.avg_radius = radius_sum / static_cast<double>(predictor.T);
    report.degenerate_times = predictor.norm.degenerate_times();
    return report;
}

std::vector<double> bonferroni_baseline(const Eigen::MatrixXd& normed_residuals, double epsilon) {
    const Eigen::Index n = normed_residuals.rows();
    const Eigen::Index T = normed_residuals.cols();
    if (n < 1 || T < 1) {
        throw InvalidArgument("bonferroni baseline needs a nonempty residual matrix");
    }
    const double per_time = epsilon / static_cast<double>(T);
    const int p = quantile_index(per_time, n);
    return coordinatewise_quantile(normed_residuals, p);
}

std::string serialize_report(const EvaluationReport& report) {
    json doc;
    doc["coverage"] = report.coverage;
    doc["covered"] = report.covered;
    doc["test_size"] = report.test_size;
    doc["total_volume"] = report.total_volume;
    doc["avg_radius"] = report.avg_radius;
    doc["degenerate_times"] = report.degenerate_times;
    return doc.dump(2) + "\n";
}

} // namespace oscp
