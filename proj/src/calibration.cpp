#include "oscp/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "oscp/rng.hpp"

namespace oscp {

using nlohmann::json;

CalibrationSplit split_calibration(int N, double ratio, long long seed) {
    if (N < 2) {
        throw TooFewSeries("calibration needs at least 2 series, got " + std::to_string(N));
    }
    if (!(ratio > 0.0 && ratio < 1.0)) {
        throw InvalidArgument("split ratio must lie in (0, 1)");
    }
    const int n1 = std::max(1, static_cast<int>(std::floor(ratio * N)));
    const int n2 = N - n1;
    if (n2 < 1) {
        throw InvalidArgument("split ratio " + std::to_string(ratio) + " leaves no series for the second half");
    }

    std::vector<int> idx(static_cast<std::size_t>(N));
    std::iota(idx.begin(), idx.end(), 0);
    Rng rng(static_cast<std::uint64_t>(seed));
    rng.shuffle(idx);

    CalibrationSplit split;
    split.seed = seed;
    split.indices_1.assign(idx.begin(), idx.begin() + n1);
    split.indices_2.assign(idx.begin() + n1, idx.end());
    std::sort(split.indices_1.begin(), split.indices_1.end());
    std::sort(split.indices_2.begin(), split.indices_2.end());
    return split;
}

double score(const std::vector<double>& radii, const NormSpec& norm, const ResidualSeries& series) {
    if (static_cast<Eigen::Index>(radii.size()) != series.steps()) {
        throw DimensionMismatch("series has " + std::to_string(series.steps()) +
                                " steps but the score function has " + std::to_string(radii.size()) +
                                " radii");
    }
    const NormedResidualSeries e = compute_normed_residuals(series, norm);
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < radii.size(); ++t) {
        best = std::max(best, e.e[t] - radii[t]);
    }
    return best;
}

double score(const ConformalPredictor& predictor, const ResidualSeries& series) {
    if (series.dims() != predictor.d || series.steps() != predictor.T) {
        throw DimensionMismatch("series shape does not match predictor dims");
    }
    return score(predictor.radii.r, predictor.norm, series);
}

double calibrate_inflation(const std::vector<double>& scores, double epsilon) {
    const int p2 = quantile_index(epsilon, static_cast<long long>(scores.size()));
    std::vector<double> sorted = scores;
    auto nth = sorted.begin() + (p2 - 1);
    std::nth_element(sorted.begin(), nth, sorted.end());
    return *nth;
}

FitResult fit(const std::vector<ResidualSeries>& dataset, double epsilon, NormKind kind,
              long long seed, const FitOptions& options) {
    if (dataset.empty()) {
        throw EmptyDataset("cannot fit on an empty dataset");
    }
    const Eigen::Index d = dataset.front().dims();
    const Eigen::Index T = dataset.front().steps();
    for (const ResidualSeries& s : dataset) {
        if (s.dims() != d || s.steps() != T) {
            throw DimensionMismatch("inconsistent series shapes in dataset");
        }
        check_finite(s.values, "residual series");
    }

    const int N = static_cast<int>(dataset.size());
    CalibrationSplit split = split_calibration(N, options.split_ratio, seed);
    const int n1 = static_cast<int>(split.indices_1.size());
    const int n2 = static_cast<int>(split.indices_2.size());

    // Both quantile indices must exist before any heavy work.
    const int p1 = quantile_index(epsilon, n1);
    const int p2 = quantile_index(epsilon, n2);

    std::vector<ResidualSeries> first_half;
    first_half.reserve(static_cast<std::size_t>(n1));
    for (int i : split.indices_1) first_half.push_back(dataset[static_cast<std::size_t>(i)]);

    NormSpec norm;
    if (kind == NormKind::Ellipsoid) {
        norm = fit_ellipsoid_norms(first_half, options.rank_tolerance);
    } else {
        norm.kind = kind;
        norm.rank_tolerance = options.rank_tolerance;
    }

    SelectionProblem problem;
    problem.E.resize(n1, T);
    for (int i = 0; i < n1; ++i) {
        const NormedResidualSeries e = compute_normed_residuals(first_half[static_cast<std::size_t>(i)], norm);
        for (Eigen::Index t = 0; t < T; ++t) problem.E(i, t) = e.e[static_cast<std::size_t>(t)];
    }
    problem.p1 = p1;
    SolveResult solved = solve_optimal_radii(problem, options.solver);

    std::vector<double> scores;
    scores.reserve(static_cast<std::size_t>(n2));
    for (int i : split.indices_2) {
        scores.push_back(score(solved.profile.r, norm, dataset[static_cast<std::size_t>(i)]));
    }
    const double inflation = calibrate_inflation(scores, epsilon);

    FitResult result;
    result.predictor.epsilon = epsilon;
    result.predictor.norm = std::move(norm);
    result.predictor.radii = std::move(solved.profile);
    result.predictor.inflation = inflation;
    result.predictor.p1 = p1;
    result.predictor.p2 = p2;
    result.predictor.n1 = n1;
    result.predictor.n2 = n2;
    result.predictor.d = static_cast<int>(d);
    result.predictor.T = static_cast<int>(T);
    result.predictor.seed = seed;
    result.solve_stats = solved.stats;
    result.prune = std::move(solved.prune);
    return result;
}

RegionSequence predict_regions(const ConformalPredictor& predictor, const Eigen::MatrixXd& nominal) {
    if (nominal.rows() != predictor.d || nominal.cols() != predictor.T) {
        throw DimensionMismatch("nominal trajectory shape does not match predictor dims");
    }
    RegionSequence regions;
    regions.centers = nominal;
    regions.norm = predictor.norm;
    regions.radii.resize(static_cast<std::size_t>(predictor.T));
    for (int t = 0; t < predictor.T; ++t) {
        const double raw = predictor.inflation + predictor.radii.r[static_cast<std::size_t>(t)];
        if (raw < 0.0) {
            regions.radii[static_cast<std::size_t>(t)] = 0.0;
            regions.empty_regions.push_back(t);
        } else {
            regions.radii[static_cast<std::size_t>(t)] = raw;
        }
    }
    return regions;
}

bool contains(const RegionSequence& regions, const Eigen::MatrixXd& trajectory) {
    if (trajectory.rows() != regions.centers.rows() || trajectory.cols() != regions.centers.cols()) {
        throw DimensionMismatch("trajectory shape does not match region centers");
    }
    for (Eigen::Index t = 0; t < regions.centers.cols(); ++t) {
        const Eigen::VectorXd residual = trajectory.col(t) - regions.centers.col(t);
        if (norm_eval(residual, regions.norm, static_cast<int>(t)) >
            regions.radii[static_cast<std::size_t>(t)]) {
            return false;
        }
    }
    return true;
}

std::string serialize_predictor(const ConformalPredictor& predictor,
                                const std::optional<std::string>& created) {
    json doc;
    doc["format_version"] = 1;
    doc["epsilon"] = predictor.epsilon;
    doc["d"] = predictor.d;
    doc["T"] = predictor.T;
    doc["n1"] = predictor.n1;
    doc["n2"] = predictor.n2;
    doc["p1"] = predictor.p1;
    doc["p2"] = predictor.p2;
    doc["seed"] = predictor.seed;
    doc["inflation"] = predictor.inflation;
    doc["radii"] = predictor.radii.r;
    doc["selected"] = predictor.radii.selected;
    doc["provably_optimal"] = predictor.radii.provably_optimal;

    json norm;
    norm["kind"] = to_string(predictor.norm.kind);
    norm["rank_tolerance"] = predictor.norm.rank_tolerance;
    if (predictor.norm.kind == NormKind::Ellipsoid) {
        json matrices = json::array();
        for (const Eigen::MatrixXd& m : predictor.norm.shape_matrices) {
            json rows = json::array();
            for (Eigen::Index a = 0; a < m.rows(); ++a) {
                json row = json::array();
                for (Eigen::Index b = 0; b < m.cols(); ++b) row.push_back(m(a, b));
                rows.push_back(std::move(row));
            }
            matrices.push_back(std::move(rows));
        }
        norm["shape_matrices"] = std::move(matrices);
        json singulars = json::array();
        for (const Eigen::VectorXd& s : predictor.norm.singular_values) {
            json row = json::array();
            for (Eigen::Index k = 0; k < s.size(); ++k) row.push_back(s(k));
            singulars.push_back(std::move(row));
        }
        norm["singular_values"] = std::move(singulars);
        norm["ranks"] = predictor.norm.ranks;
    }
    doc["norm"] = std::move(norm);
    if (created) doc["created"] = *created;
    return doc.dump(2) + "\n";
}

ConformalPredictor deserialize_predictor(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("predictor artifact: ") + e.what());
    }
    ConformalPredictor p;
    try {
        if (doc.at("format_version").get<int>() != 1) {
            throw ParseError("predictor artifact: unsupported format_version");
        }
        p.epsilon = doc.at("epsilon").get<double>();
        p.d = doc.at("d").get<int>();
        p.T = doc.at("T").get<int>();
        p.n1 = doc.at("n1").get<int>();
        p.n2 = doc.at("n2").get<int>();
        p.p1 = doc.at("p1").get<int>();
        p.p2 = doc.at("p2").get<int>();
        p.seed = doc.at("seed").get<long long>();
        p.inflation = doc.at("inflation").get<double>();
        p.radii.r = doc.at("radii").get<std::vector<double>>();
        p.radii.selected = doc.at("selected").get<std::vector<int>>();
        p.radii.provably_optimal = doc.at("provably_optimal").get<bool>();

        const json& norm = doc.at("norm");
        p.norm.kind = norm_kind_from_string(norm.at("kind").get<std::string>());
        p.norm.rank_tolerance = norm.at("rank_tolerance").get<double>();
        if (p.norm.kind == NormKind::Ellipsoid) {
            for (const json& mj : norm.at("shape_matrices")) {
                Eigen::MatrixXd m(p.d, p.d);
                if (static_cast<int>(mj.size()) != p.d) throw ShapeError("shape matrix row count mismatch");
                for (int a = 0; a < p.d; ++a) {
                    const json& row = mj[static_cast<std::size_t>(a)];
                    if (static_cast<int>(row.size()) != p.d) throw ShapeError("shape matrix column count mismatch");
                    for (int b = 0; b < p.d; ++b) m(a, b) = row[static_cast<std::size_t>(b)].get<double>();
                }
                p.norm.shape_matrices.push_back(std::move(m));
            }
            for (const json& sj : norm.at("singular_values")) {
                Eigen::VectorXd s(p.d);
                if (static_cast<int>(sj.size()) != p.d) throw ShapeError("singular value count mismatch");
                for (int k = 0; k < p.d; ++k) s(k) = sj[static_cast<std::size_t>(k)].get<double>();
                p.norm.singular_values.push_back(std::move(s));
            }
            p.norm.ranks = norm.at("ranks").get<std::vector<int>>();
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("predictor artifact: ") + e.what());
    }

    if (static_cast<int>(p.radii.r.size()) != p.T) {
        throw ShapeError("predictor artifact: radii length does not match T");
    }
    validate_norm_spec(p.norm, p.d, p.T);
    double cost = 0.0;
    for (double r : p.radii.r) cost += r;
    p.radii.cost = cost;
    return p;
}

} // namespace oscp
