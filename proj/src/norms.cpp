#include "oscp/norms.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace oscp {

std::string to_string(NormKind kind) {
    switch (kind) {
    case NormKind::L1: return "l1";
    case NormKind::L2: return "l2";
    case NormKind::LInf: return "linf";
    case NormKind::Ellipsoid: return "ellipsoid";
    }
    return "l2";
}

NormKind norm_kind_from_string(const std::string& name) {
    if (name == "l1") return NormKind::L1;
    if (name == "l2") return NormKind::L2;
    if (name == "linf") return NormKind::LInf;
    if (name == "ellipsoid") return NormKind::Ellipsoid;
    throw InvalidArgument("unknown norm kind '" + name + "' (expected l1, l2, linf, ellipsoid)");
}

std::vector<int> NormSpec::degenerate_times() const {
    std::vector<int> out;
    if (kind != NormKind::Ellipsoid || shape_matrices.empty()) return out;
    const int d = static_cast<int>(shape_matrices.front().rows());
    for (std::size_t t = 0; t < ranks.size(); ++t) {
        if (ranks[t] < d) out.push_back(static_cast<int>(t));
    }
    return out;
}

double norm_eval(const Eigen::VectorXd& v, const NormSpec& spec, int t) {
    switch (spec.kind) {
    case NormKind::L1:
        return v.lpNorm<1>();
    case NormKind::L2:
        return v.norm();
    case NormKind::LInf:
        return v.lpNorm<Eigen::Infinity>();
    case NormKind::Ellipsoid: {
        if (!spec.has_shape_matrices()) {
            throw MissingShapeMatrix("ellipsoid norm requested but no shape matrices fitted");
        }
        if (t < 0 || t >= static_cast<int>(spec.shape_matrices.size())) {
            throw DimensionMismatch("time index " + std::to_string(t) + " out of range for " +
                                    std::to_string(spec.shape_matrices.size()) + " shape matrices");
        }
        const Eigen::MatrixXd& m = spec.shape_matrices[static_cast<std::size_t>(t)];
        if (v.size() != m.rows()) {
            throw DimensionMismatch("residual dimension " + std::to_string(v.size()) +
                                    " does not match shape matrix dimension " + std::to_string(m.rows()));
        }
        // Rounding can push the quadratic form barely below zero.
        double q = v.dot(m * v);
        return std::sqrt(std::max(q, 0.0));
    }
    }
    return 0.0;
}

NormedResidualSeries compute_normed_residuals(const ResidualSeries& series, const NormSpec& spec) {
    NormedResidualSeries out;
    const Eigen::Index T = series.steps();
    out.e.resize(static_cast<std::size_t>(T));
    for (Eigen::Index t = 0; t < T; ++t) {
        out.e[static_cast<std::size_t>(t)] = norm_eval(series.values.col(t), spec, static_cast<int>(t));
    }
    return out;
}

NormSpec fit_ellipsoid_norms(const std::vector<ResidualSeries>& dataset, double rank_tolerance) {
    if (dataset.empty()) {
        throw EmptyDataset("cannot fit ellipsoid norms from an empty dataset");
    }
    if (!(rank_tolerance >= 0.0 && rank_tolerance < 1.0)) {
        throw InvalidArgument("rank_tolerance must lie in [0, 1)");
    }
    const Eigen::Index d = dataset.front().dims();
    const Eigen::Index T = dataset.front().steps();
    const std::size_t n = dataset.size();
    for (const ResidualSeries& s : dataset) {
        if (s.dims() != d || s.steps() != T) {
            throw DimensionMismatch("inconsistent series shapes in dataset");
        }
    }

    NormSpec spec;
    spec.kind = NormKind::Ellipsoid;
    spec.rank_tolerance = rank_tolerance;
    spec.shape_matrices.reserve(static_cast<std::size_t>(T));
    spec.singular_values.reserve(static_cast<std::size_t>(T));
    spec.ranks.reserve(static_cast<std::size_t>(T));

    std::vector<double> addends(n);
    for (Eigen::Index t = 0; t < T; ++t) {
        // Second moment about zero. Each entry is accumulated in sorted
        // order so the fit is exactly invariant to dataset permutations.
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
        for (Eigen::Index a = 0; a < d; ++a) {
            for (Eigen::Index b = a; b < d; ++b) {
                for (std::size_t i = 0; i < n; ++i) {
                    const auto col = dataset[i].values.col(t);
                    addends[i] = col(a) * col(b);
                }
                std::sort(addends.begin(), addends.end());
                double sum = 0.0;
                for (double x : addends) sum += x;
                m(a, b) = sum / static_cast<double>(n);
                m(b, a) = m(a, b);
            }
        }

        Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Eigen::VectorXd& sigma = svd.singularValues();
        const double cutoff = rank_tolerance * (sigma.size() > 0 ? sigma(0) : 0.0);
        int rank = 0;
        Eigen::VectorXd inv_sigma = Eigen::VectorXd::Zero(sigma.size());
        for (Eigen::Index k = 0; k < sigma.size(); ++k) {
            if (sigma(k) > cutoff && sigma(k) > 0.0) {
                inv_sigma(k) = 1.0 / sigma(k);
                ++rank;
            }
        }
        Eigen::MatrixXd pinv = svd.matrixV() * inv_sigma.asDiagonal() * svd.matrixU().transpose();
        pinv = ((pinv + pinv.transpose()) * 0.5).eval(); // symmetrize rounding noise

        spec.shape_matrices.push_back(std::move(pinv));
        spec.singular_values.push_back(sigma);
        spec.ranks.push_back(rank);
    }
    return spec;
}

void validate_norm_spec(const NormSpec& spec, Eigen::Index d, Eigen::Index T) {
    if (!(spec.rank_tolerance >= 0.0 && spec.rank_tolerance < 1.0)) {
        throw InvalidArgument("rank_tolerance must lie in [0, 1)");
    }
    if (spec.kind != NormKind::Ellipsoid) {
        if (spec.has_shape_matrices()) {
            throw ShapeError("shape matrices present on a non-ellipsoid norm");
        }
        return;
    }
    if (static_cast<Eigen::Index>(spec.shape_matrices.size()) != T) {
        throw ShapeError("expected " + std::to_string(T) + " shape matrices, found " +
                         std::to_string(spec.shape_matrices.size()));
    }
    if (spec.ranks.size() != spec.shape_matrices.size() ||
        spec.singular_values.size() != spec.shape_matrices.size()) {
        throw ShapeError("ellipsoid metadata (ranks, singular values) incomplete");
    }
    for (std::size_t t = 0; t < spec.shape_matrices.size(); ++t) {
        const Eigen::MatrixXd& m = spec.shape_matrices[t];
        if (m.rows() != d || m.cols() != d) {
            throw ShapeError("shape matrix " + std::to_string(t) + " is not " + std::to_string(d) +
                             "x" + std::to_string(d));
        }
        check_finite(m, "shape matrix");
        const double scale = m.cwiseAbs().maxCoeff();
        const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
        if (asym > 1e-10 * std::max(scale, 1.0)) {
            throw ShapeError("shape matrix " + std::to_string(t) + " is not symmetric");
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
        const double min_eig = eig.eigenvalues().minCoeff();
        const double max_eig = std::abs(eig.eigenvalues().cwiseAbs().maxCoeff());
        if (min_eig < -1e-10 * std::max(max_eig, 1.0)) {
            throw ShapeError("shape matrix " + std::to_string(t) + " is not positive semidefinite");
        }
    }
}

} // namespace oscp
