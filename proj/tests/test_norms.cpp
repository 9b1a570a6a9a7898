#include <doctest.h>

#include <cmath>

#include "oscp/norms.hpp"
#include "oscp/rng.hpp"

using namespace oscp;

namespace {

Eigen::VectorXd vec2(double a, double b) {
    Eigen::VectorXd v(2);
    v << a, b;
    return v;
}

NormSpec plain(NormKind kind) {
    NormSpec spec;
    spec.kind = kind;
    return spec;
}

ResidualSeries series_from_columns(const std::vector<Eigen::VectorXd>& cols) {
    ResidualSeries s;
    s.values.resize(cols.front().size(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t t = 0; t < cols.size(); ++t) s.values.col(static_cast<Eigen::Index>(t)) = cols[t];
    return s;
}

} // namespace

TEST_CASE("norm_eval matches the standard norms") {
    NormSpec l2 = plain(NormKind::L2);
    NormSpec l1 = plain(NormKind::L1);
    NormSpec linf = plain(NormKind::LInf);
    CHECK(norm_eval(vec2(3.0, 4.0), l2, 0) == doctest::Approx(5.0));
    CHECK(norm_eval(vec2(3.0, -4.0), l1, 0) == doctest::Approx(7.0));
    CHECK(norm_eval(vec2(3.0, -4.0), linf, 0) == doctest::Approx(4.0));
}

TEST_CASE("norm_eval ellipsoid with identity shape reduces to l2") {
    NormSpec spec;
    spec.kind = NormKind::Ellipsoid;
    spec.shape_matrices = {Eigen::MatrixXd::Identity(2, 2)};
    spec.singular_values = {Eigen::VectorXd::Ones(2)};
    spec.ranks = {2};
    CHECK(norm_eval(vec2(2.0, 0.0), spec, 0) == doctest::Approx(2.0));
}

TEST_CASE("norm_eval error paths") {
    NormSpec spec;
    spec.kind = NormKind::Ellipsoid;
    CHECK_THROWS_AS(norm_eval(vec2(1.0, 1.0), spec, 0), MissingShapeMatrix);

    spec.shape_matrices = {Eigen::MatrixXd::Identity(3, 3)};
    spec.singular_values = {Eigen::VectorXd::Ones(3)};
    spec.ranks = {3};
    CHECK_THROWS_AS(norm_eval(vec2(1.0, 1.0), spec, 0), DimensionMismatch);
    CHECK_THROWS_AS(norm_eval(Eigen::VectorXd::Ones(3), spec, 5), DimensionMismatch);
}

TEST_CASE("compute_normed_residuals per-column evaluation") {
    NormSpec l2 = plain(NormKind::L2);
    // columns (1,0) and (0,1)
    ResidualSeries s = series_from_columns({vec2(1.0, 0.0), vec2(0.0, 1.0)});
    NormedResidualSeries e = compute_normed_residuals(s, l2);
    CHECK(e.e[0] == doctest::Approx(1.0));
    CHECK(e.e[1] == doctest::Approx(1.0));

    ResidualSeries s2 = series_from_columns({vec2(3.0, 4.0), vec2(0.0, 0.0)});
    NormedResidualSeries e2 = compute_normed_residuals(s2, l2);
    CHECK(e2.e[0] == doctest::Approx(5.0));
    CHECK(e2.e[1] == doctest::Approx(0.0));
}

TEST_CASE("compute_normed_residuals with per-time ellipsoid shapes") {
    NormSpec spec;
    spec.kind = NormKind::Ellipsoid;
    Eigen::MatrixXd m0(2, 2), m1(2, 2);
    m0 << 0.25, 0.0, 0.0, 1.0;
    m1 << 1.0, 0.0, 0.0, 1.0;
    spec.shape_matrices = {m0, m1};
    spec.singular_values = {Eigen::VectorXd::Ones(2), Eigen::VectorXd::Ones(2)};
    spec.ranks = {2, 2};

    ResidualSeries s = series_from_columns({vec2(2.0, 0.0), vec2(2.0, 0.0)});
    NormedResidualSeries e = compute_normed_residuals(s, spec);
    CHECK(e.e[0] == doctest::Approx(1.0));
    CHECK(e.e[1] == doctest::Approx(2.0));
}

TEST_CASE("fit_ellipsoid_norms hand-checked second moments") {
    SUBCASE("rank-deficient pair") {
        ResidualSeries a = series_from_columns({vec2(1.0, 0.0)});
        ResidualSeries b = series_from_columns({vec2(-1.0, 0.0)});
        NormSpec spec = fit_ellipsoid_norms({a, b}, 1e-10);
        Eigen::MatrixXd expected(2, 2);
        expected << 1.0, 0.0, 0.0, 0.0;
        CHECK((spec.shape_matrices[0] - expected).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(spec.ranks[0] == 1);
        CHECK(spec.degenerate_times() == std::vector<int>{0});
    }
    SUBCASE("full-rank cross") {
        std::vector<ResidualSeries> data = {
            series_from_columns({vec2(1.0, 0.0)}),
            series_from_columns({vec2(-1.0, 0.0)}),
            series_from_columns({vec2(0.0, 1.0)}),
            series_from_columns({vec2(0.0, -1.0)}),
        };
        NormSpec spec = fit_ellipsoid_norms(data, 1e-10);
        Eigen::MatrixXd expected(2, 2);
        expected << 2.0, 0.0, 0.0, 2.0;
        CHECK((spec.shape_matrices[0] - expected).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(spec.ranks[0] == 2);
        CHECK(spec.degenerate_times().empty());
        CHECK(spec.singular_values[0](0) == doctest::Approx(0.5));
    }
    SUBCASE("all-zero residuals") {
        ResidualSeries z = series_from_columns({vec2(0.0, 0.0)});
        NormSpec spec = fit_ellipsoid_norms({z}, 1e-10);
        CHECK(spec.shape_matrices[0].cwiseAbs().maxCoeff() == 0.0);
        CHECK(spec.ranks[0] == 0);
    }
    SUBCASE("empty dataset") {
        CHECK_THROWS_AS(fit_ellipsoid_norms({}, 1e-10), EmptyDataset);
    }
}

TEST_CASE("norm homogeneity over random vectors") {
    Rng rng(7);
    NormSpec kinds[3] = {plain(NormKind::L1), plain(NormKind::L2), plain(NormKind::LInf)};
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 1 + static_cast<int>(rng.next_below(5));
        Eigen::VectorXd v(d);
        for (int k = 0; k < d; ++k) v(k) = rng.next_gaussian();
        const double c = rng.next_gaussian();
        for (const NormSpec& spec : kinds) {
            CHECK(norm_eval(c * v, spec, 0) == doctest::Approx(std::abs(c) * norm_eval(v, spec, 0)));
        }
        // ellipsoid built from random residuals
        std::vector<ResidualSeries> data;
        for (int i = 0; i < 6; ++i) {
            Eigen::VectorXd x(d);
            for (int k = 0; k < d; ++k) x(k) = rng.next_gaussian();
            ResidualSeries s;
            s.values = x;
            data.push_back(s);
        }
        NormSpec ell = fit_ellipsoid_norms(data, 1e-10);
        CHECK(norm_eval(c * v, ell, 0) == doctest::Approx(std::abs(c) * norm_eval(v, ell, 0)));
    }
}

TEST_CASE("ellipsoid with identity shapes equals l2 residuals within 1e-12") {
    Rng rng(11);
    const int d = 3, T = 4;
    NormSpec ident;
    ident.kind = NormKind::Ellipsoid;
    for (int t = 0; t < T; ++t) {
        ident.shape_matrices.push_back(Eigen::MatrixXd::Identity(d, d));
        ident.singular_values.push_back(Eigen::VectorXd::Ones(d));
        ident.ranks.push_back(d);
    }
    NormSpec l2 = plain(NormKind::L2);
    for (int trial = 0; trial < 20; ++trial) {
        ResidualSeries s;
        s.values.resize(d, T);
        for (int k = 0; k < d; ++k)
            for (int t = 0; t < T; ++t) s.values(k, t) = rng.next_gaussian();
        NormedResidualSeries a = compute_normed_residuals(s, ident);
        NormedResidualSeries b = compute_normed_residuals(s, l2);
        for (int t = 0; t < T; ++t) CHECK(std::abs(a.e[t] - b.e[t]) < 1e-12);
    }
}

TEST_CASE("pseudo-inverse consistency M * pinv(M) * M = M") {
    Rng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const int d = 2 + static_cast<int>(rng.next_below(3));
        const int n = 2 + static_cast<int>(rng.next_below(6));
        std::vector<ResidualSeries> data;
        for (int i = 0; i < n; ++i) {
            ResidualSeries s;
            s.values.resize(d, 1);
            for (int k = 0; k < d; ++k) s.values(k, 0) = rng.next_gaussian();
            data.push_back(s);
        }
        NormSpec spec = fit_ellipsoid_norms(data, 1e-10);
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d, d);
        for (const ResidualSeries& s : data) m += s.values.col(0) * s.values.col(0).transpose();
        m /= static_cast<double>(n);
        const Eigen::MatrixXd& pinv = spec.shape_matrices[0];
        const double scale = std::max(m.cwiseAbs().maxCoeff(), 1e-30);
        CHECK((m * pinv * m - m).cwiseAbs().maxCoeff() / scale < 1e-8);
    }
}

TEST_CASE("fit_ellipsoid_norms is exactly permutation invariant") {
    Rng rng(37);
    const int d = 3, T = 2, n = 9;
    std::vector<ResidualSeries> data;
    for (int i = 0; i < n; ++i) {
        ResidualSeries s;
        s.values.resize(d, T);
        for (int k = 0; k < d; ++k)
            for (int t = 0; t < T; ++t) s.values(k, t) = rng.next_gaussian();
        data.push_back(s);
    }
    NormSpec base = fit_ellipsoid_norms(data, 1e-10);
    for (int trial = 0; trial < 5; ++trial) {
        std::vector<ResidualSeries> shuffled = data;
        rng.shuffle(shuffled);
        NormSpec other = fit_ellipsoid_norms(shuffled, 1e-10);
        for (int t = 0; t < T; ++t) {
            CHECK((base.shape_matrices[t] - other.shape_matrices[t]).cwiseAbs().maxCoeff() == 0.0);
            CHECK((base.singular_values[t] - other.singular_values[t]).cwiseAbs().maxCoeff() == 0.0);
        }
    }
}

TEST_CASE("validate_norm_spec rejects broken specs") {
    NormSpec spec;
    spec.kind = NormKind::Ellipsoid;
    Eigen::MatrixXd asym(2, 2);
    asym << 1.0, 0.5, -0.5, 1.0;
    spec.shape_matrices = {asym};
    spec.singular_values = {Eigen::VectorXd::Ones(2)};
    spec.ranks = {2};
    CHECK_THROWS_AS(validate_norm_spec(spec, 2, 1), ShapeError);

    Eigen::MatrixXd indef(2, 2);
    indef << 1.0, 0.0, 0.0, -1.0;
    spec.shape_matrices = {indef};
    CHECK_THROWS_AS(validate_norm_spec(spec, 2, 1), ShapeError);

    spec.shape_matrices = {Eigen::MatrixXd::Identity(2, 2)};
    CHECK_NOTHROW(validate_norm_spec(spec, 2, 1));
    CHECK_THROWS_AS(validate_norm_spec(spec, 2, 3), ShapeError);
}
