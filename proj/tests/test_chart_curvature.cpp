#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pscend/chart_curvature.hpp"
#include "pscend/errors.hpp"

using namespace pscend;

namespace {

ChartMetric round_sphere(double radius) {
    ChartMetric m;
    m.dim = 2;
    m.components = [radius](std::span<const double> x) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(2, 2);
        g(0, 0) = radius * radius;
        g(1, 1) = radius * radius * std::sin(x[0]) * std::sin(x[0]);
        return g;
    };
    return m;
}

ChartMetric scaled(const ChartMetric& base, double c) {
    ChartMetric m = base;
    m.components = [base, c](std::span<const double> x) { return Eigen::MatrixXd(c * base.components(x)); };
    return m;
}

// S^2(1) x S^2(1) on (theta1, phi1, theta2, phi2).
ChartMetric sphere_product() {
    ChartMetric m;
    m.dim = 4;
    m.components = [](std::span<const double> x) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Identity(4, 4);
        g(1, 1) = std::sin(x[0]) * std::sin(x[0]);
        g(3, 3) = std::sin(x[2]) * std::sin(x[2]);
        return g;
    };
    return m;
}

}  // namespace

TEST_CASE("unit sphere has R = 2 under the fixed sign convention") {
    const std::vector<double> p = {1.0, 0.4};
    const CurvatureReport r = scalar_curvature(round_sphere(1.0), p);
    CHECK(r.scalar == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(r.estimated_error < 1e-5);
    // Ric = g for the unit sphere.
    CHECK(r.ricci(0, 0) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK(r.ricci(1, 1) == doctest::Approx(std::sin(1.0) * std::sin(1.0)).epsilon(1e-7));
    CHECK(std::abs(r.ricci(0, 1)) < 1e-8);
}

TEST_CASE("scaling the metric by c divides R by c") {
    const std::vector<double> p = {0.8, 0.0};
    const ChartMetric s = round_sphere(1.0);
    for (double c : {0.25, 3.0, 10.0}) {
        CHECK(scalar_curvature(scaled(s, c), p).scalar == doctest::Approx(2.0 / c).epsilon(1e-7));
    }
    CHECK(scalar_curvature(round_sphere(2.0), p).scalar == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("hyperbolic half-plane has R = -2") {
    ChartMetric m;
    m.dim = 2;
    m.components = [](std::span<const double> x) { return Eigen::MatrixXd(Eigen::MatrixXd::Identity(2, 2) / (x[1] * x[1])); };
    const std::vector<double> p = {0.3, 1.7};
    CHECK(scalar_curvature(m, p).scalar == doctest::Approx(-2.0).epsilon(1e-7));
}

TEST_CASE("flat metric in polar coordinates: R = 0 and the known Christoffels") {
    ChartMetric m;
    m.dim = 2;
    m.components = [](std::span<const double> x) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2, 2);
        g(1, 1) = x[0] * x[0];
        return g;
    };
    const std::vector<double> p = {1.5, 0.2};
    CHECK(std::abs(scalar_curvature(m, p, 1e-3).scalar) < 1e-8);
    const Christoffel G = christoffel(m, p);
    CHECK(G(0, 1, 1) == doctest::Approx(-1.5).epsilon(1e-8));
    CHECK(G(1, 0, 1) == doctest::Approx(1.0 / 1.5).epsilon(1e-8));
    CHECK(G(1, 1, 0) == doctest::Approx(1.0 / 1.5).epsilon(1e-8));
    CHECK(std::abs(G(0, 0, 0)) < 1e-10);
}

TEST_CASE("product metrics add scalar curvatures; Ricci is symmetric and traces to R") {
    const std::vector<double> p = {0.9, 0.1, 2.0, -0.3};
    const CurvatureReport r = scalar_curvature(sphere_product(), p);
    CHECK(r.scalar == doctest::Approx(4.0).epsilon(1e-7));
    CHECK((r.ricci - r.ricci.transpose()).cwiseAbs().maxCoeff() < 1e-8);
    const Eigen::MatrixXd g = sphere_product().components(p);
    CHECK((g.inverse() * r.ricci).trace() == doctest::Approx(r.scalar).epsilon(1e-12));
}

TEST_CASE("error shrinks with the step and the estimate covers the actual error") {
    const ChartMetric s = round_sphere(1.0);
    const std::vector<double> p = {0.5, 0.0};
    for (double h : {1e-2, 3e-3, 1e-3}) {
        const CurvatureReport r = scalar_curvature(s, p, h);
        CHECK(std::abs(r.scalar - 2.0) <= r.estimated_error + 1e-12);
    }
    const double coarse = std::abs(scalar_curvature(s, p, 2e-2).scalar - 2.0);
    const double fine = std::abs(scalar_curvature(s, p, 5e-3).scalar - 2.0);
    CHECK(fine < coarse);
}

TEST_CASE("degenerate, asymmetric and out-of-domain metrics are rejected") {
    ChartMetric degenerate;
    degenerate.dim = 2;
    degenerate.components = [](std::span<const double>) {
        Eigen::MatrixXd g(2, 2);
        g << 1.0, 1.0, 1.0, 1.0;
        return g;
    };
    const std::vector<double> p = {0.5, 0.5};
    CHECK_THROWS_AS(scalar_curvature(degenerate, p), DegenerateMetricError);

    ChartMetric asym;
    asym.dim = 2;
    asym.components = [](std::span<const double>) {
        Eigen::MatrixXd g(2, 2);
        g << 1.0, 0.1, 0.2, 1.0;
        return g;
    };
    CHECK_THROWS_AS(scalar_curvature(asym, p), DomainError);

    ChartMetric boxed = round_sphere(1.0);
    boxed.domain_hint = {{0.1, -10.0}, {3.0, 10.0}};
    const std::vector<double> edge = {0.1, 0.0};
    CHECK_THROWS_AS(scalar_curvature(boxed, edge), DomainError);
    const std::vector<double> wrong_dim = {0.5};
    CHECK_THROWS_AS(scalar_curvature(boxed, wrong_dim), DomainError);
    CHECK_THROWS_AS(scalar_curvature(boxed, p, -1.0), DomainError);
}

TEST_CASE("a step outside the asymptotic regime is flagged") {
    // Features of width ~ 1e-3 probed with h = 1e-2.
    ChartMetric wiggly;
    wiggly.dim = 2;
    wiggly.components = [](std::span<const double> x) {
        Eigen::MatrixXd g = Eigen::MatrixXd::Identity(2, 2);
        g(1, 1) = 2.0 + std::sin(1000.0 * x[0]);
        return g;
    };
    const std::vector<double> p = {0.3, 0.0};
    CHECK_THROWS_AS(scalar_curvature(wiggly, p, 1e-2), UnreliableStepError);
}
