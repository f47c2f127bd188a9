#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pscend/errors.hpp"
#include "pscend/mu_bubble.hpp"

using namespace pscend;
using std::numbers::pi;

namespace {

JetFunction constant_phi(double c) {
    return [c](double) { return Jet{c, 0.0, 0.0}; };
}

JetFunction exp_phi(double amp, double k) {
    return [amp, k](double t) {
        const double v = amp * std::exp(k * t);
        return Jet{v, k * v, k * k * v};
    };
}

JetFunction cos_phi(double k) {
    return [k](double t) { return Jet{std::cos(k * t), -k * std::sin(k * t), -k * k * std::cos(k * t)}; };
}

}  // namespace

TEST_CASE("potential is odd, vanishes at 0 and diverges at the edges") {
    const PotentialParams p{0.7, 0.1, 3};
    CHECK(potential(0.0, p) == 0.0);
    for (double d : {0.05, 0.3, 0.6, 0.69}) {
        CHECK(potential(-d, p) == doctest::Approx(-potential(d, p)).epsilon(1e-15));
        CHECK(potential_derivative(-d, p) == doctest::Approx(potential_derivative(d, p)).epsilon(1e-15));
        const double fd = (potential(d + 1e-6, p) - potential(d - 1e-6, p)) / 2e-6;
        CHECK(potential_derivative(d, p) == doctest::Approx(fd).epsilon(1e-6));
    }
    CHECK(potential(0.7 * (1 - 1e-9), p) > 1e8);
    CHECK_THROWS_AS(potential(0.7, p), DomainError);
    CHECK_THROWS_AS(potential(-0.8, p), DomainError);
    // Prefactor (1+eps'')(n-1) pi / (n L).
    CHECK(potential(0.35, p) == doctest::Approx(1.1 * 2.0 * pi / (3.0 * 0.7) * std::tan(pi / 4)).epsilon(1e-15));
}

TEST_CASE("pointwise potential bound holds up to the edges") {
    for (double L : {0.1, 1.0, 7.5}) {
        for (double eps : {0.0, 0.3}) {
            CHECK(potential_bound_check({L, eps, 3}, 10000) >= -1e-10);
        }
    }
    // It is an identity, so the minimum is zero to working precision.
    CHECK(std::abs(potential_bound_check({1.0, 0.0, 3}, 1000)) < 1e-12);
    CHECK_THROWS_AS(potential_bound_check({1.0, 0.0, 4}, 100), DomainError);
}

TEST_CASE("functional of a constant warp matches the log-cosine closed form") {
    // A(s) = A_V phi^2 [1 - c (2L/pi) ln cos(pi s / 2L)], c = (1+eps'') 2 pi / (3L).
    const BandModel m(1.0, constant_phi(0.8), 1, 3.0);
    const PotentialParams p{0.7, 0.1, 3};
    CHECK(functional(m, 0.5, p) == doctest::Approx(4.2712999149691126546).epsilon(1e-12));
    CHECK(functional(m, 0.0, p) == doctest::Approx(3.0 * 0.64).epsilon(1e-15));
    CHECK(functional(m, -0.5, p) == doctest::Approx(functional(m, 0.5, p)).epsilon(1e-12));
}

TEST_CASE("exponential warp: functional values and the critical level") {
    // H = -2k everywhere, so criticality h(s) = -2k gives s* = (2L/pi) atan(-2k / c).
    const BandModel m(1.0, exp_phi(1.3, 0.5), 1, 2.0);
    const PotentialParams p{1.0, 0.0, 3};
    CHECK(functional(m, 0.4, p) == doctest::Approx(6.2995659616664783977).epsilon(1e-12));
    CHECK(functional(m, -0.6, p) == doctest::Approx(3.4525026282365955583).epsilon(1e-12));

    const MuBubbleSolution sol = minimize(m, p);
    CHECK(sol.level == doctest::Approx(-0.28358704837279825270).epsilon(1e-10));
    CHECK(sol.area == doctest::Approx(2.0 * 1.69 * std::exp(2 * 0.5 * sol.level)).epsilon(1e-12));
    CHECK(functional(m, sol.level, p) == doctest::Approx(2.9288025624788392705).epsilon(1e-12));
    CHECK(std::abs(sol.mean_curvature - sol.potential_at_level) < 1e-10);
    CHECK(sol.mean_curvature == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(sol.second_derivative > 0.0);
}

TEST_CASE("first and second derivatives of the functional match differences") {
    const BandModel m(1.2, cos_phi(0.8), 2, 5.0);
    const PotentialParams p{1.0, 0.2, 3};
    for (double s : {-0.7, -0.1, 0.3, 0.8}) {
        const double h = 1e-5;
        const double d1 = (functional(m, s + h, p) - functional(m, s - h, p)) / (2 * h);
        CHECK(functional_derivative(m, s, p) == doctest::Approx(d1).epsilon(1e-7));
        const double d2 = (functional_derivative(m, s + h, p) - functional_derivative(m, s - h, p)) / (2 * h);
        CHECK(functional_second_derivative(m, s, p) == doctest::Approx(d2).epsilon(1e-7));
        CHECK(level_mean_curvature(m, s) == doctest::Approx(2 * 0.8 * std::tan(0.8 * s)).epsilon(1e-14));
    }
}

TEST_CASE("minimizer is critical, stable, and level sets satisfy Gauss-Bonnet") {
    const PotentialParams p{1.0, 0.0, 3};
    const std::vector<BandModel> models = {
        BandModel(1.0, cos_phi(0.9), 1, 4.0), BandModel(1.5, exp_phi(0.7, -1.1), 2, 1.0),
        BandModel(1.0, constant_phi(2.0), 3, 10.0), BandModel(2.0, cos_phi(0.3), 2, 0.7)};
    for (const BandModel& m : models) {
        const MuBubbleSolution sol = minimize(m, p);
        CHECK(std::abs(sol.mean_curvature - potential(sol.level, p)) <= 1e-6);
        CHECK(sol.second_derivative >= -1e-8);
        CHECK(sol.total_curvature == doctest::Approx(8 * pi * (1 - m.genus())).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("a minimizer pushed against the edge is reported, not clamped") {
    // phi ~ (t + 1) near t = -1: the critical level sits within 1e-5 of -L.
    JetFunction phi = [](double t) { return Jet{t + 1.0 + 1e-6, 1.0, 0.0}; };
    const BandModel m(1.0, phi, 1, 1.0);
    CHECK_THROWS_AS(minimize(m, {1.0, 0.0, 3}), BoundaryEscapeError);
    CHECK_THROWS_AS(minimize(m, {1.5, 0.0, 3}), DomainError);  // L > T
}

TEST_CASE("stability report of a flat product band") {
    // R = 0, minimizer at s = 0 where h = 0 and h' = pi^2 / 3 (L = 1).
    const BandModel m(1.0, constant_phi(1.5), 1, 2.0);
    const PotentialParams p{1.0, 0.0, 3};
    const MuBubbleSolution sol = minimize(m, p);
    CHECK(std::abs(sol.level) < 1e-10);
    CHECK(stability_report(m, sol, p) == doctest::Approx(2 * pi * pi / 3 * 2.0 * 2.25).epsilon(1e-9));
}

TEST_CASE("band scalar curvature") {
    const BandModel torus(1.0, cos_phi(1.0), 1, 1.0);
    for (double t : {-0.5, 0.0, 0.9}) {
        CHECK(band_scalar(torus, t) == doctest::Approx(4 - 2 * std::tan(t) * std::tan(t)).epsilon(1e-14));
    }
    const BandModel hyperbolic(1.0, constant_phi(1.0), 2, 3.0);
    CHECK(hyperbolic.fiber_scalar() == doctest::Approx(-8 * pi / 3.0));
    CHECK(band_scalar(hyperbolic, 0.2) == doctest::Approx(-8 * pi / 3.0));
}

TEST_CASE("band-width bound values and hypothesis") {
    const double frozen[][2] = {{0.1, 8.1115573519472237939}, {1.0, 2.5650996603237281911}, {6.0, 1.0471975511965977462}};
    for (const auto& [r0, b] : frozen) {
        for (double A0 : {0.5, 1.0, 40.0}) CHECK(std::abs(band_width_bound(1, A0, r0) - b) <= 1e-12 * b);
    }
    CHECK(band_width_bound(1, 2.0, 6.0) == doctest::Approx(pi / 3).epsilon(1e-15));
    CHECK(band_width_bound(2, 1.0, 0.0) == doctest::Approx(std::sqrt(pi / 12)).epsilon(1e-15));
    CHECK(band_width_bound(2, 10.0, 6.0) == doctest::Approx(0.87913573656127242385).epsilon(1e-14));
    // Genus 2: the bound blows up as r0 decreases to -8 pi / A0.
    CHECK(band_width_bound(2, 1.0, -8 * pi * (1 - 1e-9)) > 1e3);
    CHECK_THROWS_AS(band_width_bound(2, 1.0, -8 * pi), HypothesisError);
    CHECK_THROWS_AS(band_width_bound(1, 1.0, 0.0), HypothesisError);
    CHECK_THROWS_AS(band_width_bound(1, 1.0, -1.0), HypothesisError);
}

TEST_CASE("band-width audit examples") {
    // cos(t) on [-1/2, 1/2]: r0 = 4 - 2 tan^2(1/2) at the ends.
    const AuditResult cos_audit = band_width_audit(BandModel(0.5, cos_phi(1.0), 1, 3.0));
    CHECK(cos_audit.outcome == AuditOutcome::holds);
    CHECK(cos_audit.r0 == doctest::Approx(3.4031071791809503262).epsilon(1e-12));
    CHECK(*cos_audit.bound == doctest::Approx(1.3904853884842572389).epsilon(1e-12));
    CHECK(cos_audit.A0 == doctest::Approx(3.0));
    CHECK(cos_audit.width == 0.5);

    // Hyperbolic product: r0 = -8 pi (g-1) / A0 exactly, not strictly above.
    const AuditResult product = band_width_audit(BandModel(1.0, constant_phi(1.0), 2, 2.0));
    CHECK(product.outcome == AuditOutcome::not_applicable);

    // Doubling needs phi'(0) <= 0 at the middle slice.
    CHECK(band_width_audit(BandModel(1.0, exp_phi(1.0, 0.3), 1, 1.0), true).outcome == AuditOutcome::not_applicable);
    const AuditResult half = band_width_audit(BandModel(1.0, cos_phi(0.7), 1, 1.0), true);
    CHECK(half.outcome == AuditOutcome::holds);
    CHECK(half.r0 == doctest::Approx(0.49 * (4 - 2 * std::tan(0.7) * std::tan(0.7))).epsilon(1e-12));
}

TEST_CASE("t is arclength across the band") {
    const BandModel m(1.0, cos_phi(0.8), 1, 1.0);
    CHECK(transverse_path_length(m, -1.0, 1.0, [](double) { return 0.0; }) == doctest::Approx(2.0).epsilon(1e-14));
    // Any path that also moves along the fiber is longer.
    const double wiggle = transverse_path_length(m, -1.0, 1.0, [](double t) { return 0.3 * std::cos(t); });
    CHECK(wiggle > 2.0);
}

TEST_CASE("area-growth hypothesis A = c r^2") {
    auto samples = [](double c) {
        std::vector<std::pair<double, double>> s;
        for (int r = 1; r <= 20; ++r) s.emplace_back(r, c * r * r);
        return s;
    };
    CHECK(theorem1_hypothesis(samples(3.0)).status == HypothesisStatus::satisfied);
    CHECK(theorem1_hypothesis(samples(kAreaRatioThreshold * 0.999)).status == HypothesisStatus::satisfied);
    CHECK(theorem1_hypothesis(samples(kAreaRatioThreshold)).status == HypothesisStatus::not_satisfied);
    CHECK(theorem1_hypothesis(samples(4.0)).status == HypothesisStatus::not_satisfied);
    const HypothesisVerdict v = theorem1_hypothesis(samples(3.0));
    CHECK(v.tail_samples == 10);
    CHECK(v.margin == doctest::Approx(12 / pi - 3.0));

    // Early samples do not matter; only the tail does.
    auto s = samples(3.0);
    s[0].second = 100.0;
    CHECK(theorem1_hypothesis(s).status == HypothesisStatus::satisfied);

    const std::vector<std::pair<double, double>> two = {{1.0, 1.0}, {2.0, 4.0}};
    CHECK(theorem1_hypothesis(two).status == HypothesisStatus::insufficient_data);
    const std::vector<std::pair<double, double>> unordered = {{1.0, 1.0}, {3.0, 4.0}, {2.0, 4.0}};
    CHECK_THROWS_AS(theorem1_hypothesis(unordered), DomainError);
}

TEST_CASE("genus-bound constant: (2/3) pi^2 (12/pi) = 8 pi") {
    CHECK(std::abs(2.0 / 3.0 * pi * pi * kAreaRatioThreshold - 8 * pi) < 1e-12);
}

TEST_CASE("band models validate their data") {
    CHECK_THROWS_AS(BandModel(0.0, constant_phi(1.0), 1, 1.0), DomainError);
    CHECK_THROWS_AS(BandModel(1.0, constant_phi(1.0), 0, 1.0), DomainError);
    CHECK_THROWS_AS(BandModel(1.0, constant_phi(1.0), 1, -1.0), DomainError);
    CHECK_THROWS_AS(BandModel(2.0, cos_phi(1.0), 1, 1.0), DomainError);
}
