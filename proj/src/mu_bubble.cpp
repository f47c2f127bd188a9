#include "pscend/mu_bubble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/tools/minima.hpp>
#include <boost/math/tools/toms748_solve.hpp>
#include <boost/multiprecision/float128.hpp>

#include "pscend/errors.hpp"

namespace pscend {

namespace {

using Quad = boost::multiprecision::float128;

constexpr double kPi = std::numbers::pi;

template <class Real>
Real potential_prefactor(const PotentialParams& p) {
    const Real n = p.dim_n;
    return (Real(1) + Real(p.eps2)) * (n - 1) * boost::math::constants::pi<Real>() / (n * Real(p.L));
}

template <class Real>
Real potential_value(Real d, const PotentialParams& p) {
    using std::tan;
    return potential_prefactor<Real>(p) * tan(boost::math::constants::pi<Real>() * d / (2 * Real(p.L)));
}

template <class Real>
Real potential_slope(Real d, const PotentialParams& p) {
    using std::cos;
    const Real half_pi_over_L = boost::math::constants::pi<Real>() / (2 * Real(p.L));
    const Real c = cos(half_pi_over_L * d);
    return potential_prefactor<Real>(p) * half_pi_over_L / (c * c);
}

void check_params(const PotentialParams& p) {
    if (!(p.L > 0.0)) throw DomainError("potential width L must be positive");
    if (!(p.eps2 >= 0.0)) throw DomainError("eps'' must be nonnegative");
    if (p.dim_n < 2) throw DomainError("potential dimension must be at least 2");
}

void check_inside(double d, const PotentialParams& p) {
    check_params(p);
    if (!(std::abs(d) < p.L)) throw DomainError("potential is infinite for |d| >= L");
}

double gauss_bonnet_denominator(int genus, double A0, double r0) {
    return 24.0 * kPi * (genus - 1) + 3.0 * r0 * A0;
}

// Strict positivity of the band-width denominator, with a relative guard so
// that the Gauss-Bonnet equality case is not rounded into the hypothesis.
bool band_hypothesis_holds(int genus, double A0, double r0) {
    const double d = gauss_bonnet_denominator(genus, A0, r0);
    const double scale = 24.0 * kPi * (genus - 1) + 3.0 * std::abs(r0) * A0;
    return d > 1e-12 * scale;
}

// Minimum of f on [lo, hi] by a dense scan followed by Brent refinement.
double scan_minimum(const std::function<double(double)>& f, double lo, double hi, int points) {
    double best_x = lo;
    double best = std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i < points; ++i) {
        const double x = lo + (hi - lo) * i / (points - 1);
        const double v = f(x);
        if (v < best) {
            best = v;
            best_x = x;
            best_i = i;
        }
    }
    const double step = (hi - lo) / (points - 1);
    const double a = best_i == 0 ? lo : best_x - step;
    const double b = best_i == points - 1 ? hi : best_x + step;
    const auto refined = boost::math::tools::brent_find_minima(f, a, b, 50);
    return std::min(best, refined.second);
}

}  // namespace

BandModel::BandModel(double half_width, JetFunction phi, int genus, double fiber_area,
                     std::string description)
    : half_width_(half_width),
      phi_(std::move(phi)),
      genus_(genus),
      fiber_area_(fiber_area),
      fiber_scalar_(8.0 * kPi * (1 - genus) / fiber_area),
      description_(std::move(description)) {
    if (!(half_width_ > 0.0)) throw DomainError("band half-width must be positive");
    if (genus_ < 1) throw DomainError("fiber genus must be at least 1");
    if (!(fiber_area_ > 0.0)) throw DomainError("fiber area must be positive");
    constexpr int kSamples = 1001;
    for (int i = 0; i < kSamples; ++i) {
        const double t = -half_width_ + 2.0 * half_width_ * i / (kSamples - 1);
        if (!(phi_(t).value > 0.0)) {
            throw DomainError("warp factor must be positive on the band; fails at t = " + std::to_string(t));
        }
    }
}

std::string to_string(AuditOutcome outcome) {
    switch (outcome) {
        case AuditOutcome::holds: return "holds";
        case AuditOutcome::violated: return "violated";
        case AuditOutcome::not_applicable: return "not_applicable";
    }
    return "not_applicable";
}

std::string to_string(HypothesisStatus status) {
    switch (status) {
        case HypothesisStatus::satisfied: return "satisfied";
        case HypothesisStatus::not_satisfied: return "not_satisfied";
        case HypothesisStatus::insufficient_data: return "insufficient_data";
    }
    return "insufficient_data";
}

double potential(double d, const PotentialParams& p) {
    check_inside(d, p);
    return potential_value<double>(d, p);
}

double potential_derivative(double d, const PotentialParams& p) {
    check_inside(d, p);
    return potential_slope<double>(d, p);
}

double potential_bound_check(const PotentialParams& p, std::span<const double> grid) {
    check_params(p);
    if (p.dim_n != 3) throw DomainError("the pointwise potential bound is stated for n = 3");
    const Quad one_eps = Quad(1) + Quad(p.eps2);
    const Quad pi = boost::math::constants::pi<Quad>();
    const Quad L = p.L;
    const Quad floor_term = 2 * one_eps * one_eps * pi * pi / (3 * L * L);
    Quad worst = std::numeric_limits<Quad>::infinity();
    for (double d : grid) {
        check_inside(d, p);
        const Quad h = potential_value<Quad>(Quad(d), p);
        const Quad slope = potential_slope<Quad>(Quad(d), p);
        const Quad margin = Quad(1.5) * h * h - 2 * one_eps * abs(slope) + floor_term;
        worst = std::min(worst, margin);
    }
    return static_cast<double>(worst);
}

double potential_bound_check(const PotentialParams& p, int points) {
    check_params(p);
    if (points < 1) throw DomainError("need at least one sample point");
    std::vector<double> grid(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
        grid[i] = -p.L + 2.0 * p.L * (i + 1) / (points + 1);
    }
    return potential_bound_check(p, grid);
}

double band_scalar(const BandModel& model, double t) {
    if (std::abs(t) > model.half_width() * (1.0 + 1e-12)) throw DomainError("t outside the band");
    const Jet f = model.phi(t);
    if (!(f.value > 0.0)) throw DomainError("warp factor must be positive");
    const double u = f.first / f.value;
    return model.fiber_scalar() / (f.value * f.value) - 4.0 * f.second / f.value - 2.0 * u * u;
}

double level_mean_curvature(const BandModel& model, double s) {
    const Jet f = model.phi(s);
    return -2.0 * f.first / f.value;
}

double functional(const BandModel& model, double s, const PotentialParams& p) {
    check_inside(s, p);
    if (std::abs(s) > model.half_width()) throw DomainError("level outside the band");
    auto integrand = [&](double t) {
        const double f = model.phi(t).value;
        return potential_value<double>(t, p) * f * f;
    };
    double integral = 0.0;
    if (s != 0.0) {
        integral = boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, s, 20, 1e-13);
    }
    const double f = model.phi(s).value;
    return model.fiber_area() * (f * f + integral);
}

double functional_derivative(const BandModel& model, double s, const PotentialParams& p) {
    check_inside(s, p);
    const Jet f = model.phi(s);
    return model.fiber_area() * (potential_value<double>(s, p) * f.value * f.value + 2.0 * f.value * f.first);
}

double functional_second_derivative(const BandModel& model, double s, const PotentialParams& p) {
    check_inside(s, p);
    const Jet f = model.phi(s);
    const double h = potential_value<double>(s, p);
    const double dh = potential_slope<double>(s, p);
    return model.fiber_area() * (2.0 * f.first * f.first + 2.0 * f.value * f.second +
                                 dh * f.value * f.value + 2.0 * h * f.value * f.first);
}

MuBubbleSolution minimize(const BandModel& model, const PotentialParams& p) {
    check_params(p);
    if (p.L > model.half_width()) throw DomainError("potential width L must not exceed the band half-width");

    constexpr int kGrid = 10000;
    constexpr int kGaussPoints = 10;
    using Gauss = boost::math::quadrature::gauss<double, kGaussPoints>;
    const double delta = 1e-4 * p.L;
    const double lo = -p.L + delta;
    const double hi = p.L - delta;
    const double step = (hi - lo) / (kGrid - 1);

    std::vector<double> s(kGrid);
    for (int i = 0; i < kGrid; ++i) s[i] = lo + step * i;

    auto integrand = [&](double t) {
        const double f = model.phi(t).value;
        return potential_value<double>(t, p) * f * f;
    };

    // Cumulative potential integral from 0, cell by cell.
    const int j0 = static_cast<int>(std::lround(-lo / step));
    std::vector<double> cumulative(kGrid);
    cumulative[j0] = s[j0] == 0.0 ? 0.0 : Gauss::integrate(integrand, 0.0, s[j0]);
    for (int j = j0 + 1; j < kGrid; ++j) cumulative[j] = cumulative[j - 1] + Gauss::integrate(integrand, s[j - 1], s[j]);
    for (int j = j0 - 1; j >= 0; --j) cumulative[j] = cumulative[j + 1] - Gauss::integrate(integrand, s[j], s[j + 1]);

    int best = 0;
    double best_value = std::numeric_limits<double>::infinity();
    for (int j = 0; j < kGrid; ++j) {
        const double f = model.phi(s[j]).value;
        const double value = model.fiber_area() * (f * f + cumulative[j]);
        if (value < best_value) {
            best_value = value;
            best = j;
        }
    }
    if (best == 0 || best == kGrid - 1) {
        std::ostringstream os;
        os << "minimizer escaped to the edge of (-L, L) at s = " << s[best];
        throw BoundaryEscapeError(os.str());
    }

    // The sign of dA/ds is the sign of h - H.
    auto residual = [&](double x) {
        const Jet f = model.phi(x);
        return potential_value<double>(x, p) + 2.0 * f.first / f.value;
    };
    double a = s[best - 1];
    double b = s[best + 1];
    double fa = residual(a);
    double fb = residual(b);
    double level = s[best];
    if (fa == 0.0) {
        level = a;
    } else if (fb == 0.0) {
        level = b;
    } else if (fa < 0.0 && fb > 0.0) {
        boost::uintmax_t iterations = 200;
        const auto root = boost::math::tools::toms748_solve(residual, a, b, fa, fb,
                                                            boost::math::tools::eps_tolerance<double>(52), iterations);
        level = 0.5 * (root.first + root.second);
    } else {
        auto local = [&](double x) { return functional(model, x, p); };
        level = boost::math::tools::brent_find_minima(local, a, b, 52).first;
    }

    const Jet f = model.phi(level);
    MuBubbleSolution sol;
    sol.level = level;
    sol.area = model.fiber_area() * f.value * f.value;
    sol.mean_curvature = level_mean_curvature(model, level);
    sol.potential_at_level = potential_value<double>(level, p);
    sol.second_derivative = functional_second_derivative(model, level, p);
    // Levels are homothetic copies of V, so R_C = R_V / phi^2.
    sol.total_curvature = model.fiber_scalar() / (f.value * f.value) * sol.area;
    return sol;
}

double stability_report(const BandModel& model, const MuBubbleSolution& sol, const PotentialParams& p) {
    (void)model;
    const double h = potential(sol.level, p);
    const double grad_h = std::abs(potential_derivative(sol.level, p));
    return sol.total_curvature - (1.5 * h * h - 2.0 * grad_h) * sol.area;
}

double band_width_bound(int genus, double A0, double r0) {
    if (genus < 1) throw DomainError("genus must be at least 1");
    if (!(A0 > 0.0)) throw DomainError("slice area must be positive");
    if (!band_hypothesis_holds(genus, A0, r0)) {
        std::ostringstream os;
        os << "band-width hypothesis fails: r0 = " << r0 << " is not above -8 pi (g-1)/A0 = "
           << -8.0 * kPi * (genus - 1) / A0;
        throw HypothesisError(os.str());
    }
    return kPi * std::sqrt(2.0 * A0 / gauss_bonnet_denominator(genus, A0, r0));
}

AuditResult band_width_audit(const BandModel& model, bool doubling) {
    const double T = model.half_width();
    const double lo = doubling ? 0.0 : -T;
    AuditResult result;
    result.r0 = scan_minimum([&](double t) { return band_scalar(model, t); }, lo, T, 4001);
    const double f0 = model.phi(0.0).value;
    result.A0 = f0 * f0 * model.fiber_area();
    // t is arclength, so both boundary slices sit at distance T.
    result.width = T;

    if (doubling && model.phi(0.0).first > 0.0) {
        result.reason = "middle slice has negative mean curvature (phi'(0) > 0)";
        return result;
    }
    if (!band_hypothesis_holds(model.genus(), result.A0, result.r0)) {
        result.reason = "r0 does not exceed -8 pi (g-1) / A0";
        return result;
    }
    result.bound = band_width_bound(model.genus(), result.A0, result.r0);
    result.outcome = result.width <= *result.bound ? AuditOutcome::holds : AuditOutcome::violated;
    return result;
}

double transverse_path_length(const BandModel& model, double t0, double t1,
                              const std::function<double(double)>& fiber_speed) {
    auto speed = [&](double t) {
        const double v = model.phi(t).value * fiber_speed(t);
        return std::sqrt(1.0 + v * v);
    };
    const double lo = std::min(t0, t1);
    const double hi = std::max(t0, t1);
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(speed, lo, hi, 15, 1e-13);
}

HypothesisVerdict theorem1_hypothesis(std::span<const std::pair<double, double>> samples) {
    HypothesisVerdict verdict;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (!(samples[i].first > 0.0)) throw DomainError("radii must be positive");
        if (i > 0 && !(samples[i].first > samples[i - 1].first)) {
            throw DomainError("radii must be strictly increasing");
        }
        if (!(samples[i].second >= 0.0)) throw DomainError("areas must be nonnegative");
    }
    if (samples.size() < 3) return verdict;

    const std::size_t tail = std::max<std::size_t>(3, (samples.size() + 1) / 2);
    double ratio = std::numeric_limits<double>::infinity();
    for (std::size_t i = samples.size() - tail; i < samples.size(); ++i) {
        const double r = samples[i].first;
        ratio = std::min(ratio, samples[i].second / (r * r));
    }
    verdict.tail_samples = tail;
    verdict.tail_ratio = ratio;
    verdict.margin = kAreaRatioThreshold - ratio;
    // Strict inequality; the relative guard keeps A = (12/pi) r^2 rejected
    // after rounding.
    verdict.status = ratio < kAreaRatioThreshold * (1.0 - 1e-12) ? HypothesisStatus::satisfied
                                                                  : HypothesisStatus::not_satisfied;
    return verdict;
}

}  // namespace pscend
