#include "pscend/band_families.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <sstream>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "pscend/errors.hpp"
#include "pscend/sampling.hpp"

namespace pscend {

namespace {

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo * std::exp(std::log(hi / lo) * uniform01(rng));
}

double uniform(std::mt19937_64& rng, double lo, double hi) { return lo + (hi - lo) * uniform01(rng); }

}  // namespace

const std::vector<std::string>& phi_families() {
    static const std::vector<std::string> families = {"constant", "exp", "cosh", "cos", "power", "spline"};
    return families;
}

JetFunction make_phi(const PhiSpec& spec, double half_width) {
    if (!(half_width > 0.0)) throw DomainError("band half-width must be positive");
    if (spec.family != "spline" && !(spec.amp > 0.0)) throw DomainError("phi amplitude must be positive");
    const double A = spec.amp;
    const double k = spec.rate;
    if (spec.family == "constant") {
        return [A](double) { return Jet{A, 0.0, 0.0}; };
    }
    if (spec.family == "exp") {
        return [A, k](double t) {
            const double v = A * std::exp(k * t);
            return Jet{v, k * v, k * k * v};
        };
    }
    if (spec.family == "cosh") {
        return [A, k](double t) {
            return Jet{A * std::cosh(k * t), A * k * std::sinh(k * t), A * k * k * std::cosh(k * t)};
        };
    }
    if (spec.family == "cos") {
        if (!(std::abs(k) * half_width < std::numbers::pi / 2)) {
            throw DomainError("cos family needs |rate| * T < pi/2");
        }
        return [A, k](double t) {
            return Jet{A * std::cos(k * t), -A * k * std::sin(k * t), -A * k * k * std::cos(k * t)};
        };
    }
    if (spec.family == "power") {
        if (!(std::abs(k) * half_width < 1.0)) throw DomainError("power family needs |rate| * T < 1");
        const double p = spec.power;
        return [A, k, p](double t) {
            const double s = 1.0 + k * t;
            const double v = A * std::pow(s, p);
            return Jet{v, p * k * v / s, p * (p - 1.0) * k * k * v / (s * s)};
        };
    }
    if (spec.family == "spline") {
        if (spec.samples.size() < 4) throw DomainError("spline family needs at least 4 samples");
        for (double v : spec.samples) {
            if (!(v > 0.0)) throw DomainError("spline samples must be positive");
        }
        const double h = 2.0 * half_width / static_cast<double>(spec.samples.size() - 1);
        auto spline = std::make_shared<boost::math::interpolators::cardinal_cubic_b_spline<double>>(
            spec.samples.begin(), spec.samples.end(), -half_width, h);
        JetFunction phi = [spline](double t) {
            return Jet{(*spline)(t), spline->prime(t), spline->double_prime(t)};
        };
        // The interpolant is cubic inside each cell, so differences taken at
        // cell midpoints must reproduce the supplied derivatives.
        std::vector<double> mids;
        for (std::size_t i = 0; i + 1 < spec.samples.size(); ++i) mids.push_back(-half_width + h * (i + 0.5));
        if (!(jet_derivative_mismatch(phi, mids) <= 1e-6)) {
            throw DomainError("spline derivatives failed the self-consistency check");
        }
        return phi;
    }
    throw DomainError("unknown phi family '" + spec.family + "'");
}

std::string describe(const PhiSpec& spec) {
    std::ostringstream os;
    os.precision(17);
    os << spec.family;
    if (spec.family == "spline") {
        os << "(" << spec.samples.size() << " samples)";
    } else {
        os << "(amp=" << spec.amp;
        if (spec.family != "constant") os << ", rate=" << spec.rate;
        if (spec.family == "power") os << ", power=" << spec.power;
        os << ")";
    }
    return os.str();
}

BandModel RandomBand::model() const {
    return BandModel(half_width, make_phi(phi, half_width), genus, fiber_area, describe(phi));
}

RandomBand random_band(std::mt19937_64& rng) {
    static const char* families[] = {"constant", "exp", "cosh", "cos", "power"};
    RandomBand band;
    band.phi.family = families[std::min<std::size_t>(4, static_cast<std::size_t>(5 * uniform01(rng)))];
    band.phi.amp = log_uniform(rng, 0.5, 2.0);
    band.phi.rate = log_uniform(rng, 0.1, 2.0);
    band.phi.power = uniform(rng, -1.0, 1.0);
    band.genus = 1 + std::min(2, static_cast<int>(3 * uniform01(rng)));
    band.fiber_area = log_uniform(rng, 0.5, 20.0);
    const double u = uniform(rng, 0.05, 1.0);
    if (band.phi.family == "cos") {
        band.half_width = 0.95 * u * (std::numbers::pi / 2) / band.phi.rate;
    } else if (band.phi.family == "power") {
        band.half_width = 0.95 * u / band.phi.rate;
    } else {
        band.half_width = uniform(rng, 0.1, 3.0);
    }
    return band;
}

}  // namespace pscend
