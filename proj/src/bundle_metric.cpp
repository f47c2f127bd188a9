#include "pscend/bundle_metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pscend/errors.hpp"

namespace pscend {

std::string to_string(CaseLabel label) {
    switch (label) {
        case CaseLabel::n2: return "n2";
        case CaseLabel::n3: return "n3";
        case CaseLabel::n4: return "n4";
        case CaseLabel::n5: return "n5";
        case CaseLabel::n_ge6: return "n_ge6";
        case CaseLabel::custom: return "custom";
    }
    return "custom";
}

std::string to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::positive: return "positive";
        case Verdict::fails_at: return "fails_at";
        case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

namespace {

// c (1+t)^p and its derivatives.
Jet power_jet(double c, double p, double t) {
    const double s = 1.0 + t;
    const double v = c * std::pow(s, p);
    return {v, p * v / s, p * (p - 1.0) * v / (s * s)};
}

Jet constant_jet(double c) { return {c, 0.0, 0.0}; }

// a(t) = 1 + sqrt(1+t), the two- and three-dimensional profile.
Jet root_profile(double t) {
    const double r = std::sqrt(1.0 + t);
    return {1.0 + r, 0.5 / r, -0.25 / (r * r * r)};
}

CaseLabel label_for(int n) {
    switch (n) {
        case 2: return CaseLabel::n2;
        case 3: return CaseLabel::n3;
        case 4: return CaseLabel::n4;
        case 5: return CaseLabel::n5;
        default: return CaseLabel::n_ge6;
    }
}

double relative_mismatch(const JetFunction& f, double t) {
    const double h = 1e-4 * std::max(1.0, std::abs(t));
    const Jet c = f(t);
    const Jet p = f(t + h);
    const Jet m = f(t - h);
    const double d1 = (p.value - m.value) / (2.0 * h);
    const double d2 = (p.value - 2.0 * c.value + m.value) / (h * h);
    const double scale = std::abs(c.value) + std::abs(c.first) + std::abs(c.second);
    if (scale == 0.0) return 0.0;
    return std::max(std::abs(d1 - c.first), std::abs(d2 - c.second)) / scale;
}

}  // namespace

WarpProfile WarpProfile::custom(JetFunction a, JetFunction b, double t_check) {
    WarpProfile profile(std::move(a), std::move(b), CaseLabel::custom);
    std::vector<double> grid(201);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        grid[i] = t_check * static_cast<double>(i) / static_cast<double>(grid.size() - 1);
    }
    for (double t : grid) {
        if (!(profile.a(t).value > 0.0) || !(profile.b(t).value > 0.0)) {
            throw DomainError("warp profile must be positive; fails at t = " + std::to_string(t));
        }
    }
    const double mismatch = profile_derivative_mismatch(profile, grid);
    if (!(mismatch <= 1e-6)) {
        std::ostringstream os;
        os << "supplied derivatives disagree with finite differences (relative " << mismatch << ")";
        throw DomainError(os.str());
    }
    return profile;
}

double jet_derivative_mismatch(const JetFunction& f, std::span<const double> grid) {
    double worst = 0.0;
    for (double t : grid) worst = std::max(worst, relative_mismatch(f, t));
    return worst;
}

double profile_derivative_mismatch(const WarpProfile& profile, std::span<const double> grid) {
    double worst = 0.0;
    const JetFunction a = [&](double t) { return profile.a(t); };
    const JetFunction b = [&](double t) { return profile.b(t); };
    for (double t : grid) {
        worst = std::max({worst, relative_mismatch(a, t), relative_mismatch(b, t)});
    }
    return worst;
}

void validate(const BaseGeometry& base) {
    if (base.base_dim < 0) throw DomainError("base dimension must be nonnegative");
    if (!(base.omega_sup >= 0.0)) throw DomainError("omega_sup must be nonnegative");
    if (base.base_dim <= 1 && base.omega_sup != 0.0) {
        throw DomainError("a base of dimension <= 1 carries no curvature form");
    }
    const double slack = 1e-12 * std::max(1.0, base.omega_sup);
    for (const Point& p : base.sample_points) {
        if (static_cast<int>(p.size()) != base.base_dim) {
            throw DomainError("sample point dimension does not match the base");
        }
        const double r = base.scalar_h(p);
        if (!(r >= -1e-12)) throw DomainError("base scalar curvature is negative at a sample point");
        if (base.base_dim <= 1 && r != 0.0) {
            throw DomainError("a base of dimension <= 1 has zero scalar curvature");
        }
        const double w = base.omega_norm(p);
        if (!(w >= 0.0) || w > base.omega_sup + slack) {
            throw DomainError("curvature form norm exceeds omega_sup at a sample point");
        }
    }
}

double scalar_closed_form(const WarpProfile& profile, int n, double t, double scalar_h,
                          double omega_norm) {
    if (n < 2) throw DomainError("total dimension must be at least 2");
    if (!(t >= 0.0)) throw DomainError("t must be nonnegative");
    if (!(scalar_h >= 0.0) || !(omega_norm >= 0.0)) {
        throw DomainError("R_h and |Omega| must be nonnegative");
    }
    const Jet a = profile.a(t);
    const Jet b = profile.b(t);
    if (!(a.value > 0.0) || !(b.value > 0.0)) throw DomainError("warp factors must be positive");

    const double m = n - 2;
    const double ua = a.first / a.value;
    const double ub = b.first / b.value;
    const double b2 = b.value * b.value;
    return scalar_h / b2 - a.value * a.value / (4.0 * b2 * b2) * omega_norm * omega_norm -
           2.0 * a.second / a.value - 2.0 * m * b.second / b.value - 2.0 * m * ua * ub -
           m * (m - 1.0) * ub * ub;
}

WarpProfile case_profile(int n, double coeff) {
    if (n < 2) throw DomainError("case profiles need n >= 2");
    if (n <= 3) {
        return WarpProfile(root_profile, [](double) { return constant_jet(1.0); }, label_for(n));
    }
    if (!(coeff > 0.0)) throw DomainError("the free coefficient must be positive for n >= 4");
    if (n == 4) {
        return WarpProfile([coeff](double) { return constant_jet(coeff); },
                           [](double t) { return power_jet(1.0, 0.6, t); }, CaseLabel::n4);
    }
    if (n == 5) {
        return WarpProfile([coeff](double t) { return power_jet(coeff, -0.4, t); },
                           [](double t) { return power_jet(1.0, 0.4, t); }, CaseLabel::n5);
    }
    const double m = n - 1;
    return WarpProfile([coeff, n, m](double t) { return power_jet(coeff, -(n - 5) / m, t); },
                       [m](double t) { return power_jet(1.0, 2.0 / m, t); }, CaseLabel::n_ge6);
}

double case_scalar_formula(int n, double coeff, double t, double scalar_h, double omega_norm) {
    if (n < 2) throw DomainError("case formulas need n >= 2");
    if (!(t >= 0.0)) throw DomainError("t must be nonnegative");
    const double s = 1.0 + t;
    const double w2 = omega_norm * omega_norm;
    if (n <= 3) {
        return 1.0 / (2.0 * std::pow(s, 1.5) * (1.0 + std::sqrt(s)));
    }
    const double c2 = coeff * coeff;
    if (n == 4) {
        return std::pow(s, -1.2) * scalar_h - c2 / 4.0 * std::pow(s, -2.4) * w2 + 6.0 / 25.0 / (s * s);
    }
    if (n == 5) {
        return std::pow(s, -0.8) * scalar_h - c2 / 4.0 * std::pow(s, -2.4) * w2 + 8.0 / 25.0 / (s * s);
    }
    const double m = n - 1;
    return std::pow(s, -4.0 / m) * scalar_h - c2 / 4.0 / (s * s) * w2 +
           4.0 * (n - 5) / (m * m) / (s * s);
}

double case_lower_bound(int n, double coeff, double omega_sup, double t) {
    if (n < 4) throw DomainError("no separate lower bound for n < 4; the exact formula is the bound");
    if (!(t >= 0.0)) throw DomainError("t must be nonnegative");
    const double s = 1.0 + t;
    const double k = coeff * coeff * omega_sup * omega_sup / 4.0;
    if (n == 4) return 6.0 / 25.0 / (s * s) - k * std::pow(s, -2.4);
    if (n == 5) return 8.0 / 25.0 / (s * s) - k * std::pow(s, -2.4);
    const double m = n - 1;
    return (4.0 * (n - 5) / (m * m) - k) / (s * s);
}

std::optional<double> threshold(int n, double omega_sup) {
    if (n < 4) throw DomainError("no threshold: n = 2 and n = 3 have no free positivity constraint");
    if (!(omega_sup >= 0.0)) throw DomainError("omega_sup must be nonnegative");
    if (omega_sup == 0.0) return std::nullopt;
    if (n == 4) return 2.0 * std::sqrt(6.0) / (5.0 * omega_sup);
    if (n == 5) return 4.0 * std::sqrt(2.0) / (5.0 * omega_sup);
    return 4.0 * std::sqrt(static_cast<double>(n - 5)) / ((n - 1) * omega_sup);
}

PositivityCertificate certify(int n, double coeff, const BaseGeometry& base, double t_max,
                              int grid_points) {
    if (n < 2) throw DomainError("total dimension must be at least 2");
    if (base.total_dim() != n) {
        throw DomainError("base of dimension " + std::to_string(base.base_dim) +
                          " is inconsistent with n = " + std::to_string(n));
    }
    if (n >= 4 && !(coeff > 0.0)) throw DomainError("the free coefficient must be positive");
    if (!(t_max > 0.0) || grid_points < 2) throw DomainError("need t_max > 0 and at least 2 grid points");
    validate(base);

    const WarpProfile profile = case_profile(n, coeff);
    auto lower_bound = [&](double t) {
        if (n <= 3) return scalar_closed_form(profile, n, t, 0.0, 0.0);
        return case_lower_bound(n, coeff, base.omega_sup, t);
    };

    PositivityCertificate cert;
    cert.case_label = label_for(n);
    cert.params = {{"n", n},
                   {"coeff", coeff},
                   {"omega_sup", base.omega_sup},
                   {"t_max", t_max},
                   {"grid_points", grid_points}};
    {
        std::ostringstream os;
        os.precision(17);
        os << "uniform grid of " << grid_points << " points on [0, " << t_max << "]";
        cert.grid_spec = os.str();
    }

    cert.min_lower_bound = std::numeric_limits<double>::infinity();
    std::vector<double> failing;
    for (int k = 0; k < grid_points; ++k) {
        const double t = t_max * k / (grid_points - 1);
        const double lb = lower_bound(t);
        if (lb < cert.min_lower_bound) {
            cert.min_lower_bound = lb;
            cert.min_lower_bound_t = t;
        }
        if (lb <= 0.0) {
            if (!cert.bound_negative_at) cert.bound_negative_at = t;
            failing.push_back(t);
        }
    }

    // Beyond t_max every bound is (1+t)^-2 times a bracket that is
    // nondecreasing in t, so a positive bracket at t_max closes the tail.
    bool tail_ok = false;
    if (n <= 3) {
        tail_ok = true;
        cert.tail_argument = "exact: 1/(2 (1+t)^{3/2} (1+sqrt(1+t))) > 0 for every t";
    } else if (n <= 5) {
        const double c = n == 4 ? 6.0 / 25.0 : 8.0 / 25.0;
        const double k = coeff * coeff * base.omega_sup * base.omega_sup / 4.0;
        tail_ok = c - k * std::pow(1.0 + t_max, -0.4) > 0.0;
        cert.tail_argument =
            "(1+t)^-2 term dominates the (1+t)^-12/5 term: bracket c - k (1+t)^-2/5 is "
            "nondecreasing, positive at t_max";
        if (!tail_ok) cert.tail_argument += " fails";
    } else {
        const double m = n - 1;
        tail_ok = 4.0 * (n - 5) / (m * m) - coeff * coeff * base.omega_sup * base.omega_sup / 4.0 > 0.0;
        cert.tail_argument = "bound is a constant multiple of (1+t)^-2; coefficient ";
        cert.tail_argument += tail_ok ? "positive" : "nonpositive";
    }

    if (failing.empty() && tail_ok) {
        cert.verdict = Verdict::positive;
        return cert;
    }

    // The bounds are sufficient only; look for genuine negativity of R.
    for (double t : failing) {
        double worst = std::numeric_limits<double>::infinity();
        if (base.sample_points.empty() && base.base_dim == 0) {
            worst = scalar_closed_form(profile, n, t, 0.0, 0.0);
        }
        for (const Point& p : base.sample_points) {
            worst = std::min(worst, scalar_closed_form(profile, n, t, std::max(0.0, base.scalar_h(p)),
                                                       base.omega_norm(p)));
        }
        if (worst <= 0.0) {
            cert.verdict = Verdict::fails_at;
            cert.fails_at = t;
            return cert;
        }
    }
    cert.verdict = Verdict::inconclusive;
    return cert;
}

}  // namespace pscend
