#pragma once

// Warped circle-bundle metrics dt^2 + a(t)^2 theta^2 + b(t)^2 pi^*h on
// [0, inf) x X, where X -> N is a circle bundle with connection theta and
// d theta = pi^* Omega.
//
// Norm convention for the curvature form: |Omega|_h^2 = h^{ik} h^{jl}
// Omega_ij Omega_kl (full contraction). With this convention the closed-form
// scalar curvature below agrees with the finite-difference oracle; see
// tests/test_geometry_catalog.cpp.

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pscend/chart_curvature.hpp"

namespace pscend {

/// Value with first and second derivative.
struct Jet {
    double value = 0.0;
    double first = 0.0;
    double second = 0.0;
};

using JetFunction = std::function<Jet(double)>;

enum class CaseLabel { n2, n3, n4, n5, n_ge6, custom };

std::string to_string(CaseLabel label);

class WarpProfile {
public:
    /// Paper-family profiles come from case_profile(); this constructor is for
    /// user profiles and runs the derivative self-check on a grid in [0, t_check].
    static WarpProfile custom(JetFunction a, JetFunction b, double t_check = 20.0);

    /// No self-check; used for profiles with exact closed-form derivatives.
    WarpProfile(JetFunction a, JetFunction b, CaseLabel label)
        : a_(std::move(a)), b_(std::move(b)), label_(label) {}

    Jet a(double t) const { return a_(t); }
    Jet b(double t) const { return b_(t); }
    CaseLabel label() const { return label_; }

private:
    JetFunction a_;
    JetFunction b_;
    CaseLabel label_;
};

/// Largest mismatch, relative to |f| + |f'| + |f''|, between the supplied
/// derivatives of f and central differences, over `grid`.
double jet_derivative_mismatch(const JetFunction& f, std::span<const double> grid);

/// Largest relative mismatch between supplied and finite-difference
/// derivatives of both profile functions over `grid`.
double profile_derivative_mismatch(const WarpProfile& profile, std::span<const double> grid);

struct BaseGeometry {
    int base_dim = 0;
    std::function<double(std::span<const double>)> scalar_h;
    std::function<double(std::span<const double>)> omega_norm;
    double omega_sup = 0.0;
    /// Base points at which the invariants and certificates are sampled.
    std::vector<Point> sample_points;

    int total_dim() const { return base_dim + 2; }
};

/// Throws DomainError if a sampled invariant of the base fails.
void validate(const BaseGeometry& base);

/// R = R_h/b^2 - a^2/(4 b^4) |Omega|^2 - 2a''/a - 2(n-2) b''/b
///     - 2(n-2) (a'/a)(b'/b) - (n-2)(n-3) (b'/b)^2.
double scalar_closed_form(const WarpProfile& profile, int n, double t, double scalar_h,
                          double omega_norm);

/// The warping family used for dimension n. `coeff` is a_0 for n = 4 and
/// epsilon for n >= 5; it is ignored for n = 2, 3.
WarpProfile case_profile(int n, double coeff);

/// The per-case scalar curvature formula obtained by substituting
/// case_profile(n, coeff) into scalar_closed_form and simplifying.
double case_scalar_formula(int n, double coeff, double t, double scalar_h, double omega_norm);

/// Uniform lower bound over the base for n >= 4, using R_h >= 0 and
/// |Omega| <= omega_sup.
double case_lower_bound(int n, double coeff, double omega_sup, double t);

/// Open upper bound on the free coefficient; nullopt when omega_sup = 0
/// (every positive coefficient works).
std::optional<double> threshold(int n, double omega_sup);

enum class Verdict { positive, fails_at, inconclusive };

std::string to_string(Verdict verdict);

struct PositivityCertificate {
    CaseLabel case_label = CaseLabel::custom;
    std::map<std::string, double> params;
    Verdict verdict = Verdict::inconclusive;
    std::optional<double> fails_at;           // first t with sampled R <= 0
    std::optional<double> bound_negative_at;  // first t with the lower bound <= 0
    double min_lower_bound = 0.0;
    double min_lower_bound_t = 0.0;
    std::string grid_spec;
    std::string tail_argument;
};

/// Certifies R > 0 for all t >= 0 by checking the lower bound on a grid in
/// [0, t_max] and closing the tail t > t_max with a per-case decay argument.
PositivityCertificate certify(int n, double coeff, const BaseGeometry& base, double t_max,
                              int grid_points);

}  // namespace pscend
