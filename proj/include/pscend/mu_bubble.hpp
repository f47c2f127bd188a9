#pragma once

// mu-bubbles in a rotationally symmetric band g = dt^2 + phi(t)^2 g_V on
// [-T, T] x V, with V a closed surface of constant curvature.
//
// Orientation: the reference region is {t >= 0}; the free boundary is the
// level {t = s} and its outward normal is -d/dt, pointing toward the end.
// Hence the mean curvature of a level is H(s) = div(-d/dt) = -2 phi'/phi,
// the functional is
//     A(s) = A_V [ phi(s)^2 + integral_0^s h(t) phi(t)^2 dt ],
// and critical levels satisfy H(s) = h(s).

#include <functional>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pscend/bundle_metric.hpp"

namespace pscend {

class BandModel {
public:
    /// Throws DomainError unless T > 0, genus >= 1, A_V > 0 and phi > 0 on
    /// [-T, T] (sampled).
    BandModel(double half_width, JetFunction phi, int genus, double fiber_area,
              std::string description = "custom");

    double half_width() const { return half_width_; }
    Jet phi(double t) const { return phi_(t); }
    int genus() const { return genus_; }
    double fiber_area() const { return fiber_area_; }
    /// Constant fiber curvature fixed by Gauss-Bonnet: R_V A_V = 8 pi (1 - genus).
    double fiber_scalar() const { return fiber_scalar_; }
    const std::string& description() const { return description_; }

private:
    double half_width_;
    JetFunction phi_;
    int genus_;
    double fiber_area_;
    double fiber_scalar_;
    std::string description_;
};

struct PotentialParams {
    double L = 1.0;
    double eps2 = 0.0;  // the smoothing slack epsilon''
    int dim_n = 3;
};

struct MuBubbleSolution {
    double level = 0.0;
    double area = 0.0;
    double mean_curvature = 0.0;
    double potential_at_level = 0.0;
    double second_derivative = 0.0;
    double total_curvature = 0.0;
};

/// h(d) = (1+eps'') (n-1) pi / (n L) * tan(pi d / (2L)), |d| < L.
double potential(double d, const PotentialParams& p);
/// dh/dd.
double potential_derivative(double d, const PotentialParams& p);

/// min over `grid` of (3/2) h^2 - 2 (1+eps'') |h'| + 2 (1+eps'')^2 pi^2 / (3 L^2):
/// the pointwise bound at the extreme gradient |grad d| = 1 + eps''. The
/// expression is evaluated in quadruple precision because near |d| = L it is
/// a difference of two terms of order sec^2.
double potential_bound_check(const PotentialParams& p, std::span<const double> grid);
/// Same over `points` uniformly spaced interior points of (-L, L).
double potential_bound_check(const PotentialParams& p, int points);

/// R = R_V/phi^2 - 4 phi''/phi - 2 (phi'/phi)^2.
double band_scalar(const BandModel& model, double t);

double functional(const BandModel& model, double s, const PotentialParams& p);
/// dA/ds = A_V phi^2 (h - H).
double functional_derivative(const BandModel& model, double s, const PotentialParams& p);
double functional_second_derivative(const BandModel& model, double s, const PotentialParams& p);

/// Mean curvature of the level {t = s} with respect to the outward normal.
double level_mean_curvature(const BandModel& model, double s);

/// Global minimizer over (-L, L): grid scan, then a bracketed root solve of
/// the criticality residual h - H.
MuBubbleSolution minimize(const BandModel& model, const PotentialParams& p);

/// total_curvature - [(3/2) h^2 - 2|h'|] * area at the minimizer.
double stability_report(const BandModel& model, const MuBubbleSolution& sol, const PotentialParams& p);

/// pi sqrt(2 A0 / (24 pi (g-1) + 3 r0 A0)); requires r0 > -8 pi (g-1) / A0.
double band_width_bound(int genus, double A0, double r0);

enum class AuditOutcome { holds, violated, not_applicable };

std::string to_string(AuditOutcome outcome);

struct AuditResult {
    AuditOutcome outcome = AuditOutcome::not_applicable;
    double r0 = 0.0;     // min of the band scalar curvature over the checked range
    double A0 = 0.0;     // area of the middle slice
    double width = 0.0;  // distance from the middle slice that is compared
    std::optional<double> bound;
    std::string reason;
};

/// Compares the distance from the middle slice to the boundary with the
/// band-width bound. With `doubling`, only [0, T] is used and the middle
/// slice must have nonnegative mean curvature, i.e. phi'(0) <= 0.
AuditResult band_width_audit(const BandModel& model, bool doubling = false);

/// Length of a path t -> (t, v(t)) in the band, where v moves in the fiber
/// with metric speed `fiber_speed(t)` measured in g_V. Used to check that t is
/// arclength across the band.
double transverse_path_length(const BandModel& model, double t0, double t1,
                              const std::function<double(double)>& fiber_speed);

enum class HypothesisStatus { satisfied, not_satisfied, insufficient_data };

std::string to_string(HypothesisStatus status);

struct HypothesisVerdict {
    HypothesisStatus status = HypothesisStatus::insufficient_data;
    double tail_ratio = 0.0;  // min of A/r^2 over the tail samples
    double margin = 0.0;      // 12/pi - tail_ratio
    std::size_t tail_samples = 0;
};

inline constexpr double kAreaRatioThreshold = 12.0 / std::numbers::pi;

/// Estimates liminf A(r)/r^2 by the minimum over the last half (at least 3)
/// of the samples and compares it strictly with 12/pi.
HypothesisVerdict theorem1_hypothesis(std::span<const std::pair<double, double>> samples);

}  // namespace pscend
