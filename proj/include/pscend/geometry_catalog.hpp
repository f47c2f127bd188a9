#pragma once

// Concrete circle bundles with explicit connections, realized on coordinate
// charts (t, fiber angle, base coordinates).
//
// Every connection is written theta = d(phi) + A_i dx^i with phi of period
// 2 pi, so theta restricts to d(phi) on fibers and a(t) is the fiber radius.

#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pscend/bundle_metric.hpp"
#include "pscend/chart_curvature.hpp"
#include "pscend/sampling.hpp"

namespace pscend {

struct CatalogEntry {
    std::string name;
    BaseGeometry base;
    std::string connection_desc;
    std::function<Eigen::MatrixXd(std::span<const double>)> base_metric;
    /// Components A_i of theta - d(phi) on the base chart.
    std::function<Eigen::VectorXd(std::span<const double>)> connection;
    /// Region of the base chart that keeps clear of coordinate singularities.
    Box safe_base_box;
    std::vector<Point> reference_points;

    int base_dim() const { return base.base_dim; }
    int total_dim() const { return base.total_dim(); }

    /// dt^2 + a^2 (d phi + A)^2 + b^2 h on coordinates (t, phi, x...).
    ChartMetric total_chart(const WarpProfile& profile) const;

    /// Uniform sample from safe_base_box.
    Point random_base_point(std::mt19937_64& rng) const;
};

/// Flat torus base with theta = dz - x dy (the Heisenberg nilmanifold).
CatalogEntry heisenberg_entry();

/// Unit round 2-sphere base with the Hopf connection
/// theta = d(phi) + (1/2) cos(vartheta) d(psi), chart polar angle in [0.3, pi - 0.3].
CatalogEntry hopf_entry();
CatalogEntry hopf_entry(std::vector<Point> reference_points);

/// Product bundle over a flat torus (base_R = 0) or a round sphere of
/// scalar curvature base_R.
CatalogEntry trivial_entry(int base_dim, double base_R);

/// Curvature form from the chart, Omega_ij = d_i A_j - d_j A_i by central
/// differences, and its full-contraction norm.
double chart_omega_norm(const CatalogEntry& entry, std::span<const double> base_point,
                        double step = 1e-5);

/// Metric length of the fiber circle through (t, base_point), by quadrature
/// over phi in [0, 2 pi].
double fiber_length(const CatalogEntry& entry, const WarpProfile& profile, double t,
                    std::span<const double> base_point);

/// Entries used by the CLI `catalog` subcommand, in listing order.
std::vector<CatalogEntry> standard_catalog();

/// Resolves "heisenberg", "hopf" or "trivial:<base_dim>:<base_R>".
CatalogEntry entry_by_name(const std::string& name);

}  // namespace pscend
