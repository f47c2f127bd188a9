#pragma once

// Finite-difference curvature of metrics given in a single coordinate chart.
//
// Sign convention: the unit round 2-sphere has scalar curvature +2, so that
// the integral of R over a closed surface is 4*pi*chi.

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace pscend {

using Point = std::vector<double>;
using MetricMatrix = Eigen::MatrixXd;

/// Axis-aligned coordinate box; an empty box places no restriction.
struct Box {
    std::vector<double> lower;
    std::vector<double> upper;

    bool contains(std::span<const double> p) const;
};

struct ChartMetric {
    int dim = 0;
    /// Must be reentrant: it is called from every stencil point.
    std::function<MetricMatrix(std::span<const double>)> components;
    Box domain_hint;
};

/// Christoffel symbols of the second kind, Gamma^k_ij, stored densely.
class Christoffel {
public:
    explicit Christoffel(int dim) : dim_(dim), data_(static_cast<std::size_t>(dim * dim * dim), 0.0) {}

    int dim() const { return dim_; }
    double& operator()(int k, int i, int j) { return data_[index(k, i, j)]; }
    double operator()(int k, int i, int j) const { return data_[index(k, i, j)]; }

private:
    std::size_t index(int k, int i, int j) const {
        return static_cast<std::size_t>((k * dim_ + i) * dim_ + j);
    }

    int dim_;
    std::vector<double> data_;
};

struct CurvatureReport {
    Point point;
    double scalar = 0.0;
    Eigen::MatrixXd ricci;
    double step = 0.0;
    double estimated_error = 0.0;
};

inline constexpr double kDefaultStep = 1e-4;
inline constexpr double kMaxConditionNumber = 1e12;

Christoffel christoffel(const ChartMetric& metric, std::span<const double> point,
                        double step = kDefaultStep);

/// Scalar curvature and Ricci tensor at `point`, evaluated with second-order
/// central differences of the metric components, Richardson-extrapolated
/// from steps 2h and h. The error estimate compares steps h and h/2 (it
/// bounds the plain step-h value, hence also the extrapolated one); the
/// three-step ratio guards against steps outside the asymptotic regime.
CurvatureReport scalar_curvature(const ChartMetric& metric, std::span<const double> point,
                                 double step = kDefaultStep);

}  // namespace pscend
