#include "pscend/chart_curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pscend/errors.hpp"

namespace pscend {

bool Box::contains(std::span<const double> p) const {
    if (lower.empty() && upper.empty()) return true;
    if (lower.size() != p.size() || upper.size() != p.size()) return false;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (!(p[i] >= lower[i] && p[i] <= upper[i])) return false;
    }
    return true;
}

namespace {

// Metric with its first and second coordinate derivatives at one point.
struct MetricJet {
    Eigen::MatrixXd g;
    Eigen::MatrixXd ginv;
    std::vector<Eigen::MatrixXd> dg;                   // dg[c] = d_c g
    std::vector<std::vector<Eigen::MatrixXd>> ddg;     // ddg[c][d] = d_c d_d g
};

std::string describe(std::span<const double> p) {
    std::ostringstream os;
    os << "(";
    for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
    os << ")";
    return os.str();
}

Eigen::MatrixXd evaluate_checked(const ChartMetric& metric, const Point& p) {
    Eigen::MatrixXd g = metric.components(p);
    if (g.rows() != metric.dim || g.cols() != metric.dim) {
        throw DomainError("metric evaluator returned a matrix of the wrong size");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(g);
    if (llt.info() != Eigen::Success) {
        throw DegenerateMetricError("degenerate metric at stencil point " + describe(p));
    }
    return g;
}

void check_center(const Eigen::MatrixXd& g, std::span<const double> p) {
    const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-14 * scale) {
        throw DomainError("metric components are not symmetric at " + describe(p));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
    const double lo = eig.eigenvalues().minCoeff();
    const double hi = eig.eigenvalues().maxCoeff();
    if (!(lo > 0.0) || hi / lo > kMaxConditionNumber) {
        throw DegenerateMetricError("degenerate metric at " + describe(p));
    }
}

void check_stencil_domain(const ChartMetric& metric, std::span<const double> point, double step) {
    if (!(step > 0.0) || !std::isfinite(step)) throw DomainError("finite-difference step must be positive");
    if (static_cast<int>(point.size()) != metric.dim) {
        throw DomainError("point has dimension " + std::to_string(point.size()) + ", chart has " +
                          std::to_string(metric.dim));
    }
    Point q(point.begin(), point.end());
    for (int i = 0; i < metric.dim; ++i) {
        for (double sign : {-1.0, 1.0}) {
            q[i] = point[i] + sign * step;
            if (!metric.domain_hint.contains(q)) {
                throw DomainError("stencil leaves the chart domain at " + describe(point));
            }
        }
        q[i] = point[i];
    }
}

MetricJet metric_jet(const ChartMetric& metric, std::span<const double> point, double h,
                     bool with_second) {
    const int n = metric.dim;
    const Point p0(point.begin(), point.end());

    MetricJet jet;
    jet.g = evaluate_checked(metric, p0);
    check_center(jet.g, point);
    jet.ginv = jet.g.llt().solve(Eigen::MatrixXd::Identity(n, n));

    std::vector<Eigen::MatrixXd> plus(n), minus(n);
    jet.dg.resize(n);
    for (int c = 0; c < n; ++c) {
        Point q = p0;
        q[c] = p0[c] + h;
        plus[c] = evaluate_checked(metric, q);
        q[c] = p0[c] - h;
        minus[c] = evaluate_checked(metric, q);
        jet.dg[c] = (plus[c] - minus[c]) / (2.0 * h);
    }
    if (!with_second) return jet;

    jet.ddg.assign(n, std::vector<Eigen::MatrixXd>(n));
    for (int c = 0; c < n; ++c) {
        jet.ddg[c][c] = (plus[c] - 2.0 * jet.g + minus[c]) / (h * h);
        for (int d = c + 1; d < n; ++d) {
            Point q = p0;
            q[c] = p0[c] + h;
            q[d] = p0[d] + h;
            const Eigen::MatrixXd pp = evaluate_checked(metric, q);
            q[d] = p0[d] - h;
            const Eigen::MatrixXd pm = evaluate_checked(metric, q);
            q[c] = p0[c] - h;
            const Eigen::MatrixXd mm = evaluate_checked(metric, q);
            q[d] = p0[d] + h;
            const Eigen::MatrixXd mp = evaluate_checked(metric, q);
            jet.ddg[c][d] = (pp - pm - mp + mm) / (4.0 * h * h);
            jet.ddg[d][c] = jet.ddg[c][d];
        }
    }
    return jet;
}

Christoffel christoffel_from_jet(const MetricJet& jet) {
    const int n = static_cast<int>(jet.g.rows());
    Christoffel gamma(n);
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                double sum = 0.0;
                for (int l = 0; l < n; ++l) {
                    sum += jet.ginv(k, l) * (jet.dg[i](j, l) + jet.dg[j](i, l) - jet.dg[l](i, j));
                }
                gamma(k, i, j) = 0.5 * sum;
                gamma(k, j, i) = 0.5 * sum;
            }
        }
    }
    return gamma;
}

struct RicciScalar {
    Eigen::MatrixXd ricci;
    double scalar = 0.0;
    double noise = 0.0;  // roundoff floor of the second differences
};

RicciScalar ricci_from_jet(const MetricJet& jet, double h) {
    const int n = static_cast<int>(jet.g.rows());
    const Christoffel gamma = christoffel_from_jet(jet);

    // d_c g^{ab} = -g^{ai} (d_c g_ij) g^{jb}
    std::vector<Eigen::MatrixXd> dginv(n);
    for (int c = 0; c < n; ++c) dginv[c] = -jet.ginv * jet.dg[c] * jet.ginv;

    // dgamma[c](a, b, d) = d_c Gamma^a_{bd}
    std::vector<Christoffel> dgamma(n, Christoffel(n));
    for (int c = 0; c < n; ++c) {
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                for (int d = b; d < n; ++d) {
                    double sum = 0.0;
                    for (int l = 0; l < n; ++l) {
                        const double first = jet.dg[b](d, l) + jet.dg[d](b, l) - jet.dg[l](b, d);
                        const double second =
                            jet.ddg[c][b](d, l) + jet.ddg[c][d](b, l) - jet.ddg[c][l](b, d);
                        sum += dginv[c](a, l) * first + jet.ginv(a, l) * second;
                    }
                    dgamma[c](a, b, d) = 0.5 * sum;
                    dgamma[c](a, d, b) = 0.5 * sum;
                }
            }
        }
    }

    // R^a_{bcd} = d_c Gamma^a_{db} - d_d Gamma^a_{cb}
    //           + Gamma^a_{ce} Gamma^e_{db} - Gamma^a_{de} Gamma^e_{cb};
    // Ric_{bd} = R^a_{bad}.
    RicciScalar out;
    out.ricci = Eigen::MatrixXd::Zero(n, n);
    for (int b = 0; b < n; ++b) {
        for (int d = 0; d < n; ++d) {
            double sum = 0.0;
            for (int a = 0; a < n; ++a) {
                sum += dgamma[a](a, d, b) - dgamma[d](a, a, b);
                for (int e = 0; e < n; ++e) {
                    sum += gamma(a, a, e) * gamma(e, d, b) - gamma(a, d, e) * gamma(e, a, b);
                }
            }
            out.ricci(b, d) = sum;
        }
    }
    out.scalar = (jet.ginv.cwiseProduct(out.ricci)).sum();

    const double eps = std::numeric_limits<double>::epsilon();
    const double scale = jet.g.cwiseAbs().maxCoeff() * jet.ginv.cwiseAbs().maxCoeff();
    out.noise = 4.0 * n * eps * scale / (h * h);
    return out;
}

}  // namespace

Christoffel christoffel(const ChartMetric& metric, std::span<const double> point, double step) {
    check_stencil_domain(metric, point, step);
    return christoffel_from_jet(metric_jet(metric, point, step, false));
}

CurvatureReport scalar_curvature(const ChartMetric& metric, std::span<const double> point,
                                 double step) {
    check_stencil_domain(metric, point, 2.0 * step);

    const RicciScalar coarse = ricci_from_jet(metric_jet(metric, point, 2.0 * step, true), 2.0 * step);
    const RicciScalar mid = ricci_from_jet(metric_jet(metric, point, step, true), step);
    const RicciScalar fine = ricci_from_jet(metric_jet(metric, point, 0.5 * step, true), 0.5 * step);

    const double d_coarse = std::abs(coarse.scalar - mid.scalar);
    const double d_fine = std::abs(mid.scalar - fine.scalar);
    const double noise = 8.0 * fine.noise;
    // Second order: the difference should shrink about fourfold per halving.
    if (d_fine > noise && d_coarse < 2.0 * d_fine) {
        std::ostringstream os;
        os << "unreliable step " << step << " at " << describe(point) << ": differences " << d_coarse
           << " then " << d_fine;
        throw UnreliableStepError(os.str());
    }

    CurvatureReport report;
    report.point.assign(point.begin(), point.end());
    // Extrapolate the O(h^2) term away using steps 2h and h. The error
    // estimate below is for the plain step-h value, so it also bounds this.
    report.scalar = (4.0 * mid.scalar - coarse.scalar) / 3.0;
    report.ricci = (4.0 * mid.ricci - coarse.ricci) / 3.0;
    report.step = step;
    report.estimated_error = 4.0 / 3.0 * d_fine + mid.noise;
    return report;
}

}  // namespace pscend
