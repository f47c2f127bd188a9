#include "pscend/geometry_catalog.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "pscend/errors.hpp"

namespace pscend {

namespace {

constexpr double kPolarMargin = 0.3;
constexpr double kChartPadding = 0.05;

Box pad(const Box& box, double by) {
    Box out = box;
    for (auto& v : out.lower) v -= by;
    for (auto& v : out.upper) v += by;
    return out;
}

}  // namespace

ChartMetric CatalogEntry::total_chart(const WarpProfile& profile) const {
    const int k = base_dim();
    const int n = k + 2;
    ChartMetric chart;
    chart.dim = n;
    chart.components = [profile, k, n, h = base_metric, conn = connection](std::span<const double> x) {
        const std::span<const double> base_pt = x.subspan(2);
        const double a = profile.a(x[0]).value;
        const double b = profile.b(x[0]).value;
        Eigen::VectorXd theta = Eigen::VectorXd::Zero(n);
        theta(1) = 1.0;
        Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
        g(0, 0) = 1.0;
        if (k > 0) {
            theta.tail(k) = conn(base_pt);
            g.bottomRightCorner(k, k) = b * b * h(base_pt);
        }
        g.bottomRightCorner(n - 1, n - 1) += a * a * theta.tail(n - 1) * theta.tail(n - 1).transpose();
        return g;
    };
    const Box base_box = pad(safe_base_box, kChartPadding);
    chart.domain_hint.lower = {-0.5, -100.0};
    chart.domain_hint.upper = {1e4, 100.0};
    chart.domain_hint.lower.insert(chart.domain_hint.lower.end(), base_box.lower.begin(), base_box.lower.end());
    chart.domain_hint.upper.insert(chart.domain_hint.upper.end(), base_box.upper.begin(), base_box.upper.end());
    return chart;
}

Point CatalogEntry::random_base_point(std::mt19937_64& rng) const {
    Point p(static_cast<std::size_t>(base_dim()));
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double lo = safe_base_box.lower[i];
        const double hi = safe_base_box.upper[i];
        p[i] = lo + (hi - lo) * uniform01(rng);
    }
    return p;
}

CatalogEntry heisenberg_entry() {
    CatalogEntry e;
    e.name = "heisenberg";
    e.connection_desc = "theta = dz - x dy on the flat torus T^2; Omega = -dx^dy";
    e.base_metric = [](std::span<const double>) { return Eigen::MatrixXd::Identity(2, 2); };
    e.connection = [](std::span<const double> p) {
        Eigen::VectorXd A(2);
        A << 0.0, -p[0];
        return A;
    };
    e.safe_base_box = {{0.0, 0.0}, {1.0, 1.0}};
    e.reference_points = {{0.3, 0.1}, {0.0, 0.0}, {0.5, 0.5}, {0.9, 0.2}, {0.7, 0.95}};
    e.base.base_dim = 2;
    e.base.scalar_h = [](std::span<const double>) { return 0.0; };
    // Omega_12 = -1, so h^{ik} h^{jl} Omega_ij Omega_kl = 2.
    e.base.omega_norm = [](std::span<const double>) { return std::numbers::sqrt2; };
    e.base.omega_sup = std::numbers::sqrt2;
    e.base.sample_points = e.reference_points;
    return e;
}

CatalogEntry hopf_entry() {
    return hopf_entry({{0.3, 0.0}, {0.8, 1.0}, {std::numbers::pi / 2, 2.0}, {2.2, 4.0},
                       {std::numbers::pi - 0.3, 6.0}});
}

CatalogEntry hopf_entry(std::vector<Point> reference_points) {
    using std::numbers::pi;
    for (const Point& p : reference_points) {
        if (p.size() != 2 || p[0] < kPolarMargin || p[0] > pi - kPolarMargin) {
            throw DomainError("Hopf reference point too close to a pole of the polar chart");
        }
    }
    CatalogEntry e;
    e.name = "hopf";
    e.connection_desc =
        "theta = dphi + (1/2) cos(vartheta) dpsi over the unit round S^2 (Euler number -1, total "
        "space S^3); Omega = -(1/2) sin(vartheta) dvartheta^dpsi";
    e.base_metric = [](std::span<const double> p) {
        Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2, 2);
        const double s = std::sin(p[0]);
        h(0, 0) = 1.0;
        h(1, 1) = s * s;
        return h;
    };
    e.connection = [](std::span<const double> p) {
        Eigen::VectorXd A(2);
        A << 0.0, 0.5 * std::cos(p[0]);
        return A;
    };
    e.safe_base_box = {{kPolarMargin, 0.0}, {pi - kPolarMargin, 2.0 * pi}};
    e.reference_points = std::move(reference_points);
    e.base.base_dim = 2;
    e.base.scalar_h = [](std::span<const double>) { return 2.0; };
    // |Omega|^2 = 2 (1/sin^2) (sin^2 / 4) = 1/2 everywhere.
    e.base.omega_norm = [](std::span<const double>) { return std::sqrt(0.5); };
    e.base.omega_sup = std::sqrt(0.5);
    e.base.sample_points = e.reference_points;
    return e;
}

CatalogEntry trivial_entry(int base_dim, double base_R) {
    if (base_dim < 0 || base_dim > 4) throw DomainError("trivial entries have base dimension 0..4");
    if (!(base_R >= 0.0)) throw DomainError("base scalar curvature must be nonnegative");
    if (base_dim <= 1 && base_R != 0.0) {
        throw DomainError("a base of dimension <= 1 is flat, so R_h must be 0");
    }
    const int k = base_dim;
    CatalogEntry e;
    {
        std::ostringstream os;
        os << "trivial:" << k << ":" << base_R;
        e.name = os.str();
    }
    e.connection_desc = k == 0 ? "theta = dphi over a point" : "theta = dphi (product bundle); Omega = 0";
    e.connection = [k](std::span<const double>) { return Eigen::VectorXd::Zero(k); };
    e.base.base_dim = k;
    e.base.omega_norm = [](std::span<const double>) { return 0.0; };
    e.base.omega_sup = 0.0;
    e.base.scalar_h = [base_R](std::span<const double>) { return base_R; };

    if (base_R == 0.0) {
        // Flat torus T^k.
        e.base_metric = [k](std::span<const double>) { return Eigen::MatrixXd::Identity(k, k); };
        e.safe_base_box = {std::vector<double>(k, 0.0), std::vector<double>(k, 1.0)};
    } else {
        // Round S^k of radius rho in hyperspherical angles chi_1..chi_k.
        const double rho2 = k * (k - 1) / base_R;
        e.base_metric = [k, rho2](std::span<const double> p) {
            Eigen::MatrixXd h = Eigen::MatrixXd::Zero(k, k);
            double w = rho2;
            for (int i = 0; i < k; ++i) {
                h(i, i) = w;
                const double s = std::sin(p[i]);
                w *= s * s;
            }
            return h;
        };
        e.safe_base_box.lower.assign(k, kPolarMargin);
        e.safe_base_box.upper.assign(k, std::numbers::pi - kPolarMargin);
        e.safe_base_box.lower[k - 1] = 0.0;
        e.safe_base_box.upper[k - 1] = 1.0;
    }
    if (k == 0) {
        e.reference_points = {Point{}};
    } else {
        std::mt19937_64 rng(0x5eedULL + static_cast<unsigned>(k));
        for (int i = 0; i < 5; ++i) e.reference_points.push_back(e.random_base_point(rng));
    }
    e.base.sample_points = e.reference_points;
    return e;
}

double chart_omega_norm(const CatalogEntry& entry, std::span<const double> base_point, double step) {
    const int k = entry.base_dim();
    if (static_cast<int>(base_point.size()) != k) throw DomainError("base point has the wrong dimension");
    if (k < 2) return 0.0;
    Eigen::MatrixXd dA(k, k);  // dA(i, j) = d_i A_j
    Point q(base_point.begin(), base_point.end());
    for (int i = 0; i < k; ++i) {
        q[i] = base_point[i] + step;
        const Eigen::VectorXd plus = entry.connection(q);
        q[i] = base_point[i] - step;
        const Eigen::VectorXd minus = entry.connection(q);
        q[i] = base_point[i];
        dA.row(i) = ((plus - minus) / (2.0 * step)).transpose();
    }
    const Eigen::MatrixXd omega = dA - dA.transpose();
    const Eigen::MatrixXd hinv = entry.base_metric(base_point).inverse();
    const double norm2 = (hinv * omega * hinv * omega.transpose()).trace();
    return std::sqrt(std::max(0.0, norm2));
}

double fiber_length(const CatalogEntry& entry, const WarpProfile& profile, double t,
                    std::span<const double> base_point) {
    const ChartMetric chart = entry.total_chart(profile);
    Point x(static_cast<std::size_t>(chart.dim), 0.0);
    x[0] = t;
    std::copy(base_point.begin(), base_point.end(), x.begin() + 2);
    auto speed = [&](double phi) {
        Point y = x;
        y[1] = phi;
        return std::sqrt(chart.components(y)(1, 1));
    };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(speed, 0.0,
                                                                         2.0 * std::numbers::pi);
}

std::vector<CatalogEntry> standard_catalog() {
    return {heisenberg_entry(),    hopf_entry(),         trivial_entry(0, 0.0), trivial_entry(1, 0.0),
            trivial_entry(2, 2.0), trivial_entry(3, 6.0), trivial_entry(4, 0.0), trivial_entry(4, 12.0)};
}

CatalogEntry entry_by_name(const std::string& name) {
    if (name == "heisenberg") return heisenberg_entry();
    if (name == "hopf") return hopf_entry();
    if (name.rfind("trivial:", 0) == 0) {
        std::istringstream is(name.substr(8));
        int dim = -1;
        char sep = 0;
        double r = -1.0;
        if (is >> dim >> sep >> r && sep == ':' && is.eof()) return trivial_entry(dim, r);
        // "trivial:<k>" means a flat torus.
        std::istringstream is2(name.substr(8));
        if (is2 >> dim && is2.eof()) return trivial_entry(dim, 0.0);
    }
    throw DomainError("unknown catalog entry '" + name + "'");
}

}  // namespace pscend
