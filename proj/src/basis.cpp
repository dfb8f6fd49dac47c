#include "fekdisc/basis.hpp"

#include <cmath>
#include <complex>
#include <numbers>

#include "fekdisc/error.hpp"

namespace fekdisc {
namespace {

using std::numbers::pi;

double norm3(const Point& p) { return std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]); }

double wrap(double a) {
    a = std::fmod(a + pi, 2 * pi);
    if (a < 0) a += 2 * pi;
    return a - pi;
}

std::size_t default_mesh_size(DomainKind k) {
    switch (k) {
        case DomainKind::Interval: return 4000;
        case DomainKind::Circle: return 4096;
        default: return 40000;
    }
}

// Real spherical harmonics of degree ≤ k at the unit vector p, fully
// normalized associated Legendre recurrences.
void sphere_harmonics(int k, const Point& p, double* out) {
    const double ct = std::clamp(p[2], -1.0, 1.0);
    const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
    const double phi = std::atan2(p[1], p[0]);
    const auto K = static_cast<std::size_t>(k);
    // P[l][m], normalized so P̄ cos mφ has unit mean square.
    std::vector<std::vector<double>> P(K + 1, std::vector<double>(K + 1, 0.0));
    P[0][0] = 1.0;
    for (std::size_t m = 1; m <= K; ++m) {
        const double f = m == 1 ? std::sqrt(3.0) : std::sqrt((2.0 * m + 1.0) / (2.0 * m));
        P[m][m] = f * st * P[m - 1][m - 1];
    }
    for (std::size_t m = 0; m < K; ++m) P[m + 1][m] = std::sqrt(2.0 * m + 3.0) * ct * P[m][m];
    for (std::size_t m = 0; m <= K; ++m)
        for (std::size_t l = m + 2; l <= K; ++l) {
            const double L = static_cast<double>(l), M = static_cast<double>(m);
            const double a = std::sqrt((2 * L - 1) * (2 * L + 1) / ((L - M) * (L + M)));
            const double b = std::sqrt((2 * L + 1) * (L + M - 1) * (L - M - 1) / ((L - M) * (L + M) * (2 * L - 3)));
            P[l][m] = a * ct * P[l - 1][m] - b * P[l - 2][m];
        }
    std::size_t idx = 0;
    for (std::size_t l = 0; l <= K; ++l) {
        out[idx++] = P[l][0];
        for (std::size_t m = 1; m <= l; ++m) {
            out[idx++] = P[l][m] * std::cos(static_cast<double>(m) * phi);
            out[idx++] = P[l][m] * std::sin(static_cast<double>(m) * phi);
        }
    }
}

void ambient_eval(DomainKind kind, int k, const Point& p, double* out) {
    switch (kind) {
        case DomainKind::Interval: {
            const double x = p[0];
            out[0] = 1.0;
            if (k >= 1) out[1] = x;
            for (int j = 2; j <= k; ++j) out[j] = 2.0 * x * out[j - 1] - out[j - 2];
            return;
        }
        case DomainKind::Circle: {
            const std::complex<double> w(p[0], p[1]);
            std::complex<double> pw = 1.0;
            out[0] = 1.0;
            for (int j = 1; j <= k; ++j) {
                pw *= w;
                out[2 * j - 1] = pw.real();
                out[2 * j] = pw.imag();
            }
            return;
        }
        default: sphere_harmonics(k, p, out);
    }
}

}  // namespace

Domain Domain::arc(double theta_a, double theta_b) {
    if (!(theta_b > theta_a && theta_b - theta_a < 2 * pi)) throw InputError("arc needs 0 < θ_b − θ_a < 2π");
    Domain d{DomainKind::CircleArc};
    d.theta_a = theta_a;
    d.theta_b = theta_b;
    return d;
}

Domain Domain::cap(Point axis, double angle) {
    const double r = norm3(axis);
    if (!(r > 0) || !(angle > 0 && angle < pi)) throw InputError("cap needs a nonzero axis and angle in (0, π)");
    Domain d{DomainKind::SphericalCap};
    d.axis = {axis[0] / r, axis[1] / r, axis[2] / r};
    d.angle = angle;
    return d;
}

DomainKind Domain::ambient() const {
    switch (kind) {
        case DomainKind::CircleArc: return DomainKind::Circle;
        case DomainKind::SphericalCap: return DomainKind::Sphere;
        default: return kind;
    }
}

bool Domain::contains(const Point& p, double tol) const {
    switch (kind) {
        case DomainKind::Interval:
            return std::abs(p[0]) <= 1.0 + tol && std::abs(p[1]) <= tol && std::abs(p[2]) <= tol;
        case DomainKind::Circle: return std::abs(std::hypot(p[0], p[1]) - 1.0) <= tol && std::abs(p[2]) <= tol;
        case DomainKind::Sphere: return std::abs(norm3(p) - 1.0) <= tol;
        case DomainKind::CircleArc: {
            if (!Domain::circle().contains(p, tol)) return false;
            const double off = wrap(circle_angle(p) - theta_a);
            const double a = off < -tol ? off + 2 * pi : off;
            return a <= theta_b - theta_a + tol;
        }
        case DomainKind::SphericalCap: {
            if (!Domain::sphere().contains(p, tol)) return false;
            const double c = p[0] * axis[0] + p[1] * axis[1] + p[2] * axis[2];
            return std::acos(std::clamp(c, -1.0, 1.0)) <= angle + tol;
        }
    }
    return false;
}

std::vector<Point> Domain::mesh(std::size_t size) const {
    const std::size_t m = size == 0 ? default_mesh_size(ambient()) : size;
    switch (kind) {
        case DomainKind::Interval: return chebyshev_mesh(m);
        case DomainKind::Circle: return circle_mesh(m);
        case DomainKind::Sphere: return fibonacci_sphere(m);
        case DomainKind::CircleArc: {
            // Equispaced on the arc itself, endpoints included.
            std::vector<Point> out(m);
            for (std::size_t j = 0; j < m; ++j)
                out[j] = circle_point(theta_a + (theta_b - theta_a) * static_cast<double>(j) / static_cast<double>(m - 1));
            return out;
        }
        case DomainKind::SphericalCap: {
            std::vector<Point> out;
            for (const auto& p : fibonacci_sphere(m))
                if (contains(p, 0.0)) out.push_back(p);
            return out;
        }
    }
    return {};
}

std::string Domain::name() const {
    switch (kind) {
        case DomainKind::Interval: return "interval";
        case DomainKind::Circle: return "circle";
        case DomainKind::Sphere: return "sphere";
        case DomainKind::CircleArc: return "arc";
        case DomainKind::SphericalCap: return "cap";
    }
    return "?";
}

Point circle_point(double theta) { return {std::cos(theta), std::sin(theta), 0.0}; }

double circle_angle(const Point& p) { return std::atan2(p[1], p[0]); }

std::vector<Point> chebyshev_mesh(std::size_t size) {
    if (size < 2) throw InputError("mesh needs at least two nodes");
    std::vector<Point> out(size);
    for (std::size_t j = 0; j < size; ++j) {
        // sin form keeps the nodes exactly antisymmetric, with 0 exact for odd sizes.
        const double a = pi * (static_cast<double>(size - 1) - 2.0 * static_cast<double>(j)) /
                         (2.0 * static_cast<double>(size - 1));
        out[j] = {std::sin(a), 0.0, 0.0};
    }
    return out;
}

std::vector<Point> circle_mesh(std::size_t size) {
    std::vector<Point> out(size);
    for (std::size_t j = 0; j < size; ++j) out[j] = circle_point(2 * pi * static_cast<double>(j) / static_cast<double>(size));
    return out;
}

std::vector<Point> fibonacci_sphere(std::size_t size) {
    std::vector<Point> out(size);
    const double golden = pi * (3.0 - std::sqrt(5.0));
    for (std::size_t j = 0; j < size; ++j) {
        const double z = 1.0 - (2.0 * static_cast<double>(j) + 1.0) / static_cast<double>(size);
        const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double a = golden * static_cast<double>(j);
        out[j] = {r * std::cos(a), r * std::sin(a), z};
    }
    return out;
}

std::size_t ambient_dim(DomainKind kind, int k) {
    const auto K = static_cast<std::size_t>(k);
    switch (kind) {
        case DomainKind::Interval: return K + 1;
        case DomainKind::Circle: return 2 * K + 1;
        case DomainKind::Sphere: return (K + 1) * (K + 1);
        default: throw InputError("ambient_dim needs an ambient domain");
    }
}

BasisSpec make_basis(const Domain& d, int k) {
    if (k < 0) throw InputError("degree must be nonnegative");
    BasisSpec spec{d, k, ambient_dim(d.ambient(), k), std::nullopt};
    if (d.kind == d.ambient()) return spec;
    const auto pts = d.mesh();
    BasisSpec amb{Domain{d.ambient()}, k, spec.dim, std::nullopt};
    const Eigen::MatrixXd V = basis_matrix(amb, pts);
    if (V.rows() < V.cols()) throw InputError("arc/cap mesh has fewer points than the ambient dimension");
    // V = QR shares singular values and right singular vectors with R.
    const Eigen::HouseholderQR<Eigen::MatrixXd> qr(V);
    const Eigen::MatrixXd R = qr.matrixQR().topRows(V.cols()).triangularView<Eigen::Upper>();
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(R, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    Eigen::Index r = 0;
    while (r < s.size() && s(r) > 1e-10 * s(0)) ++r;
    spec.dim = static_cast<std::size_t>(r);
    spec.reduce = svd.matrixV().leftCols(r);
    return spec;
}

std::size_t basis_dim(const BasisSpec& spec) { return spec.dim; }

Eigen::VectorXd eval_basis(const BasisSpec& spec, const Point& p) {
    if (!spec.domain.contains(p, 1e-12)) throw DomainError("basis evaluated at a point off the domain");
    const DomainKind amb = spec.domain.ambient();
    Eigen::VectorXd v(static_cast<Eigen::Index>(ambient_dim(amb, spec.k)));
    ambient_eval(amb, spec.k, p, v.data());
    if (spec.reduce) return spec.reduce->transpose() * v;
    return v;
}

Eigen::MatrixXd basis_matrix(const BasisSpec& spec, const std::vector<Point>& pts) {
    const DomainKind amb = spec.domain.ambient();
    const auto na = static_cast<Eigen::Index>(ambient_dim(amb, spec.k));
    // Column-major scratch: one column per point.
    Eigen::MatrixXd A(na, static_cast<Eigen::Index>(pts.size()));
    for (std::size_t j = 0; j < pts.size(); ++j) {
        if (!spec.domain.contains(pts[j], 1e-12)) throw DomainError("basis evaluated at a point off the domain");
        ambient_eval(amb, spec.k, pts[j], A.col(static_cast<Eigen::Index>(j)).data());
    }
    if (spec.reduce) return (spec.reduce->transpose() * A).transpose();
    return A.transpose();
}

}  // namespace fekdisc
