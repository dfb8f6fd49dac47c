#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace fekdisc {

// Points live in ℝ³: (x, 0, 0) on the interval, (cos θ, sin θ, 0) on the
// circle, unit vectors on the sphere.
using Point = std::array<double, 3>;

enum class DomainKind { Interval, Circle, Sphere, CircleArc, SphericalCap };

struct Domain {
    DomainKind kind = DomainKind::Interval;
    double theta_a = 0, theta_b = 0;      // arc [θ_a, θ_b], θ_b − θ_a ∈ (0, 2π)
    Point axis = {0, 0, 1};               // cap centre
    double angle = 0;                     // cap angular radius ∈ (0, π)

    static Domain interval() { return {}; }
    static Domain circle() { return {DomainKind::Circle}; }
    static Domain sphere() { return {DomainKind::Sphere}; }
    static Domain arc(double theta_a, double theta_b);
    static Domain cap(Point axis, double angle);

    // Interval, Circle or Sphere.
    DomainKind ambient() const;
    bool contains(const Point& p, double tol = 1e-12) const;
    // Default sampling mesh: 4000 Chebyshev–Lobatto nodes, 4096 equispaced
    // circle nodes, a 40000-point Fibonacci sphere; arcs and caps filter the
    // ambient mesh.  size = 0 selects the default.
    std::vector<Point> mesh(std::size_t size = 0) const;
    std::string name() const;
};

Point circle_point(double theta);
double circle_angle(const Point& p);  // in (−π, π]
std::vector<Point> chebyshev_mesh(std::size_t size);
std::vector<Point> circle_mesh(std::size_t size);
std::vector<Point> fibonacci_sphere(std::size_t size);

// Basis of degree-k sections.  Arcs and caps use the ambient basis composed
// with `reduce`, the right singular vectors of the mesh Vandermonde above the
// rank threshold 1e−10·σ_max.
struct BasisSpec {
    Domain domain;
    int k = 0;
    std::size_t dim = 0;
    std::optional<Eigen::MatrixXd> reduce;
};

BasisSpec make_basis(const Domain& d, int k);
std::size_t basis_dim(const BasisSpec& spec);
std::size_t ambient_dim(DomainKind kind, int k);

// Chebyshev T₀..T_k; circle 1, cos θ, sin θ, …, cos kθ, sin kθ; sphere real
// harmonics ordered by ℓ, then m = 0, then (cos mφ, sin mφ) pairs, scaled to
// unit mean square on S² (so Y₀₀ = 1) without the Condon–Shortley sign.
Eigen::VectorXd eval_basis(const BasisSpec& spec, const Point& p);
// Rows are eval_basis at each point.
Eigen::MatrixXd basis_matrix(const BasisSpec& spec, const std::vector<Point>& pts);

}  // namespace fekdisc
