#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "fekdisc/basis.hpp"
#include "fekdisc/fekete.hpp"

namespace fekdisc {

// Closed-form equilibrium measure of a model compact: arcsine on [−1,1],
// uniform in angle on the circle, normalized area on the sphere.
struct ReferenceMeasure {
    DomainKind domain = DomainKind::Interval;

    // Interval: 1/(π√(1−x²)) per dx.  Circle: 1/(2π) per dθ.  Sphere: 1/(4π) per area.
    double density(const Point& p) const;
    // Interval: F(x) = 1/2 + arcsin(x)/π.  Circle: (θ + π)/(2π) for θ ∈ [−π, π].
    double cdf(double x) const;
    // Interval only: ∫₋₁ˣ F.
    double cdf_integral(double x) const;
    double quantile(double u) const;
    // ⟨ν, v⟩ by adaptive Gauss–Kronrod (in t = arccos x on the interval,
    // nested z/φ on the sphere).
    double pair(const std::function<double(const Point&)>& v) const;
    // Quadrature of the density, independent of the closed-form CDF.
    double total_mass() const;
};

// Throws DomainError for arcs and caps, which have no closed form.
ReferenceMeasure equilibrium_reference(const Domain& d);

// log|z + √(z²−1)| on the branch with |z + √(z²−1)| ≥ 1.
double extremal_interval(std::complex<double> z);

// ∫₋₁¹ |F_μ − F_ν| dx, integrated exactly between atoms.
double dist1_interval(const EmpiricalMeasure& mu, const ReferenceMeasure& nu);
double dist1_interval(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

// min_c ∫ |F_μ − F_ν − c| dθ over [−π, π); c is the Lebesgue median of F_μ − F_ν.
double dist1_circle(const EmpiricalMeasure& mu, const ReferenceMeasure& nu);
double dist1_circle(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu);

struct RateFit {
    double slope = 0;
    double intercept = 0;
    double exponent = 0;    // bound exponent tested
    double c_min = 0;       // smallest c with dist_k ≤ c·k^exponent on the data
    bool paper_bound_ok = false;
};

inline constexpr double kRateExponent = -1.0 / 36.0 + 0.01;

// Least squares of log dist on log k.  Needs ≥ 5 points and positive dists.
RateFit rate_fit(const std::vector<double>& ks, const std::vector<double>& dists,
                 double exponent = kRateExponent);

// Entry j averages v[j..j+w−1]; the result has v.size() − w + 1 entries.
std::vector<double> moving_average(const std::vector<double>& v, std::size_t w = 5);

}  // namespace fekdisc
