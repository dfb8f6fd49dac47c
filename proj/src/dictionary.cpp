#include "fekdisc/dictionary.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fekdisc/error.hpp"

namespace fekdisc {
namespace {

using std::numbers::pi;

// sup over γ″ ∈ (0, γ] of a^{1−γ″}: Hölder bound of a profile with
// |v(x) − v(y)| ≤ min(a, d) (hats, cones of height a).
double ramp_bound(double a, double gamma) { return std::max(a, std::pow(a, 1 - gamma)); }

// sup over γ″ ∈ (0, γ] of S·(L/S)^{γ″} for |v(x) − v(y)| ≤ min(S, L d).
double wave_bound(double S, double L, double gamma) { return S * std::max(1.0, std::pow(L / S, gamma)); }

// cos(ωx + φ): sup 1, Lipschitz ω, derivative sup ω with Lipschitz ω².
double cosine_norm(double omega, double gamma) {
    const double low = 1 + wave_bound(2, omega, std::min(gamma, 1.0));
    if (gamma <= 1) return low;
    return std::max(low, 1 + omega + wave_bound(2 * omega, omega * omega, gamma - 1));
}

double geodesic(const Point& p, const Point& q) {
    const double c = p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
    return std::acos(std::clamp(c, -1.0, 1.0));
}

// ∫ ℓ dF against the arcsine law for ℓ(x) = α + βx on [a, b].
double arcsine_linear(const ReferenceMeasure& nu, double a, double b, double alpha, double beta) {
    a = std::clamp(a, -1.0, 1.0);
    b = std::clamp(b, -1.0, 1.0);
    if (b <= a) return 0;
    const auto l = [&](double x) { return alpha + beta * x; };
    return l(b) * nu.cdf(b) - l(a) * nu.cdf(a) - beta * (nu.cdf_integral(b) - nu.cdf_integral(a));
}

void add_interval(TestDictionary& d) {
    const ReferenceMeasure nu{DomainKind::Interval};
    if (d.gamma <= 1)
        for (double w : {0.05, 0.1, 0.2, 0.4, 0.8})
            for (int i = 0; i <= 20; ++i) {
                const double x0 = -1 + 0.1 * i;
                const double n = w + ramp_bound(w, d.gamma);
                const double ref = arcsine_linear(nu, x0 - w, x0, w - x0, 1) + arcsine_linear(nu, x0, x0 + w, w + x0, -1);
                d.members.push_back({[=](const Point& p) { return std::max(0.0, w - std::abs(p[0] - x0)) / n; },
                                     ref / n, n, "hat(" + std::to_string(x0) + "," + std::to_string(w) + ")"});
            }
    for (int j = 1; j <= 16; ++j) {
        const double om = 0.5 * pi * j;
        const double n = cosine_norm(om, d.gamma);
        d.members.push_back({[=](const Point& p) { return std::cos(om * p[0]) / n; }, std::cyl_bessel_j(0.0, om) / n, n,
                             "cos(" + std::to_string(j) + "pi/2 x)"});
        d.members.push_back(
            {[=](const Point& p) { return std::sin(om * p[0]) / n; }, 0.0, n, "sin(" + std::to_string(j) + "pi/2 x)"});
    }
}

void add_circle(TestDictionary& d) {
    if (d.gamma <= 1)
        for (double w : {0.05, 0.1, 0.2, 0.4, 0.8})
            for (int i = 0; i < 64; ++i) {
                const double t0 = -pi + 2 * pi * i / 64.0;
                const Point c = circle_point(t0);
                const double n = w + ramp_bound(w, d.gamma);
                d.members.push_back({[=](const Point& p) { return std::max(0.0, w - geodesic(p, c)) / n; },
                                     w * w / (2 * pi) / n, n, "hat(" + std::to_string(t0) + "," + std::to_string(w) + ")"});
            }
    for (int m = 1; m <= 20; ++m) {
        const double n = cosine_norm(m, d.gamma);
        d.members.push_back({[=](const Point& p) { return std::cos(m * circle_angle(p)) / n; }, 0.0, n,
                             "cos(" + std::to_string(m) + "t)"});
        d.members.push_back({[=](const Point& p) { return std::sin(m * circle_angle(p)) / n; }, 0.0, n,
                             "sin(" + std::to_string(m) + "t)"});
    }
}

void add_sphere(TestDictionary& d) {
    const auto centres = fibonacci_sphere(200);
    for (double r : {0.3, 0.6, 1.2})
        for (std::size_t i = 0; i < centres.size(); ++i) {
            const Point c = centres[i];
            const double n = r + ramp_bound(r, d.gamma);
            // ∫_cap (r − ρ) sin ρ dρ dφ / 4π.
            const double ref = 0.5 * (r - std::sin(r));
            d.members.push_back({[=](const Point& p) { return std::max(0.0, r - geodesic(p, c)) / n; }, ref / n, n,
                                 "cone(" + std::to_string(i) + "," + std::to_string(r) + ")"});
        }
    // Addition theorem: Σ_m Y² = 2ℓ+1 and Σ_m |∇Y|² = ℓ(ℓ+1)(2ℓ+1) bound every member.
    const auto spec = make_basis(Domain::sphere(), 6);
    std::size_t idx = 1;
    for (int l = 1; l <= 6; ++l) {
        const double S = std::sqrt(2.0 * l + 1), L = std::sqrt(l * (l + 1.0) * (2.0 * l + 1));
        const double n = S + wave_bound(2 * S, L, d.gamma);
        for (int m = 0; m < 2 * l + 1; ++m, ++idx) {
            const auto i = static_cast<Eigen::Index>(idx);
            d.members.push_back({[=](const Point& p) { return eval_basis(spec, p)(i) / n; }, 0.0, n,
                                 "Y(" + std::to_string(l) + "," + std::to_string(m) + ")"});
        }
    }
}

}  // namespace

TestDictionary make_dictionary(DomainKind domain, double gamma) {
    TestDictionary d{domain, gamma, {}};
    switch (domain) {
        case DomainKind::Interval:
        case DomainKind::Circle:
            if (!(gamma > 0 && gamma <= 2)) throw InputError("dictionary certified for γ ∈ (0, 2] only");
            domain == DomainKind::Interval ? add_interval(d) : add_circle(d);
            break;
        case DomainKind::Sphere:
            if (!(gamma > 0 && gamma <= 1)) throw InputError("sphere dictionary certified for γ ∈ (0, 1] only");
            add_sphere(d);
            break;
        default: throw InputError("no test dictionary for arcs and caps");
    }
    return d;
}

double dist_gamma_dict(const EmpiricalMeasure& mu, const ReferenceMeasure& nu, const TestDictionary& dict) {
    if (dict.members.empty()) throw InputError("empty test dictionary");
    if (nu.domain != dict.domain) throw InputError("dictionary and reference measure live on different domains");
    double best = 0;
    for (const auto& m : dict.members) best = std::max(best, std::abs(mu.pair(m.v) - m.reference));
    return best;
}

double dist_gamma_dict(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, const TestDictionary& dict) {
    if (dict.members.empty()) throw InputError("empty test dictionary");
    double best = 0;
    for (const auto& m : dict.members) best = std::max(best, std::abs(mu.pair(m.v) - nu.pair(m.v)));
    return best;
}

}  // namespace fekdisc
