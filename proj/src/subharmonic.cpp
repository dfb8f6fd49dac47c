#include "fekdisc/subharmonic.hpp"

#include <algorithm>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "fekdisc/error.hpp"

namespace fekdisc {
namespace {

using std::numbers::pi;

// C^∞ step from 0 at s ≤ 0 to 1 at s ≥ 1.
double smooth_step(double s) {
    if (s <= 0) return 0;
    if (s >= 1) return 1;
    const double a = std::exp(-1 / s), b = std::exp(-1 / (1 - s));
    return a / (a + b);
}

void check_args(double theta0, double beta, double c) {
    if (!(theta0 > 0 && theta0 <= pi)) throw InputError("θ₀ must lie in (0, π]");
    if (!(beta > 0 && beta <= 1)) throw InputError("β must lie in (0, 1]");
    if (!(c >= 0)) throw InputError("c must be nonnegative");
}

}  // namespace

DiscFunction DiscFunction::harmonic(const CircleFunction& u) {
    return {u.grid(), std::vector<double>(u.samples().begin(), u.samples().end()),
            [u](std::complex<double> z) { return harmonic_extend(u, z); }};
}

DiscFunction DiscFunction::log_modulus(const AnalyticDisc& g, std::size_t comp) {
    std::vector<double> b;
    for (const auto& v : g.trace(comp)) b.push_back(std::log(std::abs(v)));
    return {g.grid(), std::move(b), [g, comp](std::complex<double> z) { return std::log(std::abs(g.eval(comp, z))); }};
}

double majorant_boundary(double theta, double theta0, double beta, double c) {
    const double t = std::abs(std::remainder(theta, 2 * pi));
    const double chi = smooth_step((t - theta0 / 2) / (theta0 / 4));
    return (1 - chi) * c * std::pow(t, beta) + chi * c * std::max(1.0, std::pow(theta0, beta));
}

double majorant(std::complex<double> z, double theta0, double beta, double c) {
    const double r = std::abs(z);
    if (!(r < 1)) throw DomainError("majorant is evaluated inside the open disc");
    const double phi = std::arg(z);
    const auto poisson = [&](double t) {
        return (1 - r * r) / (1 - 2 * r * std::cos(t - phi) + r * r) * majorant_boundary(t, theta0, beta, c);
    };
    // Break at the kink, the cutoff ends and the kernel peak; tanh–sinh
    // absorbs the |θ|^β endpoint singularity.
    thread_local boost::math::quadrature::tanh_sinh<double> ts;
    std::vector<double> cuts{-pi, -0.75 * theta0, -0.5 * theta0, 0, 0.5 * theta0, 0.75 * theta0, pi, phi};
    std::sort(cuts.begin(), cuts.end());
    double s = 0;
    for (std::size_t j = 0; j + 1 < cuts.size(); ++j)
        if (cuts[j + 1] > cuts[j]) s += ts.integrate(poisson, cuts[j], cuts[j + 1], 1e-14);
    return s / (2 * pi);
}

SubharmonicReport subharmonic_compare(const DiscFunction& psi, double theta0, double beta, double c) {
    check_args(theta0, beta, c);
    if (psi.boundary.size() != psi.grid.size()) throw InputError("boundary samples do not match the grid");
    const double tol = 1e-12 * std::max(1.0, c);
    for (std::size_t j = 0; j < psi.boundary.size(); ++j) {
        const double t = psi.grid.node(j), v = psi.boundary[j];
        if (std::isnan(v)) throw InputError("boundary sample is NaN");
        if (v > c + tol || (std::abs(t) < theta0 && v > c * std::pow(std::abs(t), beta) + tol))
            throw PreconditionError("boundary hypothesis ψ ≤ c|θ|^β near 1, ψ ≤ c elsewhere fails at θ = " +
                                    std::to_string(t));
    }
    SubharmonicReport rep;
    rep.max_violation = -std::numeric_limits<double>::infinity();
    std::vector<double> radii;
    for (int i = 1; i <= 19; ++i) radii.push_back(0.05 * i);
    for (double r : {0.97, 0.98, 0.99, 0.995}) radii.push_back(r);
    for (double r : radii)
        for (int a = 0; a < 64; ++a) {
            const std::complex<double> z = std::polar(r, -pi + 2 * pi * a / 64.0);
            const double p1 = majorant(z, theta0, beta, c);
            const double p = psi.interior(z);
            const double d = std::pow(std::abs(1.0 - z), beta);
            rep.max_violation = std::max(rep.max_violation, p - p1);
            rep.inferred_C = std::max(rep.inferred_C, p1 / d);
            if (std::isfinite(p)) rep.observed_C = std::max(rep.observed_C, p / d);
            ++rep.interior_points;
        }
    rep.pass = rep.max_violation <= 1e-9 && std::isfinite(rep.inferred_C);
    return rep;
}

}  // namespace fekdisc
