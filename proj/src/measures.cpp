#include "fekdisc/measures.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <map>
#include <numbers>

#include "fekdisc/error.hpp"

namespace fekdisc {
namespace {

using std::numbers::pi;
using GK = boost::math::quadrature::gauss_kronrod<double, 21>;

// Adaptive rule over equal panels, so features narrower than the first
// Kronrod pass are still seen.
double integrate(const std::function<double(double)>& f, double a, double b, int panels = 64, unsigned depth = 12) {
    double s = 0;
    for (int j = 0; j < panels; ++j)
        s += GK::integrate(f, a + (b - a) * j / panels, a + (b - a) * (j + 1) / panels, depth, 1e-12);
    return s;
}

// Atoms merged by position, sorted ascending.
std::vector<std::pair<double, double>> merged(std::vector<std::pair<double, double>> atoms) {
    std::sort(atoms.begin(), atoms.end());
    std::vector<std::pair<double, double>> out;
    for (const auto& a : atoms) {
        if (!out.empty() && out.back().first == a.first)
            out.back().second += a.second;
        else
            out.push_back(a);
    }
    return out;
}

std::vector<std::pair<double, double>> interval_atoms(const EmpiricalMeasure& mu) {
    if (mu.points.size() != mu.weights.size()) throw InputError("measure points and weights differ in length");
    std::vector<std::pair<double, double>> a;
    for (std::size_t j = 0; j < mu.points.size(); ++j) {
        const double x = mu.points[j][0];
        if (!(std::abs(x) <= 1.0 + 1e-12)) throw DomainError("atom outside [−1, 1]");
        a.emplace_back(std::clamp(x, -1.0, 1.0), mu.weights[j]);
    }
    return merged(std::move(a));
}

// Angles in [−π, π).
std::vector<std::pair<double, double>> circle_atoms(const EmpiricalMeasure& mu) {
    if (mu.points.size() != mu.weights.size()) throw InputError("measure points and weights differ in length");
    std::vector<std::pair<double, double>> a;
    for (std::size_t j = 0; j < mu.points.size(); ++j) {
        double t = circle_angle(mu.points[j]);
        if (t >= pi) t -= 2 * pi;
        a.emplace_back(t, mu.weights[j]);
    }
    return merged(std::move(a));
}

// D(θ) = d0 + slope·(θ − a) on [a, b].
struct Piece {
    double a, b, d0, slope;
    double at(double x) const { return d0 + slope * (x - a); }
};

// ∫_a^b |D − c|.
double abs_integral(const Piece& p, double c) {
    const double len = p.b - p.a;
    if (len <= 0) return 0;
    const double lo = p.d0 - c, hi = p.at(p.b) - c;
    if (lo * hi >= 0) return 0.5 * std::abs(lo + hi) * len;
    const double x = len * lo / (lo - hi);  // zero of the linear function
    return 0.5 * (std::abs(lo) * x + std::abs(hi) * (len - x));
}

// Lebesgue measure of {D < c}.
double below(const Piece& p, double c) {
    const double len = p.b - p.a;
    if (len <= 0) return 0;
    const double lo = p.d0;
    if (p.slope == 0) return lo < c ? len : 0;
    const double x = std::clamp((c - lo) / p.slope, 0.0, len);
    return p.slope > 0 ? x : len - x;
}

double circle_transport(const std::vector<Piece>& pieces) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& p : pieces) {
        lo = std::min({lo, p.d0, p.at(p.b)});
        hi = std::max({hi, p.d0, p.at(p.b)});
    }
    // Bisection for the median: {D < c} has measure π.
    for (int it = 0; it < 200 && hi - lo > 1e-16 * std::max(1.0, std::abs(hi)); ++it) {
        const double c = 0.5 * (lo + hi);
        double m = 0;
        for (const auto& p : pieces) m += below(p, c);
        (m < pi ? lo : hi) = c;
    }
    const double c = 0.5 * (lo + hi);
    double s = 0;
    for (const auto& p : pieces) s += abs_integral(p, c);
    return s;
}

// Breakpoints of both measures merged; F_μ − F_ν with the given reference slopes.
std::vector<Piece> circle_pieces(const std::vector<std::pair<double, double>>& mu,
                                 const std::vector<std::pair<double, double>>& nu, double nu_slope) {
    std::map<double, std::pair<double, double>> jumps;
    for (const auto& [t, w] : mu) jumps[t].first += w;
    for (const auto& [t, w] : nu) jumps[t].second += w;
    std::vector<Piece> out;
    double fm = 0, fn = 0, prev = -pi;
    for (const auto& [t, w] : jumps) {
        out.push_back({prev, t, fm - fn - nu_slope * (prev + pi), -nu_slope});
        fm += w.first;
        fn += w.second;
        prev = t;
    }
    out.push_back({prev, pi, fm - fn - nu_slope * (prev + pi), -nu_slope});
    return out;
}

void require(const ReferenceMeasure& nu, DomainKind k, const char* what) {
    if (nu.domain != k) throw InputError(what);
}

}  // namespace

double ReferenceMeasure::density(const Point& p) const {
    switch (domain) {
        case DomainKind::Interval: {
            const double x = p[0];
            if (!(std::abs(x) < 1)) throw DomainError("arcsine density is defined on (−1, 1)");
            return 1.0 / (pi * std::sqrt((1 - x) * (1 + x)));
        }
        case DomainKind::Circle: return 1.0 / (2 * pi);
        case DomainKind::Sphere: return 1.0 / (4 * pi);
        default: throw DomainError("no closed-form reference measure");
    }
}

double ReferenceMeasure::cdf(double x) const {
    switch (domain) {
        case DomainKind::Interval: return 0.5 + std::asin(std::clamp(x, -1.0, 1.0)) / pi;
        case DomainKind::Circle: return (std::clamp(x, -pi, pi) + pi) / (2 * pi);
        default: throw InputError("CDF is defined on one-dimensional domains only");
    }
}

double ReferenceMeasure::cdf_integral(double x) const {
    require(*this, DomainKind::Interval, "cdf_integral is defined on the interval only");
    x = std::clamp(x, -1.0, 1.0);
    // G(x) = x/2 + (x arcsin x + √(1−x²))/π, normalized so G(−1) = 0.
    const auto G = [](double s) { return s / 2 + (s * std::asin(s) + std::sqrt((1 - s) * (1 + s))) / pi; };
    return G(x) - G(-1.0);
}

double ReferenceMeasure::quantile(double u) const {
    if (!(u >= 0 && u <= 1)) throw DomainError("quantile needs u in [0, 1]");
    switch (domain) {
        case DomainKind::Interval: return std::sin(pi * (u - 0.5));
        case DomainKind::Circle: return -pi + 2 * pi * u;
        default: throw InputError("quantile is defined on one-dimensional domains only");
    }
}

double ReferenceMeasure::pair(const std::function<double(const Point&)>& v) const {
    switch (domain) {
        case DomainKind::Interval:
            return integrate([&](double t) { return v({std::cos(t), 0, 0}); }, 0, pi) / pi;
        case DomainKind::Circle:
            return integrate([&](double t) { return v(circle_point(t)); }, -pi, pi) / (2 * pi);
        case DomainKind::Sphere: {
            // Integrating v + 1 keeps the L1 scale used by the stopping rule at
            // O(1); otherwise mean-zero v leaves the outer rule chasing roundoff.
            const auto inner = [&](double z) {
                const double r = std::sqrt(std::max(0.0, 1 - z * z));
                return integrate([&](double f) { return v({r * std::cos(f), r * std::sin(f), z}) + 1; }, 0, 2 * pi,
                                 16, 8);
            };
            return (integrate(inner, -1, 1, 16, 8) - 4 * pi) / (4 * pi);
        }
        default: throw DomainError("no closed-form reference measure");
    }
}

double ReferenceMeasure::total_mass() const {
    switch (domain) {
        case DomainKind::Interval:
            // Substitution x = sin s removes the endpoint singularity of the density.
            return integrate([&](double s) { return density({std::sin(s), 0, 0}) * std::cos(s); }, -pi / 2, pi / 2, 1);
        case DomainKind::Circle:
            return integrate([&](double t) { return density(circle_point(t)); }, -pi, pi);
        case DomainKind::Sphere:
            return integrate([&](double z) { return 2 * pi * density({0, 0, z}); }, -1, 1);
        default: throw DomainError("no closed-form reference measure");
    }
}

ReferenceMeasure equilibrium_reference(const Domain& d) {
    switch (d.kind) {
        case DomainKind::Interval:
        case DomainKind::Circle:
        case DomainKind::Sphere: return {d.kind};
        default:
            throw DomainError("no closed-form equilibrium measure for " + d.name() +
                              "; compare against a high-degree Fekete measure instead");
    }
}

double extremal_interval(std::complex<double> z) {
    // φ is even; working with Re z ≥ 0 keeps |z + w| − 1 free of cancellation.
    if (z.real() < 0) z = -z;
    const std::complex<double> q = (z - 1.0) * (z + 1.0);
    std::complex<double> w = std::exp(0.5 * std::log(q));
    if (q == 0.0) w = 0;
    std::complex<double> s = z + w - 1.0;
    auto grow = [](std::complex<double> s) { return 2 * s.real() + std::norm(s); };  // |1+s|² − 1
    if (grow(s) < 0) {
        w = -w;
        s = z + w - 1.0;
    }
    return std::max(0.0, 0.5 * std::log1p(grow(s)));
}

double dist1_interval(const EmpiricalMeasure& mu, const ReferenceMeasure& nu) {
    require(nu, DomainKind::Interval, "dist1_interval needs the interval reference measure");
    const auto atoms = interval_atoms(mu);
    // ∫_a^b |c − F|, split where F crosses the level c.
    const auto piece = [&](double a, double b, double c) {
        if (b <= a) return 0.0;
        const double x = std::clamp(nu.quantile(std::clamp(c, 0.0, 1.0)), a, b);
        return (c * (x - a) - (nu.cdf_integral(x) - nu.cdf_integral(a))) +
               ((nu.cdf_integral(b) - nu.cdf_integral(x)) - c * (b - x));
    };
    double s = 0, f = 0, prev = -1;
    for (const auto& [x, w] : atoms) {
        s += piece(prev, x, f);
        f += w;
        prev = x;
    }
    return s + piece(prev, 1.0, f);
}

double dist1_interval(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
    std::map<double, double> jumps;
    for (const auto& [x, w] : interval_atoms(mu)) jumps[x] += w;
    for (const auto& [x, w] : interval_atoms(nu)) jumps[x] -= w;
    double s = 0, d = 0, prev = -1;
    for (const auto& [x, w] : jumps) {
        s += std::abs(d) * (x - prev);
        d += w;
        prev = x;
    }
    return s + std::abs(d) * (1 - prev);
}

double dist1_circle(const EmpiricalMeasure& mu, const ReferenceMeasure& nu) {
    require(nu, DomainKind::Circle, "dist1_circle needs the circle reference measure");
    return circle_transport(circle_pieces(circle_atoms(mu), {}, 1.0 / (2 * pi)));
}

double dist1_circle(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu) {
    return circle_transport(circle_pieces(circle_atoms(mu), circle_atoms(nu), 0.0));
}

RateFit rate_fit(const std::vector<double>& ks, const std::vector<double>& dists, double exponent) {
    if (ks.size() != dists.size()) throw InputError("rate_fit: ks and dists differ in length");
    if (ks.size() < 5) throw InputError("rate_fit: insufficient data, need at least 5 points");
    const auto n = static_cast<double>(ks.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    RateFit r;
    r.exponent = exponent;
    for (std::size_t j = 0; j < ks.size(); ++j) {
        if (!(dists[j] > 0) || !(ks[j] > 0)) throw InputError("rate_fit: distances and degrees must be positive");
        const double x = std::log(ks[j]), y = std::log(dists[j]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        r.c_min = std::max(r.c_min, dists[j] * std::pow(ks[j], -exponent));
    }
    const double den = n * sxx - sx * sx;
    if (!(den > 0)) throw InputError("rate_fit: degrees must not all coincide");
    r.slope = (n * sxy - sx * sy) / den;
    r.intercept = (sy - r.slope * sx) / n;
    r.paper_bound_ok = std::isfinite(r.c_min);
    return r;
}

std::vector<double> moving_average(const std::vector<double>& v, std::size_t w) {
    if (w == 0 || v.size() < w) throw InputError("moving_average: window larger than the data");
    std::vector<double> out;
    for (std::size_t j = 0; j + w <= v.size(); ++j) {
        double s = 0;
        for (std::size_t i = 0; i < w; ++i) s += v[j + i];
        out.push_back(s / static_cast<double>(w));
    }
    return out;
}

}  // namespace fekdisc
