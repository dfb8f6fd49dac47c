#include "fekdisc/circle.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fekdisc/error.hpp"
#include "fekdisc/kahan.hpp"
#include "fft.hpp"

namespace fekdisc {
namespace {

constexpr double pi = std::numbers::pi;

void coefficients_from_samples(std::span<const double> s, std::vector<double>& a,
                               std::vector<double>& b) {
    const std::size_t m = s.size();
    const std::size_t h = m / 2;
    std::vector<std::complex<double>> x(h + 1);
    detail::fft_r2c(s, x);
    a.assign(h + 1, 0.0);
    b.assign(h + 1, 0.0);
    const double inv = 1.0 / static_cast<double>(m);
    // Nodes start at −π, so bin k picks up a factor (−1)^k.
    for (std::size_t k = 0; k <= h; ++k) {
        const std::complex<double> c = (k % 2 == 0 ? 1.0 : -1.0) * x[k] * inv;
        if (k == 0 || k == h) {
            a[k] = c.real();
        } else {
            a[k] = 2.0 * c.real();
            b[k] = -2.0 * c.imag();
        }
    }
}

std::vector<double> samples_from_coefficients(std::size_t m, std::span<const double> a,
                                              std::span<const double> b) {
    const std::size_t h = m / 2;
    std::vector<std::complex<double>> x(h + 1);
    for (std::size_t k = 0; k <= h; ++k) {
        std::complex<double> c;
        if (k == 0 || k == h)
            c = a[k];
        else
            c = std::complex<double>(a[k], -b[k]) * 0.5;
        x[k] = (k % 2 == 0 ? 1.0 : -1.0) * c;
    }
    std::vector<double> s(m);
    detail::fft_c2r(x, s);
    return s;
}

bool is_power_of_two(std::size_t m) { return m != 0 && (m & (m - 1)) == 0; }

double wrap_angle(double x) {
    x = std::fmod(x + pi, 2.0 * pi);
    if (x < 0) x += 2.0 * pi;
    return x - pi;
}

}  // namespace

CircleGrid::CircleGrid(std::size_t m) : m_(m) {
    if (m < 8 || !is_power_of_two(m))
        throw InputError("circle grid size must be a power of two >= 8, got " + std::to_string(m));
}

double CircleGrid::step() const { return 2.0 * pi / static_cast<double>(m_); }

double CircleGrid::node(std::size_t j) const {
    return 2.0 * pi * static_cast<double>(j) / static_cast<double>(m_) - pi;
}

CircleFunction::CircleFunction(CircleGrid grid, std::vector<double> samples)
    : grid_(grid), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size())
        throw InputError("sample count " + std::to_string(samples_.size()) +
                         " does not match grid size " + std::to_string(grid_.size()));
    for (double v : samples_)
        if (!std::isfinite(v)) throw InputError("circle function samples must be finite");
    coefficients_from_samples(samples_, a_, b_);
}

CircleFunction::CircleFunction(Raw, CircleGrid grid, std::vector<double> samples,
                               std::vector<double> a, std::vector<double> b)
    : grid_(grid), samples_(std::move(samples)), a_(std::move(a)), b_(std::move(b)) {}

CircleFunction CircleFunction::zero(CircleGrid grid) {
    const std::size_t h = grid.size() / 2;
    return CircleFunction(Raw{}, grid, std::vector<double>(grid.size(), 0.0),
                          std::vector<double>(h + 1, 0.0), std::vector<double>(h + 1, 0.0));
}

CircleFunction CircleFunction::from_coefficients(CircleGrid grid, std::vector<double> a,
                                                 std::vector<double> b) {
    const std::size_t h = grid.size() / 2;
    if (a.size() != h + 1 || b.size() != h + 1)
        throw InputError("coefficient arrays must have length M/2+1");
    b[0] = 0.0;
    b[h] = 0.0;
    auto s = samples_from_coefficients(grid.size(), a, b);
    return CircleFunction(Raw{}, grid, std::move(s), std::move(a), std::move(b));
}

double CircleFunction::evaluate(double theta) const {
    const std::size_t h = a_.size() - 1;
    CompensatedSum acc;
    acc.add(a_[0]);
    for (std::size_t k = 1; k < h; ++k) {
        const double kt = static_cast<double>(k) * theta;
        acc.add(a_[k] * std::cos(kt) + b_[k] * std::sin(kt));
    }
    acc.add(a_[h] * std::cos(static_cast<double>(h) * theta));
    return acc.value();
}

CircleFunction CircleFunction::derivative(int order) const {
    if (order < 0) throw InputError("derivative order must be nonnegative");
    std::vector<double> a = a_, b = b_;
    const std::size_t h = a.size() - 1;
    for (int o = 0; o < order; ++o) {
        for (std::size_t k = 0; k <= h; ++k) {
            const double kk = static_cast<double>(k);
            const double na = kk * b[k];
            const double nb = -kk * a[k];
            a[k] = na;
            b[k] = nb;
        }
        a[h] = 0.0;
        b[h] = 0.0;
    }
    return from_coefficients(grid_, std::move(a), std::move(b));
}

double CircleFunction::sup_norm() const {
    double m = 0.0;
    for (double v : samples_) m = std::max(m, std::abs(v));
    return m;
}

CircleFunction& CircleFunction::operator+=(const CircleFunction& o) {
    if (!(grid_ == o.grid_)) throw InputError("circle functions live on different grids");
    for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] += o.samples_[j];
    for (std::size_t k = 0; k < a_.size(); ++k) {
        a_[k] += o.a_[k];
        b_[k] += o.b_[k];
    }
    return *this;
}

CircleFunction& CircleFunction::operator-=(const CircleFunction& o) {
    if (!(grid_ == o.grid_)) throw InputError("circle functions live on different grids");
    for (std::size_t j = 0; j < samples_.size(); ++j) samples_[j] -= o.samples_[j];
    for (std::size_t k = 0; k < a_.size(); ++k) {
        a_[k] -= o.a_[k];
        b_[k] -= o.b_[k];
    }
    return *this;
}

CircleFunction& CircleFunction::operator*=(double s) {
    for (double& v : samples_) v *= s;
    for (std::size_t k = 0; k < a_.size(); ++k) {
        a_[k] *= s;
        b_[k] *= s;
    }
    return *this;
}

CircleFunction analyze(const CircleGrid& grid, std::vector<double> samples) {
    return CircleFunction(grid, std::move(samples));
}

double harmonic_extend(const CircleFunction& u, std::complex<double> z) {
    const double r = std::abs(z);
    if (!(r <= 1.0 - 1e-9)) throw DomainError("harmonic_extend needs |z| <= 1 - 1e-9");
    const auto a = u.cos_coeffs();
    const auto b = u.sin_coeffs();
    CompensatedSum acc;
    acc.add(a[0]);
    std::complex<double> p = 1.0;
    for (std::size_t k = 1; k < a.size(); ++k) {
        p *= z;
        // Re((a_k − i b_k) z^k)
        acc.add(a[k] * p.real() + b[k] * p.imag());
        if (std::abs(p) < 1e-300) break;
    }
    return acc.value();
}

CircleFunction hilbert_T(const CircleFunction& u) {
    const std::size_t h = u.a_.size() - 1;
    std::vector<double> a(h + 1, 0.0), b(h + 1, 0.0);
    for (std::size_t k = 1; k < h; ++k) {
        a[k] = -u.b_[k];
        b[k] = u.a_[k];
    }
    return CircleFunction::from_coefficients(u.grid_, std::move(a), std::move(b));
}

CircleFunction hilbert_T1(const CircleFunction& u) {
    CircleFunction v = hilbert_T(u);
    const double at_one = v.at_one();
    for (double& s : v.samples_) s -= at_one;
    v.samples_[v.grid_.index_of_one()] = 0.0;
    v.a_[0] -= at_one;
    return v;
}

DerivsAtOne derivs_at_one(const CircleFunction& u) {
    const auto a = u.cos_coeffs();
    const auto b = u.sin_coeffs();
    CompensatedSum sa1, sb1, sa2, sb2, sk2;
    for (std::size_t k = 1; k < a.size(); ++k) {
        const double kk = static_cast<double>(k);
        sa1.add(kk * a[k]);
        sb1.add(kk * b[k]);
        sa2.add(kk * (kk - 1.0) * a[k]);
        sb2.add(kk * (kk - 1.0) * b[k]);
        sk2.add(kk * kk * a[k]);
    }
    DerivsAtOne d;
    d.dx = sa1.value();
    d.dy = sb1.value();
    d.dxx = sa2.value();
    d.dyy = -sa2.value();
    d.dxy = sb2.value();
    d.dtheta = sb1.value();
    d.dtheta2 = -sk2.value();
    return d;
}

double rho_kernel(int which, double theta) {
    const double c = std::cos(theta) - 1.0;
    if (which == 1) return 1.0 / (2.0 * pi * c);
    if (which == 2) return -std::sin(theta) / (2.0 * pi * c * c);
    throw InputError("kernel index must be 1 or 2");
}

double moment_rho(const CircleFunction& u, int which) {
    if (which != 1 && which != 2) throw InputError("kernel index must be 1 or 2");
    const auto& g = u.grid();
    const double tol = 1e-13 * std::max(1.0, u.sup_norm());
    CompensatedSum acc;
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double th = g.node(j);
        if (std::abs(th) <= pi / 2) {
            if (std::abs(u[j]) > tol)
                throw PreconditionError("moment_rho: u does not vanish on the right half circle");
            continue;
        }
        acc.add(u[j] * rho_kernel(which, th));
    }
    return acc.value() * g.step();
}

double ck_norm(const CircleFunction& u, int k) {
    if (k < 0 || k > 4) throw InputError("derivative order must lie in 0..4");
    double total = u.sup_norm();
    for (int j = 1; j <= k; ++j) total += u.derivative(j).sup_norm();
    return total;
}

double holder_norm(const CircleFunction& u, HolderSpec spec) {
    if (spec.k < 0 || spec.k > 4) throw InputError("derivative order must lie in 0..4");
    if (!(spec.beta > 0.0 && spec.beta < 1.0)) throw InputError("Hölder exponent must lie in (0,1)");
    const CircleFunction d = spec.k == 0 ? u : u.derivative(spec.k);
    const auto v = d.samples();
    const std::size_t m = v.size();
    const double h = u.grid().step();
    double semi = 0.0;
    auto visit = [&](std::size_t off) {
        const double chord = 2.0 * std::sin(0.5 * h * static_cast<double>(off));
        const double scale = std::pow(chord, -spec.beta);
        for (std::size_t i = 0; i < m; ++i)
            semi = std::max(semi, std::abs(v[(i + off) % m] - v[i]) * scale);
    };
    std::size_t off = 1;
    for (; off <= m / 2; ++off) {
        if (2.0 * std::sin(0.5 * h * static_cast<double>(off)) > pi / 4) break;
        visit(off);
    }
    const std::size_t bucket = std::max<std::size_t>(1, m / 64);
    for (std::size_t b = bucket; b <= m / 2; b += bucket)
        if (b >= off) visit(b);
    return ck_norm(u, spec.k) + semi;
}

CircleFunction bump(const CircleGrid& grid, double center, double halfwidth) {
    if (!(halfwidth > 0.0 && halfwidth <= pi)) throw InputError("bump half-width must lie in (0,π]");
    return CircleFunction::from_function(grid, [&](double th) {
        const double s = wrap_angle(th - center) / halfwidth;
        if (std::abs(s) >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - s * s));
    });
}

CircleFunction bump_u_minus(const CircleGrid& grid) {
    CircleFunction chi = bump(grid, pi, pi / 2);
    const double m1 = moment_rho(chi, 1);
    return (-1.0 / m1) * chi;
}

DualBasis dual_basis(const CircleGrid& grid) {
    const CircleFunction chi = bump(grid, pi, pi / 4);
    const std::size_t m = grid.size();
    std::vector<double> a1(m, 0.0), a2(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        if (chi[j] == 0.0) continue;
        a1[j] = chi[j] * rho_kernel(1, grid.node(j));
        a2[j] = chi[j] * rho_kernel(2, grid.node(j));
    }
    Eigen::Matrix2d gram = Eigen::Matrix2d::Zero();
    for (std::size_t j = 0; j < m; ++j) {
        gram(0, 0) += a1[j] * a1[j];
        gram(0, 1) += a1[j] * a2[j];
        gram(1, 1) += a2[j] * a2[j];
    }
    gram(1, 0) = gram(0, 1);
    gram *= grid.step();
    Eigen::JacobiSVD<Eigen::Matrix2d> svd(gram);
    const double cond = svd.singularValues()(0) / svd.singularValues()(1);
    if (!(cond <= 1e12)) throw PreconditionError("dual_basis: degenerate bump, Gram condition number too large");
    // b_i = Σ_l β_il a_l with ∫ b_i a_j = δ_ij, so β = gram⁻¹.
    const Eigen::Matrix2d beta = gram.inverse();
    std::vector<double> u1(m, 0.0), u2(m, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
        u1[j] = chi[j] * (beta(0, 0) * a1[j] + beta(0, 1) * a2[j]);
        u2[j] = chi[j] * (beta(1, 0) * a1[j] + beta(1, 1) * a2[j]);
    }
    return DualBasis{CircleFunction(grid, std::move(u1)), CircleFunction(grid, std::move(u2)), cond};
}

}  // namespace fekdisc
