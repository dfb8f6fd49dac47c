#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "fekdisc/analytic_disc.hpp"
#include "fekdisc/circle.hpp"
#include "fekdisc/error.hpp"
#include "fekdisc/rng.hpp"

using namespace fekdisc;
using std::numbers::pi;

namespace {

// Direct O(M^2) trigonometric transform.
void direct_dft(const CircleFunction& u, std::vector<double>& a, std::vector<double>& b) {
    const auto& g = u.grid();
    const std::size_t m = g.size(), h = m / 2;
    a.assign(h + 1, 0.0);
    b.assign(h + 1, 0.0);
    for (std::size_t k = 0; k <= h; ++k) {
        double sc = 0, ss = 0;
        for (std::size_t j = 0; j < m; ++j) {
            sc += u[j] * std::cos(k * g.node(j));
            ss += u[j] * std::sin(k * g.node(j));
        }
        const double f = (k == 0 || k == h) ? 1.0 / m : 2.0 / m;
        a[k] = f * sc;
        b[k] = (k == 0 || k == h) ? 0.0 : f * ss;
    }
}

// Poisson integral by the trapezoid rule on a fine angular grid.
double poisson_oracle(const CircleFunction& u, std::complex<double> z, int q = 8192) {
    const double r = std::abs(z), phi = std::arg(z);
    double acc = 0;
    for (int j = 0; j < q; ++j) {
        const double th = 2 * pi * j / q - pi;
        const double ker = (1 - r * r) / (1 - 2 * r * std::cos(th - phi) + r * r);
        acc += ker * u.evaluate(th);
    }
    return acc / q;
}

CircleFunction random_bandlimited(const CircleGrid& g, Rng& rng, int degree) {
    std::vector<double> a(g.size() / 2 + 1, 0.0), b(g.size() / 2 + 1, 0.0);
    for (int k = 0; k <= degree; ++k) {
        a[k] = rng.uniform(-1, 1) / (1 + k);
        if (k > 0) b[k] = rng.uniform(-1, 1) / (1 + k);
    }
    return CircleFunction::from_coefficients(g, a, b);
}

double max_diff(const CircleFunction& u, const CircleFunction& v) {
    double m = 0;
    for (std::size_t j = 0; j < u.size(); ++j) m = std::max(m, std::abs(u[j] - v[j]));
    return m;
}

}  // namespace

TEST_CASE("grid validation") {
    CHECK_THROWS_AS(CircleGrid(4), InputError);
    CHECK_THROWS_AS(CircleGrid(100), InputError);
    CircleGrid g(16);
    CHECK(g.node(0) == doctest::Approx(-pi));
    CHECK(g.node(g.index_of_one()) == 0.0);
    for (std::size_t j = 1; j < g.size(); ++j) CHECK(g.node(j) > g.node(j - 1));
}

TEST_CASE("analyze pure modes") {
    CircleGrid g8(8);
    auto c = CircleFunction::from_function(g8, [](double t) { return std::cos(t); });
    for (std::size_t k = 0; k <= 4; ++k) {
        CHECK(c.cos_coeffs()[k] == doctest::Approx(k == 1 ? 1.0 : 0.0).epsilon(1e-14));
        CHECK(std::abs(c.sin_coeffs()[k]) < 1e-14);
    }
    auto k3 = CircleFunction::from_function(g8, [](double) { return 3.0; });
    CHECK(k3.cos_coeffs()[0] == doctest::Approx(3.0));
    CHECK(std::abs(k3.cos_coeffs()[1]) < 1e-14);

    CircleGrid g(64);
    auto u = CircleFunction::from_function(g, [](double t) { return std::cos(3 * t) + 2 * std::sin(5 * t); });
    std::vector<double> a, b;
    direct_dft(u, a, b);
    for (std::size_t k = 0; k <= 32; ++k) {
        CHECK(std::abs(u.cos_coeffs()[k] - a[k]) < 1e-13);
        CHECK(std::abs(u.sin_coeffs()[k] - b[k]) < 1e-13);
    }
    CHECK(u.cos_coeffs()[3] == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(u.sin_coeffs()[5] == doctest::Approx(2.0).epsilon(1e-13));
    CHECK_THROWS_AS(analyze(g, std::vector<double>(10, 0.0)), InputError);
}

TEST_CASE("analysis and synthesis round trip") {
    CircleGrid g(256);
    Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        auto u = random_bandlimited(g, rng, 60);
        CircleFunction back(g, std::vector<double>(u.samples().begin(), u.samples().end()));
        for (std::size_t k = 0; k < back.cos_coeffs().size(); ++k) {
            CHECK(std::abs(back.cos_coeffs()[k] - u.cos_coeffs()[k]) < 1e-13);
            CHECK(std::abs(back.sin_coeffs()[k] - u.sin_coeffs()[k]) < 1e-13);
        }
        const double th = rng.uniform(-pi, pi);
        double direct = 0;
        for (std::size_t k = 0; k < u.cos_coeffs().size(); ++k)
            direct += u.cos_coeffs()[k] * std::cos(k * th) + u.sin_coeffs()[k] * std::sin(k * th);
        CHECK(u.evaluate(th) == doctest::Approx(direct).epsilon(1e-12));
    }
}

TEST_CASE("harmonic extension") {
    CircleGrid g(128);
    auto c = CircleFunction::from_function(g, [](double t) { return std::cos(t); });
    CHECK(harmonic_extend(c, 0.5) == doctest::Approx(0.5).epsilon(1e-14));
    Rng rng(3);
    auto u = random_bandlimited(g, rng, 20);
    CHECK(harmonic_extend(u, 0.0) == doctest::Approx(u.cos_coeffs()[0]));
    auto c2 = CircleFunction::from_function(g, [](double t) { return std::cos(2 * t); });
    const auto z = std::polar(0.3, pi / 4);
    CHECK(std::abs(harmonic_extend(c2, z)) < 1e-14);
    CHECK(std::abs(poisson_oracle(c2, z)) < 1e-12);
    for (int trial = 0; trial < 5; ++trial) {
        const auto w = std::polar(rng.uniform(0, 0.9), rng.uniform(-pi, pi));
        CHECK(std::abs(harmonic_extend(u, w) - poisson_oracle(u, w)) < 1e-9);
    }
    CHECK_THROWS_AS(harmonic_extend(u, 1.0), DomainError);
}

TEST_CASE("hilbert transform examples") {
    CircleGrid g(64);
    auto f = [&](auto fn) { return CircleFunction::from_function(g, fn); };
    auto cs = f([](double t) { return std::cos(t); });
    auto sn = f([](double t) { return std::sin(t); });
    CHECK(max_diff(hilbert_T(cs), sn) < 1e-14);
    CHECK(max_diff(hilbert_T(sn), -1.0 * cs) < 1e-14);
    auto u = f([](double t) { return std::cos(7 * t) - 4 * std::sin(2 * t); });
    auto expect = f([](double t) { return std::sin(7 * t) + 4 * std::cos(2 * t); });
    CHECK(max_diff(hilbert_T(u), expect) < 1e-13);

    CHECK(max_diff(hilbert_T1(cs), sn) < 1e-14);
    auto t1 = hilbert_T1(sn);
    CHECK(max_diff(t1, f([](double t) { return 1 - std::cos(t); })) < 1e-14);
    CHECK(t1.at_one() == 0.0);
}

TEST_CASE("hilbert transform properties") {
    CircleGrid g(256);
    Rng rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        auto u = random_bandlimited(g, rng, 50);
        auto v = random_bandlimited(g, rng, 50);
        const double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
        CHECK(max_diff(hilbert_T1(a * u + b * v), a * hilbert_T1(u) + b * hilbert_T1(v)) < 1e-13);
        CHECK(hilbert_T1(u).at_one() == 0.0);
        CHECK(max_diff(hilbert_T1(u).derivative(), hilbert_T(u.derivative())) < 1e-10);
        CHECK(conjugate_disc(u).holomorphy_residual() < 1e-10);
        CHECK(std::abs(hilbert_T(u).cos_coeffs()[0]) == 0.0);
    }
}

TEST_CASE("conjugate disc examples") {
    CircleGrid g(64);
    auto sn = CircleFunction::from_function(g, [](double t) { return std::sin(t); });
    auto f = conjugate_disc(sn);
    for (std::size_t j = 0; j < g.size(); ++j) {
        const auto expect = std::polar(1.0, g.node(j)) - 1.0;
        CHECK(std::abs(f.trace(0)[j] - expect) < 1e-14);
    }
    const std::complex<double> z(0.3, -0.4);
    CHECK(std::abs(f.eval(0, z) - (z - 1.0)) < 1e-14);
    auto cs = CircleFunction::from_function(g, [](double t) { return std::cos(t); });
    auto fc = conjugate_disc(cs);
    CHECK(std::abs(fc.eval(0, z) - std::complex<double>(0, 1) * z) < 1e-14);
    CHECK(std::abs(fc.eval(0, 1.0) - std::complex<double>(0, 1)) < 1e-14);
    auto zero = conjugate_disc(CircleFunction::zero(g));
    CHECK(std::abs(zero.eval(0, z)) == 0.0);
    CHECK(zero.holomorphy_residual() == 0.0);
    // A trace with negative frequency content is flagged.
    ComplexTrace bad(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) bad[j] = std::polar(1.0, -g.node(j));
    CHECK(AnalyticDisc(g, {bad}).holomorphy_residual() > 0.99);
}

TEST_CASE("derivatives at one") {
    CircleGrid g(64);
    auto cs = CircleFunction::from_function(g, [](double t) { return std::cos(t); });
    auto sn = CircleFunction::from_function(g, [](double t) { return std::sin(t); });
    auto dc = derivs_at_one(cs);
    CHECK(dc.dx == doctest::Approx(1.0));
    CHECK(std::abs(dc.dy) < 1e-15);
    auto ds = derivs_at_one(sn);
    CHECK(ds.dy == doctest::Approx(1.0));
    CHECK(std::abs(ds.dx) < 1e-15);
    // Finite-difference oracle on the harmonic extension of a random function.
    Rng rng(5);
    CircleGrid g2(128);
    auto u = random_bandlimited(g2, rng, 12);
    auto d = derivs_at_one(u);
    const double h = 1e-4;
    auto ext = [&](double x, double y) { return harmonic_extend(u, {x, y}); };
    // The dilation u_r(z) = u(rz) has coefficients r^k (a_k, b_k); its
    // derivatives at 1 are those of u at r, which finite differences reach.
    const double r = 0.8;
    std::vector<double> a(u.cos_coeffs().begin(), u.cos_coeffs().end());
    std::vector<double> b(u.sin_coeffs().begin(), u.sin_coeffs().end());
    for (std::size_t k = 0; k < a.size(); ++k) {
        a[k] *= std::pow(r, k);
        b[k] *= std::pow(r, k);
    }
    auto ur = CircleFunction::from_coefficients(g2, a, b);
    auto dr = derivs_at_one(ur);
    // chain rule: ∂_x [u(r·)] = r ∂_x u(r·)
    CHECK(dr.dx == doctest::Approx(r * (ext(r + h, 0) - ext(r - h, 0)) / (2 * h)).epsilon(1e-7));
    CHECK(dr.dy == doctest::Approx(r * (ext(r, h) - ext(r, -h)) / (2 * h)).epsilon(1e-7));
    CHECK(dr.dxx == doctest::Approx(r * r * (ext(r + h, 0) - 2 * ext(r, 0) + ext(r - h, 0)) / (h * h)).epsilon(1e-5));
    CHECK(dr.dxy == doctest::Approx(r * r * (ext(r + h, h) - ext(r + h, -h) - ext(r - h, h) + ext(r - h, -h)) / (4 * h * h)).epsilon(1e-5));
    CHECK(d.dtheta2 == doctest::Approx(d.dyy - d.dx).epsilon(1e-12));
    CHECK(d.dtheta == doctest::Approx(u.derivative(1).at_one()).epsilon(1e-12));
}

TEST_CASE("bump and moments") {
    CircleGrid g(2048);
    auto u = bump_u_minus(g);
    for (std::size_t j = 0; j < g.size(); ++j)
        if (std::abs(g.node(j)) <= pi / 2) CHECK(u[j] == 0.0);
    CHECK(moment_rho(u, 1) == doctest::Approx(-1.0).epsilon(1e-12));
    auto d = derivs_at_one(u);
    CHECK(std::abs(d.dx + 1.0) < 1e-6);
    CHECK(std::abs(d.dy) < 1e-8);
    CHECK(std::abs(d.dyy - d.dx) < 1e-6);
    CHECK(std::abs(d.dxx + d.dx) < 1e-6);
    CHECK(std::abs(d.dxy - moment_rho(u, 2)) < 1e-6);

    auto chi = bump(g, pi, pi / 2);
    CHECK(moment_rho(chi, 1) < 0.0);
    CHECK(moment_rho(CircleFunction::zero(g), 1) == 0.0);
    auto cs = CircleFunction::from_function(g, [](double t) { return std::cos(t); });
    CHECK_THROWS_AS(moment_rho(cs, 1), PreconditionError);
}

TEST_CASE("dual basis") {
    CircleGrid g(2048);
    auto db = dual_basis(g);
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (std::abs(g.node(j)) <= pi / 2) {
            CHECK(db.u1[j] == 0.0);
            CHECK(db.u2[j] == 0.0);
        }
    }
    CHECK(moment_rho(db.u1, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(moment_rho(db.u1, 2)) < 1e-12);
    CHECK(std::abs(moment_rho(db.u2, 1)) < 1e-12);
    CHECK(moment_rho(db.u2, 2) == doctest::Approx(1.0).epsilon(1e-12));
    auto d1 = derivs_at_one(db.u1);
    auto d2 = derivs_at_one(db.u2);
    CHECK(std::abs(d1.dx - 1.0) < 1e-8);
    CHECK(std::abs(d1.dxy) < 1e-8);
    CHECK(std::abs(d2.dx) < 1e-8);
    CHECK(std::abs(d2.dxy - 1.0) < 1e-8);
    CHECK(hilbert_T1(db.u1).at_one() == 0.0);
}

TEST_CASE("hölder norm") {
    CircleGrid g(256);
    CHECK(holder_norm(CircleFunction::zero(g), {2, 0.5}) == 0.0);
    auto cs = [](std::size_t m) {
        return CircleFunction::from_function(CircleGrid(m), [](double t) { return std::cos(t); });
    };
    CHECK(holder_norm(cs(256), {0, 0.5}) >= 1.0);
    const double coarse = holder_norm(cs(2048), {0, 0.5});
    const double fine = holder_norm(cs(8192), {0, 0.5});
    CHECK(std::abs(coarse - fine) <= 0.02 * fine);
    CHECK_THROWS_AS(holder_norm(cs(256), {5, 0.5}), InputError);
    CHECK_THROWS_AS(holder_norm(cs(256), {0, 1.0}), InputError);

    // Nested grids: the estimate never decreases; the 𝒯₁ ratio stays bounded.
    Rng rng(17);
    std::vector<std::vector<double>> as, bs;
    for (int i = 0; i < 100; ++i) {
        std::vector<double> a(17), b(17);
        for (int k = 0; k <= 16; ++k) {
            a[k] = rng.uniform(-1, 1);
            b[k] = k ? rng.uniform(-1, 1) : 0.0;
        }
        as.push_back(a);
        bs.push_back(b);
    }
    auto family = [&](std::size_t m, int i) {
        CircleGrid gm(m);
        std::vector<double> a(m / 2 + 1, 0.0), b(m / 2 + 1, 0.0);
        std::copy(as[i].begin(), as[i].end(), a.begin());
        std::copy(bs[i].begin(), bs[i].end(), b.begin());
        return CircleFunction::from_coefficients(gm, a, b);
    };
    for (HolderSpec spec : {HolderSpec{0, 0.5}, HolderSpec{1, 0.5}}) {
        double worst = 0;
        for (int i = 0; i < 100; ++i) {
            double prev = 0;
            for (std::size_t m : {128, 256, 512}) {
                auto u = family(m, i);
                const double nu = holder_norm(u, spec);
                CHECK(nu >= prev * (1 - 1e-12));
                prev = nu;
                worst = std::max(worst, holder_norm(hilbert_T1(u), spec) / nu);
            }
        }
        CHECK(std::isfinite(worst));
        CHECK(worst < 50.0);
    }
}
