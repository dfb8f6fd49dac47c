#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fekdisc/disc_families.hpp"
#include "fekdisc/error.hpp"

using namespace fekdisc;
using cd = std::complex<double>;
using std::numbers::pi;

namespace {

const DiscFamilies& families(std::size_t n) {
    static const DiscFamilies f1(1), f2(2);
    return n == 1 ? f1 : f2;
}

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out(i++) = x;
    return out;
}

double bisect(auto f, double lo, double hi) {
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (f(lo) * f(mid) <= 0 ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("quantitative inverse solver") {
    InverseProblem id{[](const Eigen::VectorXd& z) { return z; }, Eigen::MatrixXd::Identity(2, 2), 1.0,
                      vec({0.3, -0.2}), 0.0};
    auto r = solve_quantitative_inverse(id);
    CHECK((r.z - id.target).norm() < 1e-15);

    InverseProblem sine{[](const Eigen::VectorXd& z) { return Eigen::VectorXd(z.array() + 0.1 * z.array().sin()); },
                        Eigen::MatrixXd::Identity(1, 1), 1.0, vec({0.05}), 0.1};
    auto s = solve_quantitative_inverse(sine, {1e-14, 500});
    const double oracle = bisect([](double z) { return z + 0.1 * std::sin(z) - 0.05; }, -1, 1);
    CHECK(std::abs(s.z(0) - oracle) < 1e-12);
    CHECK(s.residual <= 1e-14);
    for (double q : s.ratios) CHECK(q <= 0.1 + 1e-6);
    CHECK(s.max_iterate_norm < 1.0);

    sine.lipschitz = 1.5;
    CHECK_THROWS_AS(solve_quantitative_inverse(sine), PreconditionError);
    sine.lipschitz = 0.1;
    sine.target = vec({0.95});
    CHECK_THROWS_AS(solve_quantitative_inverse(sine), PreconditionError);
    // Declared constant is a lie: the map expands, which the ratio log catches.
    InverseProblem liar{[](const Eigen::VectorXd& z) { return Eigen::VectorXd(-2.0 * z.array() + 0.01); },
                        Eigen::MatrixXd::Identity(1, 1), 10.0, vec({0.0}), 0.5};
    CHECK_THROWS_AS(solve_quantitative_inverse(liar), ContractionError);
}

TEST_CASE("u_zt") {
    const auto& f = families(2);
    auto zero = f.build_u_zt({vec({0.3, 0.1, 0, 0}), 0.5, {}});
    for (const auto& c : zero) CHECK(c.sup_norm() == 0.0);
    auto e1 = f.build_u_zt({vec({0, 0, 0.4, 0}), 1.0, {}});
    for (std::size_t j = 0; j < f.grid().size(); ++j) {
        CHECK(e1[0][j] == f.bump()[j]);
        CHECK(e1[1][j] == 0.0);
    }
    const auto z = vec({0.1, -0.2, 0.3, 0.15});
    auto half = f.build_u_zt({z, 0.5, {}});
    auto one = f.build_u_zt({z, 1.0, {}});
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t j = 0; j < f.grid().size(); ++j) CHECK(std::abs(half[c][j] - 0.5 * one[c][j]) < 1e-15);
}

TEST_CASE("family F") {
    const auto& f = families(2);
    auto flat = f.family_F({vec({0.3, -0.1, 0, 0}), 0.2, {}});
    for (std::size_t j = 0; j < f.grid().size(); ++j) {
        CHECK(flat.trace(0)[j] == cd(0.2 * 0.3, 0));
        CHECK(flat.trace(1)[j] == cd(0.2 * -0.1, 0));
    }
    Rng rng(21);
    for (int i = 0; i < 20; ++i) {
        const auto z = random_in_ball(rng, 4, 1.0);
        const double t = 0.1;
        auto F = f.family_F({z, t, {}});
        auto F1 = f.family_F({z, 1.0, {}});
        for (std::size_t c = 0; c < 2; ++c) {
            const cd expect(t * (z(c) - z(2 + c)), 0.0);
            CHECK(F.eval(c, 1.0) == expect);
            for (std::size_t j = 0; j < f.grid().size(); ++j) {
                CHECK(std::abs(F.trace(c)[j] - t * F1.trace(c)[j]) < 1e-12);
                if (std::abs(f.grid().node(j)) <= pi / 2) CHECK(std::abs(F.trace(c)[j].imag()) <= 1e-10);
            }
        }
        CHECK(F.holomorphy_residual() <= 1e-10);
        CHECK(F.ck_norm(3) <= f.calibration().c0 * t * (1 + 1e-9) + 1e-12);
        // Interior value agrees with the boundary trace approaching a node.
        const std::size_t node = 100;
        const cd xi = std::polar(1.0 - 1e-9, f.grid().node(node));
        CHECK(std::abs(F.eval(0, xi) - F.trace(0)[node]) < 1e-6);
    }
    CHECK_THROWS_AS(f.family_F({Eigen::VectorXd::Zero(4), 0.1, {}}), DomainError);
    CHECK_THROWS_AS(f.family_F({vec({0.1, 0, 0, 0}), 0.0, {}}), DomainError);
}

TEST_CASE("capture F") {
    for (std::size_t n : {1u, 2u}) {
        const auto& f = families(n);
        const double r0 = f.calibration().r0;
        Rng rng(99 + n);
        for (int i = 0; i < 20; ++i) {
            const auto target = random_in_ball(rng, 2 * n, 0.99 * r0);
            const double t = 0.05;
            auto c = f.capture_F(target, t);
            CHECK(c.residual <= 1e-8);
            CHECK((f.phi(c.z_star, t) - t * target).norm() <= 1e-8);
            CHECK(c.z_star.norm() <= 2 * target.norm());
            // t-homogeneity: the captured parameter does not depend on t.
            auto c2 = f.capture_F(target, 0.5);
            CHECK((c2.z_star - c.z_star).norm() < 1e-10);
        }
        Eigen::VectorXd real_target = Eigen::VectorXd::Zero(2 * n);
        real_target(0) = 0.5 * r0;
        auto c = f.capture_F(real_target, 0.1);
        CHECK((c.z_star - real_target).norm() < 1e-12);
        CHECK_THROWS_AS(f.capture_F(real_target * 2.5, 0.1), PreconditionError);
    }
}

TEST_CASE("u_delta_gamma") {
    const DiscFamilies f(1, CircleGrid(2048));
    auto u0 = f.build_u_delta_gamma(0.0, 0.2, 0.04);
    auto d0 = derivs_at_one(u0);
    CHECK(std::abs(d0.dx) < 1e-7);
    CHECK(std::abs(d0.dxy - (-2 * 0.04 / 0.04)) < 1e-7);
    auto u = f.build_u_delta_gamma(cd(0, 0.01), 0.2, 0.08);
    auto d = derivs_at_one(u);
    CHECK(std::abs(d.dx - (-0.02 / (0.2 * 2.2))) < 1e-7);
    CHECK(std::abs(d.dxy - (-2 * 0.08 / 0.04)) < 1e-7);
    for (std::size_t j = 0; j < f.grid().size(); ++j)
        if (std::abs(f.grid().node(j)) <= pi / 2) CHECK(u[j] == 0.0);
    CHECK_THROWS_AS(f.build_u_delta_gamma(cd(0.1, 0), 0.2, 0.1), DomainError);
    CHECK_THROWS_AS(f.build_u_delta_gamma(cd(0.01, 0), 0.9, 0.08), DomainError);
    CHECK_THROWS_AS(f.build_u_delta_gamma(cd(0.01, 0), 0.05, 0.08), DomainError);
}

TEST_CASE("family F prime") {
    for (std::size_t n : {1u, 2u}) {
        const auto& f = families(n);
        const double theta0 = f.calibration().theta0;
        CHECK(theta0 > 0.0);
        Rng rng(5 + n);
        for (int i = 0; i < 30; ++i) {
            const auto z = random_in_ball(rng, 2 * n, f.fprime_radius());
            const double t = 0.1;
            FamilyParams p{z, t, {}};
            auto F = f.family_Fprime(p);
            auto F1 = f.family_Fprime({z, 1.0, {}});
            CHECK(F.holomorphy_residual() <= 1e-10);
            for (std::size_t c = 0; c < n; ++c) {
                CHECK(F.eval(c, 1.0) == cd(2 * t * z.norm(), 0));
                const auto q = quadratic_minorant(p.component(c), std::sqrt(z.norm()), 2 * z.norm());
                CHECK(q.discriminant <= 0.0);
                for (std::size_t j = 0; j < f.grid().size(); ++j) {
                    const double th = f.grid().node(j);
                    CHECK(q(th) >= 0.0);
                    CHECK(std::abs(F.trace(c)[j] - t * F1.trace(c)[j]) < 1e-12);
                    if (std::abs(th) <= theta0) {
                        CHECK(F.trace(c)[j].real() >= -1e-10);
                        CHECK(std::abs(F.trace(c)[j].imag()) <= 1e-10);
                    }
                }
            }
        }
        CHECK_THROWS_AS(f.family_Fprime({Eigen::VectorXd::Constant(2 * n, 0.4), 0.1, {}}), DomainError);
    }
}

TEST_CASE("F prime evaluation point") {
    // F′(1−√|𝐳|) = t𝐳 + O(t|𝐳|^{3/2}); the scaled remainder stays bounded.
    const auto& f = families(2);
    const auto dir = vec({0.3, -0.5, 0.6, 0.2}).normalized();
    double prev = -1;
    for (double r : {0.2, 0.1, 0.05, 0.025, 0.0125}) {
        const auto z = dir * r * f.fprime_radius();
        const double rem = (f.phi_prime(z, 1.0) - z).norm() / std::pow(z.norm(), 1.5);
        CHECK(std::isfinite(rem));
        if (prev > 0) CHECK(rem < 4 * prev);
        prev = rem;
    }
}

TEST_CASE("capture F prime") {
    for (std::size_t n : {1u, 2u}) {
        const auto& f = families(n);
        const double r0p = f.calibration().r0_prime;
        Rng rng(7 + n);
        for (int i = 0; i < 20; ++i) {
            const auto target = random_in_ball(rng, 2 * n, 0.99 * r0p);
            auto c = f.capture_Fprime(target, 0.05);
            CHECK(c.residual <= 1e-8);
            CHECK(c.z_star.norm() <= 2 * target.norm());
            auto c1 = f.capture_Fprime(target, 1.0);
            CHECK((c1.z_star - c.z_star).norm() < 1e-10);
        }
    }
}

TEST_CASE("family F prime tau") {
    const auto& f = families(2);
    const auto z = vec({0.05, -0.03, 0.08, 0.02});
    const double t = 0.05;
    FamilyParams p{z, t, Eigen::VectorXd::Zero(2)};
    auto a = f.family_Fprime_tau(p);
    auto b = f.family_Fprime({z, t, {}});
    for (std::size_t c = 0; c < 2; ++c)
        for (std::size_t j = 0; j < f.grid().size(); ++j) CHECK(a.trace(c)[j] == b.trace(c)[j]);

    const Eigen::VectorXd tau0 = vec({0.3, -0.4});
    const double h = 1e-5;
    for (Eigen::Index l = 0; l < 2; ++l) {
        Eigen::VectorXd tp = tau0, tm = tau0;
        tp(l) += h;
        tm(l) -= h;
        auto up = f.build_u_prime({z, t, tp});
        auto um = f.build_u_prime({z, t, tm});
        auto u0 = f.build_u_prime({z, t, tau0});
        auto Fp = f.family_Fprime_tau({z, t, tp});
        auto Fm = f.family_Fprime_tau({z, t, tm});
        auto F0 = f.family_Fprime_tau({z, t, tau0});
        for (std::size_t j = 0; j < 2; ++j) {
            const double jac = (derivs_at_one(up[j]).dx - derivs_at_one(um[j]).dx) / (2 * h);
            CHECK(std::abs(jac - (static_cast<Eigen::Index>(j) == l ? 10 * t : 0.0)) < 1e-6);
            const cd second = (Fp.eval(j, 1.0) - 2.0 * F0.eval(j, 1.0) + Fm.eval(j, 1.0)) / (h * h);
            CHECK(std::abs(second) < 1e-6);
            (void)u0;
        }
    }
    for (std::size_t j = 0; j < f.grid().size(); ++j)
        if (std::abs(f.grid().node(j)) <= pi / 2)
            for (std::size_t c = 0; c < 2; ++c) CHECK(std::abs(f.family_Fprime_tau({z, t, tau0}).trace(c)[j].imag()) <= 1e-10);
    CHECK_THROWS_AS(f.family_Fprime_tau({z, t, vec({2.0, 0.5})}), DomainError);
}

TEST_CASE("Taylor structure at one") {
    const auto& f = families(1);
    Rng rng(3);
    for (int trial = 0; trial < 5; ++trial) {
        const double al = rng.uniform(-1, 1), be = rng.uniform(-1, 1);
        const CircleFunction u = al * f.dual().u1 + be * f.dual().u2;
        const auto d = derivs_at_one(u);
        const CircleFunction mt = -1.0 * hilbert_T1(u);
        double prev_u = -1, prev_t = -1;
        for (double s = 0.08; s > 0.004; s /= 2) {
            const double ru = std::abs(harmonic_extend(u, 1 - s) - (-s * d.dx - s * s * d.dx / 2)) / (s * s * s);
            const double rt = std::abs(harmonic_extend(mt, 1 - s) - s * s * d.dxy / 2) / (s * s * s);
            if (prev_u >= 0) {
                CHECK(ru <= 2 * prev_u + 1e-6);
                CHECK(rt <= 2 * prev_t + 1e-6);
            }
            prev_u = ru;
            prev_t = rt;
        }
    }
}
