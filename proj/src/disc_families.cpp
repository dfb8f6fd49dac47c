#include "fekdisc/disc_families.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fekdisc/error.hpp"

namespace fekdisc {
namespace {

using cd = std::complex<double>;

void check_t(double t) {
    if (!(t > 0.0 && t <= 1.0)) throw DomainError("family scale t must lie in (0,1]");
}

// Coefficients of u_{z̃,δ,γ} on the dual basis (u₁, u₂).
std::pair<double, double> delta_gamma_coeffs(cd zt, double delta, double gamma) {
    return {-2.0 * zt.imag() / (delta * (2.0 + delta)),
            -2.0 * (gamma - zt.real()) / (delta * delta)};
}

ComplexTrace combine_trace(double real_shift, double cu, const CircleFunction& u,
                           const CircleFunction& t1u) {
    ComplexTrace tr(u.size());
    for (std::size_t j = 0; j < tr.size(); ++j)
        tr[j] = {real_shift - cu * t1u[j], cu * u[j]};
    return tr;
}

}  // namespace

Eigen::VectorXd stack_complex(const std::vector<std::complex<double>>& v) {
    const auto n = static_cast<Eigen::Index>(v.size());
    Eigen::VectorXd out(2 * n);
    for (Eigen::Index j = 0; j < n; ++j) {
        out(j) = v[static_cast<std::size_t>(j)].real();
        out(n + j) = v[static_cast<std::size_t>(j)].imag();
    }
    return out;
}

QuadraticMinorant quadratic_minorant(cd zt, double delta, double gamma) {
    QuadraticMinorant q;
    q.constant = gamma;
    q.linear = 2.0 * zt.imag() / (delta * (2.0 + delta));
    q.quadratic = (gamma - zt.real()) / (delta * delta);
    q.discriminant = 0.25 * q.linear * q.linear - q.constant * q.quadratic;
    return q;
}

Eigen::VectorXd random_in_ball(Rng& rng, Eigen::Index m, double r) {
    Eigen::VectorXd v(m);
    double nrm = 0.0;
    while (nrm < 1e-12) {
        for (Eigen::Index i = 0; i < m; ++i) v(i) = rng.normal();
        nrm = v.norm();
    }
    double rad = 0.0;
    while (rad <= 0.0) rad = r * std::pow(rng.uniform(), 1.0 / static_cast<double>(m));
    return v * (rad / nrm);
}

DiscFamilies::DiscFamilies(std::size_t n, CircleGrid grid)
    : n_(n),
      grid_(grid),
      u_(bump_u_minus(grid)),
      t1u_(hilbert_T1(u_)),
      dual_(dual_basis(grid)),
      t1u1_(hilbert_T1(dual_.u1)),
      t1u2_(hilbert_T1(dual_.u2)) {
    if (n == 0) throw InputError("family dimension must be positive");
    cal_ = calibrate();
}

void DiscFamilies::check_F(const FamilyParams& p) const {
    if (p.z.size() != static_cast<Eigen::Index>(2 * n_)) throw InputError("parameter has wrong dimension");
    const double r = p.z.norm();
    if (!(r > 0.0 && r < 1.0)) throw DomainError("F needs 0 < |z| < 1");
    check_t(p.t);
}

void DiscFamilies::check_Fprime(const FamilyParams& p) const {
    if (p.z.size() != static_cast<Eigen::Index>(2 * n_)) throw InputError("parameter has wrong dimension");
    const double r = p.z.norm();
    if (!(r > 0.0 && r < fprime_radius())) throw DomainError("F' needs 0 < |z| < 1/(2n)");
    check_t(p.t);
    if (p.tau) {
        if (p.tau->size() != static_cast<Eigen::Index>(n_)) throw InputError("tau has wrong dimension");
        if (!(p.tau->norm() < 2.0)) throw DomainError("F'_tau needs |tau| < 2");
    }
}

std::vector<CircleFunction> DiscFamilies::build_u_zt(const FamilyParams& p) const {
    check_F(p);
    const double r = p.z.norm();
    std::vector<CircleFunction> out;
    for (std::size_t j = 0; j < n_; ++j) out.push_back((p.t * p.component(j).imag() / r) * u_);
    return out;
}

AnalyticDisc DiscFamilies::family_F(const FamilyParams& p) const {
    check_F(p);
    const double r = p.z.norm();
    std::vector<ComplexTrace> traces;
    for (std::size_t j = 0; j < n_; ++j) {
        const cd zj = p.component(j);
        traces.push_back(
            combine_trace(p.t * (zj.real() - zj.imag()), p.t * zj.imag() / r, u_, t1u_));
    }
    return AnalyticDisc(grid_, std::move(traces));
}

CircleFunction DiscFamilies::build_u_delta_gamma(cd zt, double delta, double gamma) const {
    const double slack = 1e-12;
    if (!(gamma >= 2.0 * std::abs(zt) * (1.0 - slack)) ||
        !(delta >= 0.5 * std::sqrt(gamma) * (1.0 - slack)) ||
        !(delta <= 2.0 * std::sqrt(gamma) * (1.0 + slack)) || !(delta > 0.0))
        throw DomainError("(z, delta, gamma) violates gamma >= 2|z| and sqrt(gamma)/2 <= delta <= 2 sqrt(gamma)");
    const auto [c1, c2] = delta_gamma_coeffs(zt, delta, gamma);
    return c1 * dual_.u1 + c2 * dual_.u2;
}

std::vector<CircleFunction> DiscFamilies::build_u_prime(const FamilyParams& p) const {
    check_Fprime(p);
    const double r = p.z.norm();
    const double delta = std::sqrt(r), gamma = 2.0 * r;
    std::vector<CircleFunction> out;
    for (std::size_t j = 0; j < n_; ++j) {
        auto [c1, c2] = delta_gamma_coeffs(p.component(j), delta, gamma);
        if (p.tau) c1 += 10.0 * (*p.tau)(static_cast<Eigen::Index>(j));
        out.push_back(p.t * c1 * dual_.u1 + p.t * c2 * dual_.u2);
    }
    return out;
}

AnalyticDisc DiscFamilies::family_Fprime(const FamilyParams& p) const {
    FamilyParams q = p;
    q.tau.reset();
    return family_Fprime_tau(q);
}

AnalyticDisc DiscFamilies::family_Fprime_tau(const FamilyParams& p) const {
    check_Fprime(p);
    const double r = p.z.norm();
    const double delta = std::sqrt(r), gamma = 2.0 * r;
    const std::size_t m = grid_.size();
    std::vector<ComplexTrace> traces;
    for (std::size_t j = 0; j < n_; ++j) {
        auto [c1, c2] = delta_gamma_coeffs(p.component(j), delta, gamma);
        if (p.tau) c1 += 10.0 * (*p.tau)(static_cast<Eigen::Index>(j));
        const double a = p.t * c1, b = p.t * c2;
        ComplexTrace tr(m);
        for (std::size_t i = 0; i < m; ++i)
            tr[i] = {2.0 * p.t * r - (a * t1u1_[i] + b * t1u2_[i]),
                     a * dual_.u1[i] + b * dual_.u2[i]};
        traces.push_back(std::move(tr));
    }
    return AnalyticDisc(grid_, std::move(traces));
}

Eigen::VectorXd DiscFamilies::phi(const Eigen::VectorXd& z, double t) const {
    const double s = z.norm();
    if (s == 0.0) return Eigen::VectorXd::Zero(z.size());
    return stack_complex(family_F({z, t, {}}).eval(cd(1.0 - s, s)));
}

Eigen::VectorXd DiscFamilies::phi_prime(const Eigen::VectorXd& z, double t) const {
    const double s = z.norm();
    if (s == 0.0) return Eigen::VectorXd::Zero(z.size());
    return stack_complex(family_Fprime({z, t, {}}).eval(cd(1.0 - std::sqrt(s), 0.0)));
}

namespace {

CaptureResult run_capture(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& map,
                          const Eigen::VectorXd& target, double t, double radius) {
    const auto m = target.size();
    InverseProblem prob{map, t * Eigen::MatrixXd::Identity(m, m), radius, t * target, 0.5 * t};
    try {
        const InverseResult r = solve_quantitative_inverse(prob, {1e-12, 500});
        return {r.z, r.residual, r.iterations, r.ratios};
    } catch (const PreconditionError&) {
        throw;
    } catch (const Error& e) {
        throw ConvergenceError(std::string("capture failure: ") + e.what());
    }
}

}  // namespace

CaptureResult DiscFamilies::capture_F(const Eigen::VectorXd& target, double t) const {
    check_t(t);
    if (target.size() != static_cast<Eigen::Index>(2 * n_)) throw InputError("target has wrong dimension");
    if (!(target.norm() < cal_.r0)) throw PreconditionError("capture_F target outside calibrated radius r0");
    return run_capture([&](const Eigen::VectorXd& z) { return phi(z, t); }, target, t, 2.0 * cal_.r0);
}

CaptureResult DiscFamilies::capture_Fprime(const Eigen::VectorXd& target, double t) const {
    check_t(t);
    if (target.size() != static_cast<Eigen::Index>(2 * n_)) throw InputError("target has wrong dimension");
    if (!(target.norm() < cal_.r0_prime))
        throw PreconditionError("capture_Fprime target outside calibrated radius r0'");
    return run_capture([&](const Eigen::VectorXd& z) { return phi_prime(z, t); }, target, t,
                       2.0 * cal_.r0_prime);
}

double DiscFamilies::fprime_wedge(const Eigen::VectorXd& z) const {
    const AnalyticDisc f = family_Fprime({z, 1.0, {}});
    const std::size_t one = grid_.index_of_one();
    std::size_t d = 0;
    for (; d < grid_.size() / 4; ++d) {
        bool ok = true;
        for (std::size_t j = 0; j < n_ && ok; ++j) {
            const auto& tr = f.trace(j);
            ok = tr[one + d + 1].real() >= 0.0 && tr[one - d - 1].real() >= 0.0;
        }
        if (!ok) break;
    }
    return static_cast<double>(d) * grid_.step();
}

FamilyCalibration DiscFamilies::calibrate() const {
    FamilyCalibration cal;
    const auto m = static_cast<Eigen::Index>(2 * n_);
    Rng rng(0xca11b7a7e5eedULL + n_);

    // Sampled Lipschitz constant of g/t = Φ/t − id on the ball of radius R.
    auto lipschitz = [&](auto&& map, double radius) {
        Rng local(0x5eed0 + n_);
        double lip = 0.0;
        for (int i = 0; i < 120; ++i) {
            const Eigen::VectorXd a = random_in_ball(local, m, radius);
            Eigen::VectorXd b = (i % 2 == 0) ? Eigen::VectorXd(a + random_in_ball(local, m, 1e-3 * radius))
                                             : random_in_ball(local, m, radius);
            if (b.norm() >= radius) b *= 0.999 * radius / b.norm();
            const double d = (a - b).norm();
            if (d == 0.0) continue;
            const Eigen::VectorXd ga = map(a) - a, gb = map(b) - b;
            lip = std::max(lip, (ga - gb).norm() / d);
        }
        return lip;
    };
    auto calibrate_radius = [&](auto&& map, double r_max, double& lip_out) {
        double r = r_max;
        for (int step = 0; step < 40; ++step, r *= 0.8) {
            const double lip = lipschitz(map, 2.0 * r);
            if (lip <= 0.25) {
                lip_out = lip;
                return r;
            }
        }
        throw ConvergenceError("capture radius calibration failed");
    };
    cal.r0 = calibrate_radius([&](const Eigen::VectorXd& z) { return phi(z, 1.0); }, 0.45, cal.lip_g);
    cal.r0_prime = calibrate_radius([&](const Eigen::VectorXd& z) { return phi_prime(z, 1.0); },
                                    0.49 * fprime_radius(), cal.lip_g_prime);

    // Wedge of F′: extreme directions at several radii plus random draws.
    double wedge = grid_.size() * grid_.step();
    const double rp = fprime_radius();
    for (double frac : {1e-4, 1e-2, 0.3, 0.9, 0.999}) {
        for (std::size_t j = 0; j < n_; ++j) {
            for (cd dir : {cd(1, 0), cd(-1, 0), cd(0, 1), cd(0, -1), cd(1, 1), cd(1, -1), cd(-1, 1), cd(-1, -1)}) {
                Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
                dir /= std::abs(dir);
                z(static_cast<Eigen::Index>(j)) = dir.real();
                z(static_cast<Eigen::Index>(n_ + j)) = dir.imag();
                wedge = std::min(wedge, fprime_wedge(z * frac * rp));
            }
        }
    }
    for (int i = 0; i < 64; ++i) wedge = std::min(wedge, fprime_wedge(random_in_ball(rng, m, rp)));
    cal.theta0 = wedge;

    // c₀ surrogates: ‖F(·,𝐳,1)‖₃ and ‖D_𝐳F‖₂·|𝐳|.  The first is largest when
    // some Im z_j/|𝐳| = ±1, so those directions are sampled near |𝐳| = 1.
    for (std::size_t j = 0; j < n_; ++j) {
        for (cd dir : {cd(0, 1), cd(0, -1), cd(1, -1), cd(-1, 1)}) {
            Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
            dir *= 0.999 / std::abs(dir);
            z(static_cast<Eigen::Index>(j)) = dir.real();
            z(static_cast<Eigen::Index>(n_ + j)) = dir.imag();
            cal.c0 = std::max(cal.c0, family_F({z, 1.0, {}}).ck_norm(3));
        }
    }
    for (int i = 0; i < 16; ++i) {
        const Eigen::VectorXd z = random_in_ball(rng, m, 0.95);
        cal.c0 = std::max(cal.c0, family_F({z, 1.0, {}}).ck_norm(3));
        const double h = 1e-5 * z.norm();
        for (Eigen::Index k = 0; k < m; ++k) {
            Eigen::VectorXd zp = z, zm = z;
            zp(k) += h;
            zm(k) -= h;
            const AnalyticDisc fp = family_F({zp, 1.0, {}}), fm = family_F({zm, 1.0, {}});
            for (std::size_t j = 0; j < n_; ++j) {
                const CircleFunction dre = (1.0 / (2 * h)) * (fp.real_part(j) - fm.real_part(j));
                const CircleFunction dim = (1.0 / (2 * h)) * (fp.imag_part(j) - fm.imag_part(j));
                cal.c0_dz = std::max(cal.c0_dz, z.norm() * std::max(ck_norm(dre, 2), ck_norm(dim, 2)));
            }
        }
    }
    return cal;
}

}  // namespace fekdisc
