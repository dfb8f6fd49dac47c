#include "fekdisc/bishop.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>

#include "fekdisc/error.hpp"

namespace fekdisc {
namespace {

using cd = std::complex<double>;

double sup_diff(const std::vector<CircleFunction>& a, const std::vector<CircleFunction>& b) {
    double m = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c)
        for (std::size_t j = 0; j < a[c].size(); ++j) m = std::max(m, std::abs(a[c][j] - b[c][j]));
    return m;
}

// h applied node by node; U must stay in the ball where h is valid.
std::vector<CircleFunction> apply_h(const GraphManifold& K, const std::vector<CircleFunction>& U) {
    const std::size_t n = U.size(), m = U[0].size();
    std::vector<std::vector<double>> out(n, std::vector<double>(m));
    Eigen::VectorXd x(static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t c = 0; c < n; ++c) x(static_cast<Eigen::Index>(c)) = U[c][j];
        if (x.norm() > K.domain_radius) throw DomainError("Bishop iterate left the ball where h is defined");
        const Eigen::VectorXd y = K.h(x);
        for (std::size_t c = 0; c < n; ++c) out[c][j] = y(static_cast<Eigen::Index>(c));
    }
    std::vector<CircleFunction> res;
    for (auto& s : out) res.emplace_back(U[0].grid(), std::move(s));
    return res;
}

BishopSolution picard(const GraphManifold& K, const std::vector<double>& data,
                      std::vector<CircleFunction> forcing, const BishopOptions& opt, bool singular) {
    const std::size_t n = forcing.size();
    if (K.n != n) throw InputError("manifold dimension does not match the family");
    const CircleGrid grid = forcing[0].grid();
    std::vector<CircleFunction> base;
    for (std::size_t c = 0; c < n; ++c) {
        CircleFunction b = -1.0 * hilbert_T1(forcing[c]);
        std::vector<double> s(b.samples().begin(), b.samples().end());
        for (double& v : s) v += data[c];
        base.emplace_back(grid, std::move(s));
    }
    auto G = [&](const std::vector<CircleFunction>& U) {
        const auto hU = apply_h(K, U);
        std::vector<CircleFunction> out;
        for (std::size_t c = 0; c < n; ++c) out.push_back(base[c] - hilbert_T1(hU[c]));
        return out;
    };

    BishopSolution sol;
    sol.singular = singular;
    std::vector<CircleFunction> U;
    for (std::size_t c = 0; c < n; ++c) U.push_back(opt.zero_start ? CircleFunction::zero(grid) : forcing[c]);

    double prev = 0.0;
    int bad = 0;
    for (int k = 0;; ++k) {
        if (k >= opt.max_iterations) throw ConvergenceError("Bishop iteration did not converge");
        std::vector<CircleFunction> next = G(U);
        const double diff = sup_diff(next, U);
        U = std::move(next);
        if (!std::isfinite(diff)) throw ContractionError("Bishop iteration diverged (t too large)");
        if (k > 0) {
            // Ratios of steps already at roundoff level carry no information.
            const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, sol.sup_norm());
            if (prev > floor) {
                const double r = diff / prev;
                sol.ratio_log.push_back(r);
                bad = r < 1.0 ? 0 : bad + 1;
                if (bad >= 5) throw ContractionError("Bishop iteration is not contracting (t too large)");
            }
        }
        sol.U = U;
        if (diff <= opt.tolerance && k > 0) {
            sol.iterations = k - 1;
            break;
        }
        prev = diff;
    }
    sol.fixed_point_residual = sup_diff(G(sol.U), sol.U);
    sol.hU = apply_h(K, sol.U);
    sol.forcing = std::move(forcing);
    return sol;
}

}  // namespace

GraphManifold h_zero(std::size_t n) {
    return {n, [n](const Eigen::VectorXd&) { return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)); }, 0.0,
            "zero", std::numeric_limits<double>::infinity()};
}

GraphManifold h_quad(std::size_t n, double q) {
    return {n, [q](const Eigen::VectorXd& x) { return Eigen::VectorXd(q * x.array().square()); }, 2.0 * q,
            "quad"};
}

GraphManifold h_mix(std::size_t n, double q) {
    return {n,
            [q](const Eigen::VectorXd& x) {
                const Eigen::Index m = x.size();
                Eigen::VectorXd y(m);
                for (Eigen::Index j = 0; j < m; ++j) y(j) = q * x(j) * x((j + 1) % m);
                return y;
            },
            2.0 * q, "mix"};
}

ManifoldCheck check_manifold(const GraphManifold& K, Rng& rng, int samples) {
    ManifoldCheck out;
    const auto m = static_cast<Eigen::Index>(K.n);
    for (int i = 0; i < samples; ++i) {
        const Eigen::VectorXd x = random_in_ball(rng, m, 1.0);
        const double r = x.norm();
        out.value_ratio = std::max(out.value_ratio, K.h(x).norm() / (r * r));
        Eigen::MatrixXd D(m, m);
        const double step = 1e-6;
        for (Eigen::Index k = 0; k < m; ++k) {
            Eigen::VectorXd xp = x, xm = x;
            xp(k) += step;
            xm(k) -= step;
            D.col(k) = (K.h(xp) - K.h(xm)) / (2.0 * step);
        }
        const double dn = m == 1 ? std::abs(D(0, 0)) : D.jacobiSvd().singularValues()(0);
        out.derivative_ratio = std::max(out.derivative_ratio, dn / r);
    }
    const double slack = 1.0 + 1e-6;
    out.ok = out.value_ratio <= K.c1 * slack + 1e-12 && out.derivative_ratio <= K.c1 * slack + 1e-9;
    return out;
}

double BishopSolution::geometric_mean_ratio() const {
    double s = 0.0;
    int cnt = 0;
    for (double r : ratio_log)
        if (r > 0.0) {
            s += std::log(r);
            ++cnt;
        }
    return cnt == 0 ? 0.0 : std::exp(s / cnt);
}

double BishopSolution::sup_norm() const {
    double m = 0.0;
    for (std::size_t j = 0; !U.empty() && j < U[0].size(); ++j) {
        double s = 0.0;
        for (const auto& c : U) s += c[j] * c[j];
        m = std::max(m, std::sqrt(s));
    }
    return m;
}

double BishopSolution::P(std::size_t comp, cd z) const { return harmonic_extend(hU.at(comp), z); }

void BishopSolution::write_csv(std::ostream& os) const {
    os << "iteration,ratio\n" << std::setprecision(17);
    for (std::size_t i = 0; i < ratio_log.size(); ++i) os << i + 1 << ',' << ratio_log[i] << '\n';
}

BishopSolution solve_bishop(const DiscFamilies& fam, const GraphManifold& K, const FamilyParams& p,
                            const BishopOptions& opt) {
    auto forcing = fam.build_u_zt(p);
    std::vector<double> data(fam.n());
    for (std::size_t j = 0; j < fam.n(); ++j) data[j] = p.t * (p.component(j).real() - p.component(j).imag());
    return picard(K, data, std::move(forcing), opt, false);
}

BishopSolution solve_bishop_singular(const DiscFamilies& fam, const GraphManifold& K, const FamilyParams& p,
                                     const BishopOptions& opt) {
    auto forcing = fam.build_u_prime(p);
    const std::vector<double> data(fam.n(), 2.0 * p.t * p.z.norm());
    return picard(K, data, std::move(forcing), opt, true);
}

AnalyticDisc assemble_Fh(const BishopSolution& sol) {
    std::vector<ComplexTrace> traces;
    for (std::size_t c = 0; c < sol.U.size(); ++c) {
        ComplexTrace tr(sol.U[c].size());
        for (std::size_t j = 0; j < tr.size(); ++j) tr[j] = {sol.U[c][j], sol.hU[c][j] + sol.forcing[c][j]};
        traces.push_back(std::move(tr));
    }
    return AnalyticDisc(sol.U[0].grid(), std::move(traces));
}

double attachment_residual(const AnalyticDisc& disc, const GraphManifold& K) {
    const auto& grid = disc.grid();
    const auto n = static_cast<Eigen::Index>(disc.dim());
    double worst = 0.0;
    Eigen::VectorXd x(n);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (std::abs(grid.node(j)) > std::numbers::pi / 2) continue;
        for (Eigen::Index c = 0; c < n; ++c) x(c) = disc.trace(static_cast<std::size_t>(c))[j].real();
        const Eigen::VectorXd y = K.h(x);
        for (Eigen::Index c = 0; c < n; ++c)
            worst = std::max(worst, std::abs(disc.trace(static_cast<std::size_t>(c))[j].imag() - y(c)));
    }
    return worst;
}

Eigen::VectorXd phi_h(const DiscFamilies& fam, const GraphManifold& K, const Eigen::VectorXd& z, double t) {
    const double s = z.norm();
    if (s == 0.0) return Eigen::VectorXd::Zero(z.size());
    return stack_complex(assemble_Fh(solve_bishop(fam, K, {z, t, {}})).eval(cd(1.0 - s, s)));
}

namespace {

HCapture run_h_capture(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& map,
                       const Eigen::VectorXd& target, double t, double radius) {
    const auto m = target.size();
    InverseProblem prob{map, t * Eigen::MatrixXd::Identity(m, m), radius, target, 0.5 * t};
    try {
        const InverseResult r = solve_quantitative_inverse(prob, {1e-12, 500});
        HCapture out;
        out.z_star = r.z;
        out.residual = r.residual;
        out.iterations = r.iterations;
        out.ratios = r.ratios;
        return out;
    } catch (const PreconditionError&) {
        throw;
    } catch (const Error& e) {
        throw ConvergenceError(std::string("capture failure: ") + e.what());
    }
}

}  // namespace

HCapture phi_h_capture(const DiscFamilies& fam, const GraphManifold& K, const Eigen::VectorXd& target, double t) {
    if (target.size() != static_cast<Eigen::Index>(2 * fam.n())) throw InputError("target has wrong dimension");
    const double r0 = fam.calibration().r0;
    if (!(target.norm() < 0.5 * r0 * t)) throw PreconditionError("Phi^h capture needs |target| < r0 t / 2");
    HCapture c = run_h_capture([&](const Eigen::VectorXd& z) { return phi_h(fam, K, z, t); }, target, t, r0);
    c.disc_point_gap = std::sqrt(2.0) * c.z_star.norm();
    c.disc_point_bound = 8.0 * target.norm() / t;
    return c;
}

TauControl solve_tau(const DiscFamilies& fam, const GraphManifold& K, const Eigen::VectorXd& z, double t) {
    const std::size_t n = fam.n();
    const auto ni = static_cast<Eigen::Index>(n);
    const double s = z.norm(), delta = std::sqrt(s);
    TauControl out;
    out.target_deriv.resize(ni);
    for (Eigen::Index j = 0; j < ni; ++j) out.target_deriv(j) = 2.0 * t * z(ni + j) / (delta * (2.0 + delta));

    auto solve_at = [&](const Eigen::VectorXd& tau) { return solve_bishop_singular(fam, K, {z, t, tau}); };
    auto residual_of = [&](const BishopSolution& sol) {
        Eigen::VectorXd r(ni);
        for (Eigen::Index j = 0; j < ni; ++j)
            r(j) = derivs_at_one(sol.U[static_cast<std::size_t>(j)]).dtheta - out.target_deriv(j);
        return r;
    };

    Eigen::VectorXd tau = Eigen::VectorXd::Zero(ni);
    Eigen::VectorXd r = residual_of(solve_at(tau));
    // ∂θU′(1) moves by −10t per unit τ_j when h ≡ 0; that diagonal seeds Newton.
    Eigen::MatrixXd J = -10.0 * t * Eigen::MatrixXd::Identity(ni, ni);
    const double goal = 1e-12;
    int step = 0;
    double best = r.norm();
    int stalled = 0;
    while (r.lpNorm<Eigen::Infinity>() > goal) {
        if (step >= 50) throw ConvergenceError("tau control failure: Newton stagnated");
        tau -= J.partialPivLu().solve(r);
        if (tau.norm() > 1.0) throw DomainError("tau left the unit ball (out of chart)");
        ++step;
        r = residual_of(solve_at(tau));
        if (r.norm() < 0.5 * best) {
            best = r.norm();
            stalled = 0;
        } else if (++stalled >= 3) {
            break;  // roundoff floor
        }
        if (r.lpNorm<Eigen::Infinity>() <= goal) break;
        const double h = 1e-5 * t;
        for (Eigen::Index k = 0; k < ni; ++k) {
            Eigen::VectorXd tp = tau, tm = tau;
            tp(k) += h;
            tm(k) -= h;
            J.col(k) = (residual_of(solve_at(tp)) - residual_of(solve_at(tm))) / (2.0 * h);
        }
    }
    const BishopSolution sol = solve_at(tau);
    out.tau = tau;
    out.newton_steps = step;
    out.residual = residual_of(sol).lpNorm<Eigen::Infinity>();
    for (Eigen::Index j = 0; j < ni; ++j) {
        const double want = 2.0 * t * (2.0 * s - z(j)) / s;
        out.second_deriv_gap =
            std::max(out.second_deriv_gap, std::abs(derivs_at_one(sol.U[static_cast<std::size_t>(j)]).dtheta2 - want));
    }
    return out;
}

WedgeReport verify_wedge_attachment(const BishopSolution& sol, const GraphManifold& K, double theta) {
    WedgeReport rep;
    const AnalyticDisc disc = assemble_Fh(sol);
    const auto& grid = disc.grid();
    const auto n = static_cast<Eigen::Index>(sol.U.size());
    rep.component_min.assign(sol.U.size(), std::numeric_limits<double>::infinity());
    Eigen::VectorXd x(n);
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (std::abs(grid.node(j)) > theta + 1e-12) continue;
        for (Eigen::Index c = 0; c < n; ++c) {
            x(c) = sol.U[static_cast<std::size_t>(c)][j];
            rep.component_min[static_cast<std::size_t>(c)] =
                std::min(rep.component_min[static_cast<std::size_t>(c)], x(c));
        }
        const Eigen::VectorXd y = K.h(x);
        for (Eigen::Index c = 0; c < n; ++c)
            rep.attachment_residual =
                std::max(rep.attachment_residual, std::abs(disc.trace(static_cast<std::size_t>(c))[j].imag() - y(c)));
    }
    rep.pass = std::all_of(rep.component_min.begin(), rep.component_min.end(), [](double v) { return v >= -1e-9; });
    return rep;
}

double observed_wedge(const BishopSolution& sol) {
    const auto& grid = sol.U[0].grid();
    const std::size_t one = grid.index_of_one();
    std::size_t d = 0;
    for (; d < grid.size() / 2 - 1; ++d) {
        bool ok = true;
        for (const auto& c : sol.U) ok = ok && c[one + d + 1] >= -1e-9 && c[one - d - 1] >= -1e-9;
        if (!ok) break;
    }
    return static_cast<double>(d) * grid.step();
}

Eigen::VectorXd phi_h_prime(const DiscFamilies& fam, const GraphManifold& K, const Eigen::VectorXd& z, double t) {
    const double s = z.norm();
    if (s == 0.0) return Eigen::VectorXd::Zero(z.size());
    const TauControl tc = solve_tau(fam, K, z, t);
    const BishopSolution sol = solve_bishop_singular(fam, K, {z, t, tc.tau});
    return stack_complex(assemble_Fh(sol).eval(cd(1.0 - std::sqrt(s), 0.0)));
}

HCapture phi_h_prime_capture(const DiscFamilies& fam, const GraphManifold& K, const Eigen::VectorXd& target,
                             double t) {
    if (target.size() != static_cast<Eigen::Index>(2 * fam.n())) throw InputError("target has wrong dimension");
    const double r0 = fam.calibration().r0_prime;
    if (!(target.norm() < 0.5 * r0 * t)) throw PreconditionError("Phi'^h capture needs |target| < r0' t / 2");
    HCapture c =
        run_h_capture([&](const Eigen::VectorXd& z) { return phi_h_prime(fam, K, z, t); }, target, t, r0);
    c.disc_point_gap = c.z_star.norm();  // |1 − z*|² with z* = 1 − √|𝐳*|
    c.disc_point_bound = 2.0 * target.norm() / t;
    return c;
}

namespace {

// Parameters probing the worst cases: Im z_j/|𝐳| = ±1 near the rim plus random draws.
std::vector<Eigen::VectorXd> probe_params(std::size_t n, double radius, int random, Rng& rng) {
    std::vector<Eigen::VectorXd> out;
    const auto m = static_cast<Eigen::Index>(2 * n);
    for (std::size_t j = 0; j < n; ++j)
        for (cd dir : {cd(0, 1), cd(0, -1), cd(1, 0), cd(-1, 0), cd(1, -1)}) {
            Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
            dir *= 0.999 * radius / std::abs(dir);
            z(static_cast<Eigen::Index>(j)) = dir.real();
            z(static_cast<Eigen::Index>(n + j)) = dir.imag();
            out.push_back(z);
        }
    for (int i = 0; i < random; ++i) out.push_back(random_in_ball(rng, m, radius));
    return out;
}

bool contracts_at(const DiscFamilies& fam, const GraphManifold& K, const std::vector<Eigen::VectorXd>& zs,
                  double t, bool singular) {
    try {
        for (const auto& z : zs) {
            const BishopSolution s =
                singular ? solve_bishop_singular(fam, K, {z, t, {}}) : solve_bishop(fam, K, {z, t, {}});
            for (double r : s.ratio_log)
                if (r >= 1.0) return false;
        }
    } catch (const Error&) {
        return false;
    }
    return true;
}

}  // namespace

double calibrate_t1(const DiscFamilies& fam, const GraphManifold& K, bool singular) {
    Rng rng(0xb15b0b + fam.n());
    const auto zs = probe_params(fam.n(), singular ? fam.fprime_radius() : 1.0, 8, rng);
    if (contracts_at(fam, K, zs, 1.0, singular)) return 1.0;
    double lo = 1e-5, hi = 1.0;
    if (!contracts_at(fam, K, zs, lo, singular)) throw ConvergenceError("Bishop iteration fails even at t = 1e-5");
    for (int i = 0; i < 24; ++i) {
        const double mid = std::sqrt(lo * hi);
        (contracts_at(fam, K, zs, mid, singular) ? lo : hi) = mid;
    }
    return lo;
}

double calibrate_c2(const DiscFamilies& fam, const GraphManifold& K, double t_lo, double t_hi) {
    Rng rng(0xc2c2 + fam.n());
    const auto m = static_cast<Eigen::Index>(2 * fam.n());
    double c2 = 0.0;
    for (int i = 0; i < 10; ++i) {
        const double t = t_lo * std::pow(t_hi / t_lo, i / 9.0);
        for (int k = 0; k < 10; ++k) {
            const double r = 0.05 + 0.1 * k;
            Eigen::VectorXd dir = random_in_ball(rng, m, 1.0);
            const Eigen::VectorXd z = dir * (r / dir.norm());
            const double gap = (phi_h(fam, K, z, t) - fam.phi(z, t)).norm();
            c2 = std::max(c2, gap / (t * t * r));
        }
    }
    return c2;
}

BishopCalibration calibrate_bishop(const DiscFamilies& fam, const GraphManifold& K, double t_wedge) {
    BishopCalibration cal;
    cal.t1 = calibrate_t1(fam, K);
    cal.t1_singular = calibrate_t1(fam, K, true);
    if (!(t_wedge < cal.t1_singular))
        throw PreconditionError("wedge calibration t is above the singular contraction threshold");
    cal.c2 = calibrate_c2(fam, K, 0.005, std::min(0.05, 0.5 * cal.t1));
    cal.t_wedge = t_wedge;
    Rng rng(0x7a7a + fam.n());
    const auto m = static_cast<Eigen::Index>(2 * fam.n());
    const double rp = 0.99 * fam.fprime_radius();
    double wedge = std::numbers::pi;
    for (int half = 0; half < 2; ++half)
        for (int i = 0; i < 10; ++i) {
            const Eigen::VectorXd z = random_in_ball(rng, m, rp);
            const TauControl tc = solve_tau(fam, K, z, t_wedge);
            cal.c3_halves[half] = std::max(cal.c3_halves[half], tc.tau.norm() / t_wedge);
            wedge = std::min(wedge, observed_wedge(solve_bishop_singular(fam, K, {z, t_wedge, tc.tau})));
        }
    cal.c3 = std::max(cal.c3_halves[0], cal.c3_halves[1]);
    for (double frac : {1e-3, 0.1, 1.0})
        for (const auto& z : probe_params(fam.n(), frac * rp, 0, rng)) {
            const TauControl tc = solve_tau(fam, K, z, t_wedge);
            wedge = std::min(wedge, observed_wedge(solve_bishop_singular(fam, K, {z, t_wedge, tc.tau})));
        }
    cal.theta_t = std::min(wedge, fam.calibration().theta0);
    for (double t : {0.5 * t_wedge, t_wedge})
        for (int i = 0; i < 6; ++i) {
            const Eigen::VectorXd z = random_in_ball(rng, m, rp);
            const double s = z.norm();
            const double gap = (phi_h_prime(fam, K, z, t) - t * z).norm();
            cal.c4 = std::max(cal.c4, gap / (s * (t * t + t * std::sqrt(s))));
        }
    return cal;
}

}  // namespace fekdisc
