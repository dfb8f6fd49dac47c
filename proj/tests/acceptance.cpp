// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>

#include "fekdisc/bishop.hpp"
#include "fekdisc/circle.hpp"
#include "fekdisc/disc_families.hpp"
#include "fekdisc/error.hpp"
#include "fekdisc/experiments.hpp"
#include "fekdisc/fekete.hpp"
#include "fekdisc/measures.hpp"
#include "fekdisc/subharmonic.hpp"

using namespace fekdisc;
using std::numbers::pi;
using cd = std::complex<double>;

namespace {

struct Verdict {
    bool pass = false;
    std::string detail;
};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

double max_diff(const CircleFunction& a, const CircleFunction& b) {
    double m = 0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
}

double column_max(const CsvTable& t, const std::string& col) {
    double m = -INFINITY;
    for (double v : t.numbers(col)) m = std::isnan(v) ? INFINITY : std::max(m, v);
    return m;
}

double column_min(const CsvTable& t, const std::string& col) {
    double m = INFINITY;
    for (double v : t.numbers(col)) m = std::isnan(v) ? -INFINITY : std::min(m, v);
    return m;
}

const DiscFamilies& families(std::size_t n) {
    static const DiscFamilies f1(1), f2(2);
    return n == 1 ? f1 : f2;
}

// 1
Verdict hilbert_exactness() {
    const auto t0 = std::chrono::steady_clock::now();
    const CircleGrid g(1024);
    double err = 0;
    for (int k = 1; k <= 100; ++k) {
        const auto c = CircleFunction::from_function(g, [k](double t) { return std::cos(k * t); });
        const auto s = CircleFunction::from_function(g, [k](double t) { return std::sin(k * t); });
        err = std::max({err, max_diff(hilbert_T(c), s), max_diff(hilbert_T(s), -1.0 * c)});
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {err <= 1e-12 && secs < 1, "max_err=" + num(err) + " time=" + num(secs) + "s"};
}

// 2
Verdict moment_identities() {
    const CircleGrid g(2048);
    const auto um = bump_u_minus(g);
    const auto db = dual_basis(g);
    double gap = 0;
    for (const auto* u : {&um, &db.u1, &db.u2}) {
        const auto d = derivs_at_one(*u);
        gap = std::max({gap, std::abs(d.dx - moment_rho(*u, 1)), std::abs(d.dxy - moment_rho(*u, 2))});
    }
    const double ident = std::max({std::abs(moment_rho(db.u1, 1) - 1), std::abs(moment_rho(db.u1, 2)),
                                   std::abs(moment_rho(db.u2, 1)), std::abs(moment_rho(db.u2, 2) - 1)});
    return {gap <= 1e-6 && ident <= 1e-8, "derivative_vs_quadrature=" + num(gap) + " moment_matrix_err=" + num(ident)};
}

RunRecord disc_run() {
    ExperimentConfig cfg;
    cfg.experiment = "disc";
    cfg.seed = 2024;
    cfg.disc_n = {1, 2};
    cfg.disc_t = {0.02, 0.05, 0.1};
    cfg.disc_samples = 17;  // 102 (𝐳, t) samples
    return cmd_disc(cfg);
}

// 3
Verdict family_contracts(const RunRecord& rec, double secs) {
    const auto& t = rec.tables.at("samples");
    const double f1 = column_max(t, "F1_err"), fp1 = column_max(t, "Fp1_err");
    const double holo = column_max(t, "holomorphy"), wedge = column_min(t, "wedge_min");
    const double disc = column_max(t, "discriminant");
    const bool ok = t.rows.size() >= 100 && f1 == 0 && fp1 == 0 && holo <= 1e-10 && wedge >= -1e-10 && disc <= 0 &&
                    secs < 10 && rec.count("error") == 0;
    return {ok, "samples=" + std::to_string(t.rows.size()) + " closed_form_err=" + num(std::max(f1, fp1)) +
                    " holomorphy=" + num(holo) + " wedge_min=" + num(wedge) + " max_discriminant=" + num(disc) +
                    " time=" + num(secs) + "s"};
}

// 4
Verdict capture_bounds(const RunRecord& rec) {
    const auto& t = rec.tables.at("samples");
    const double res = std::max(column_max(t, "capF_res"), column_max(t, "capFp_res"));
    const double ratio = std::max(column_max(t, "capF_ratio"), column_max(t, "capFp_ratio"));
    return {t.rows.size() >= 100 && res <= 1e-8 && ratio <= 2,
            "targets=" + std::to_string(t.rows.size()) + " max_residual=" + num(res) + " max_|z*|/|target|=" + num(ratio)};
}

// 5
Verdict bishop_solver() {
    const auto t0 = std::chrono::steady_clock::now();
    ExperimentConfig cfg;
    cfg.experiment = "bishop";
    cfg.seed = 2025;
    cfg.bishop_n = {1, 2};
    cfg.bishop_t = {0.05};
    cfg.bishop_samples = 50;
    cfg.bishop_m = 1024;
    cfg.h = "quad:0.5";
    const auto rec = cmd_bishop(cfg);
    const auto& t = rec.tables.at("solves");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double worst_ratio = 0;
    for (double v : t.numbers("gm_ratio")) worst_ratio = std::isnan(v) ? INFINITY : std::max(worst_ratio, v);
    const double bound = 1.1 * std::sqrt(0.05);
    const double res = column_max(t, "residual"), att = column_max(t, "attachment");
    const double gap = column_max(t, "two_start_gap");
    int errors = 0;
    for (const auto& r : t.rows) errors += r[t.column("status")] == "error";
    const bool ok = errors == 0 && worst_ratio <= bound && res <= 1e-11 && att <= 1e-9 && gap <= 1e-10 && secs < 60;
    return {ok, "solves=" + std::to_string(t.rows.size()) + " max_gm_ratio=" + num(worst_ratio) + " bound=" + num(bound) +
                    " residual=" + num(res) + " attachment=" + num(att) + " two_start_gap=" + num(gap) +
                    " errors=" + std::to_string(errors) + " time=" + num(secs) + "s"};
}

// 6
Verdict phi_comparison() {
    std::string detail;
    bool ok = true;
    for (std::size_t n : {1u, 2u}) {
        const auto K = h_quad(n, 0.5);
        const double c2 = calibrate_c2(families(n), K);
        const double c2_fine = calibrate_c2(DiscFamilies(n, CircleGrid(2048)), K);
        // The bound on the same (t, |𝐳|) lattice with directions not used for calibration.
        Rng rng(0x6c61 + n);
        double worst = 0;
        for (int i = 0; i < 10; ++i) {
            const double t = 0.005 * std::pow(10.0, i / 9.0);
            for (int k = 0; k < 10; ++k) {
                const double r = 0.05 + 0.1 * k;
                Eigen::VectorXd z = random_in_ball(rng, static_cast<Eigen::Index>(2 * n), 1.0);
                z *= r / z.norm();
                const double g = (phi_h(families(n), K, z, t) - families(n).phi(z, t)).norm();
                worst = std::max(worst, g / (c2 * t * t * r));
            }
        }
        const double stab = c2_fine / c2;
        ok = ok && worst <= 1 && stab <= 2 && stab >= 0.5;
        detail += "n=" + std::to_string(n) + ": c2=" + num(c2) + " c2(M=2048)=" + num(c2_fine) +
                  " max_gap/(c2 t^2|z|)=" + num(worst) + "; ";
    }
    return {ok, detail};
}

// 7
Verdict singular_control() {
    const double t = 0.02;
    std::string detail;
    bool ok = true;
    for (std::size_t n : {1u, 2u}) {
        const auto& f = families(n);
        const auto K = h_quad(n, 0.1);
        Rng rng(0x7e57 + n);
        int solved = 0, wedge_ok = 0;
        double res = 0, c3a = 0, c3b = 0;
        std::string first_error;
        for (int i = 0; i < 10; ++i) {
            const auto z = random_in_ball(rng, static_cast<Eigen::Index>(2 * n), 0.99 * f.fprime_radius());
            try {
                const auto tc = solve_tau(f, K, z, t);
                ++solved;
                res = std::max(res, tc.residual);
                (i % 2 ? c3a : c3b) = std::max(i % 2 ? c3a : c3b, tc.tau.norm() / t);
                const auto sol = solve_bishop_singular(f, K, {z, t, tc.tau});
                wedge_ok += verify_wedge_attachment(sol, K, f.calibration().theta0).pass;
            } catch (const Error& e) {
                if (first_error.empty()) first_error = e.what();
            }
        }
        const bool stable = c3a > 0 && c3b > 0 && c3a <= 2 * c3b && c3b <= 2 * c3a;
        ok = ok && solved == 10 && wedge_ok == 10 && res <= 1e-8 && stable;
        double threshold = NAN;
        try {
            threshold = calibrate_t1(f, K, true);
        } catch (const Error&) {
        }
        detail += "n=" + std::to_string(n) + ": solved=" + std::to_string(solved) + "/10 wedge_pass=" +
                  std::to_string(wedge_ok) + "/10 residual=" + num(res) + " c3=" + num(std::max(c3a, c3b)) +
                  " singular_threshold_t=" + num(threshold) +
                  (first_error.empty() ? "" : " first_error=\"" + first_error + "\"") + "; ";
    }
    return {ok, detail};
}

double angle_gap_error(const PointConfiguration& c) {
    std::vector<double> a;
    for (const auto& p : c.points) a.push_back(circle_angle(p));
    std::sort(a.begin(), a.end());
    const double ideal = 2 * pi / static_cast<double>(a.size());
    double worst = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double gap = i + 1 < a.size() ? a[i + 1] - a[i] : a[0] + 2 * pi - a[i];
        worst = std::max(worst, std::abs(gap - ideal));
    }
    return worst;
}

// 8
Verdict fekete_small_cases() {
    const auto mesh = Domain::interval().mesh(401);
    const auto spec = make_basis(Domain::interval(), 2);
    const auto c = exchange_refine(leja_greedy(spec, {}, mesh), spec, {}, mesh);
    std::vector<double> xs;
    for (const auto& p : c.points) xs.push_back(p[0]);
    std::sort(xs.begin(), xs.end());
    double step = 0;
    for (std::size_t i = 0; i + 1 < mesh.size(); ++i) step = std::max(step, std::abs(mesh[i + 1][0] - mesh[i][0]));
    const double set_err = std::max({std::abs(xs[0] + 1), std::abs(xs[1]), std::abs(xs[2] - 1)});
    // Brute force over all mesh triples.
    double best = -INFINITY;
    for (std::size_t a = 0; a < mesh.size(); ++a)
        for (std::size_t b = a + 1; b < mesh.size(); ++b)
            for (std::size_t d = b + 1; d < mesh.size(); ++d) {
                const double x = mesh[a][0], y = mesh[b][0], z = mesh[d][0];
                best = std::max(best, std::log(2 * std::abs((y - x) * (z - x) * (z - y))));
            }
    const bool interval_ok = set_err <= step && std::abs(c.logdet - best) <= 1e-12;

    const double cstep = 2 * pi / 4096;
    double circ = 0;
    for (int k : {1, 2}) circ = std::max(circ, angle_gap_error(fekete_search(make_basis(Domain::circle(), k))));
    return {interval_ok && circ <= 2 * cstep,
            "interval_set_err=" + num(set_err) + " mesh_step=" + num(step) + " logdet-bruteforce=" + num(c.logdet - best) +
                " circle_gap_err=" + num(circ) + " circle_mesh_step=" + num(cstep)};
}

// 9
Verdict rate_study() {
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    for (const auto& [domain, kmax] : {std::pair{"circle", 40}, {"interval", 40}, {"sphere", 15}}) {
        ExperimentConfig cfg;
        cfg.experiment = "rate";
        cfg.domain = domain;
        cfg.k_min = 2;
        cfg.k_max = kmax;
        const auto rec = cmd_rate(cfg);
        std::string slope, cmin;
        for (const auto& [k, v] : rec.constants) {
            if (k == "fit_slope") slope = v;
            if (k == "bound_c_min") cmin = v;
        }
        const auto& checks = rec.tables.at("checks");
        int passed = 0;
        for (const auto& r : checks.rows) passed += r[checks.column("status")] == "pass";
        ok = ok && rec.all_pass() && checks.rows.size() > 1;
        detail += std::string(domain) + ": checks=" + std::to_string(passed) + "/" +
                  std::to_string(checks.rows.size()) + " slope=" + num(std::stod(slope)) +
                  " c_min=" + num(std::stod(cmin)) + "; ";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return {ok && secs < 600, detail + "time=" + num(secs) + "s"};
}

// 10
Verdict subharmonic() {
    const CircleGrid grid(256);
    Rng rng(0x5b);
    std::vector<std::pair<DiscFunction, std::array<double, 3>>> cases;  // (ψ, {θ₀, β, c})
    for (int i = 0; i < 4; ++i) {
        // Re(a(z − 1)): harmonic, |ψ| ≤ |a||θ| on the circle.
        const cd a(rng.uniform(-1, 1), rng.uniform(-1, 1));
        const auto u = CircleFunction::from_function(grid, [&](double t) { return (a * (std::polar(1.0, t) - 1.0)).real(); });
        cases.push_back({DiscFunction::harmonic(u), {rng.uniform(0.3, 1.5), rng.uniform(0.3, 1.0), 2 * std::abs(a)}});
    }
    const auto custom = [&](std::function<double(cd)> f) {
        DiscFunction d{grid, {}, f};
        for (std::size_t j = 0; j < grid.size(); ++j) d.boundary.push_back(f(std::polar(1.0, grid.node(j))));
        return d;
    };
    for (int i = 0; i < 4; ++i) {
        // max of two harmonic functions vanishing at 1.
        const cd a(rng.uniform(-1, 1), rng.uniform(-1, 1)), b(rng.uniform(-1, 1), rng.uniform(-1, 1));
        const double c = 2 * std::max(std::abs(a), std::abs(b));
        cases.push_back({custom([a, b](cd z) { return std::max((a * (z - 1.0)).real(), (b * (z - 1.0)).real()); }),
                         {rng.uniform(0.3, 1.5), rng.uniform(0.3, 1.0), c}});
    }
    for (int i = 0; i < 4; ++i) {
        // s·log|(z + 1)/2| + Re(a(z − 1)): log modulus plus harmonic.
        const double s = rng.uniform(0.1, 2);
        const cd a(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5));
        cases.push_back({custom([s, a](cd z) { return s * std::log(std::abs((z + 1.0) / 2.0)) + (a * (z - 1.0)).real(); }),
                         {rng.uniform(0.3, 1.5), rng.uniform(0.3, 1.0), 2 * std::abs(a) + 1e-3}});
    }
    for (int i = 0; i < 4; ++i) {
        // λ|z − 1|²: Δ > 0, and |e^{iθ} − 1|² ≤ θ² ≤ π^{2−β}|θ|^β.
        const double lam = rng.uniform(0.1, 1), beta = rng.uniform(0.3, 1.0);
        cases.push_back({custom([lam](cd z) { return lam * std::norm(z - 1.0); }),
                         {rng.uniform(0.3, 1.5), beta, lam * std::max(4.0, std::pow(pi, 2 - beta))}});
    }
    for (int i = 0; i < 4; ++i) {
        // log(|z − 1|² + ε)/2 ≤ 0 near 1 and ≤ log(4 + ε)/2 ≤ 1 globally.
        const double eps = std::pow(10.0, rng.uniform(-4, -1));
        cases.push_back({custom([eps](cd z) { return 0.5 * std::log(std::norm(z - 1.0) + eps); }),
                         {rng.uniform(0.3, 1.5), rng.uniform(0.3, 1.0), 2.0}});
    }
    int passed = 0;
    double worst = -INFINITY, cmax = 0;
    std::string first_error;
    for (const auto& [psi, p] : cases) {
        try {
            const auto rep = subharmonic_compare(psi, p[0], p[1], p[2]);
            worst = std::max(worst, rep.max_violation);
            if (std::isfinite(rep.inferred_C)) cmax = std::max(cmax, rep.inferred_C);
            passed += rep.pass && rep.max_violation <= 1e-9 && std::isfinite(rep.inferred_C);
        } catch (const Error& e) {
            if (first_error.empty()) first_error = e.what();
        }
    }
    return {passed == 20 && cases.size() == 20,
            "functions=" + std::to_string(passed) + "/" + std::to_string(cases.size()) + " max_violation=" + num(worst) +
                " max_C=" + num(cmax) + (first_error.empty() ? "" : " first_error=\"" + first_error + "\"")};
}

// 11
Verdict extremal_function() {
    const double v2 = std::abs(extremal_interval(2.0) - std::log(2 + std::sqrt(3.0)));
    const double ratio = extremal_interval(1 + 1e-8) / std::sqrt(2e-8);
    double on_set = 0;
    for (int j = 0; j < 1000; ++j) on_set = std::max(on_set, std::abs(extremal_interval(-1 + 2.0 * j / 999)));
    return {v2 <= 1e-12 && std::abs(ratio - 1) <= 0.01 && on_set <= 1e-12,
            "value_err=" + num(v2) + " holder_ratio=" + num(ratio) + " max_on_interval=" + num(on_set)};
}

}  // namespace

int main() {
    int failed = 0;
    const auto report = [&](int id, const char* name, const std::function<Verdict()>& fn) {
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = fn();
        } catch (const std::exception& e) {
            v = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        failed += !v.pass;
        std::printf("%s %2d %s: %s [%.2fs]\n", v.pass ? "PASS" : "FAIL", id, name, v.detail.c_str(), secs);
        std::fflush(stdout);
    };
    report(1, "hilbert transform exactness", hilbert_exactness);
    report(2, "moment identities", moment_identities);
    double disc_secs = 0;
    RunRecord disc;
    report(3, "disc families", [&] {
        const auto t0 = std::chrono::steady_clock::now();
        disc = disc_run();
        disc_secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return family_contracts(disc, disc_secs);
    });
    report(4, "capture bounds", [&] { return capture_bounds(disc); });
    report(5, "bishop solver", bishop_solver);
    report(6, "phi^h comparison", phi_comparison);
    report(7, "singular control at t=0.02", singular_control);
    report(8, "fekete small cases", fekete_small_cases);
    report(9, "rate study", rate_study);
    report(10, "subharmonic comparison", subharmonic);
    report(11, "extremal function", extremal_function);
    std::printf("%d of 11 criteria passed\n", 11 - failed);
    return failed ? 1 : 0;
}
