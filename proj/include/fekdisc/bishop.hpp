#pragma once

#include <Eigen/Dense>

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "fekdisc/analytic_disc.hpp"
#include "fekdisc/circle.hpp"
#include "fekdisc/disc_families.hpp"
#include "fekdisc/rng.hpp"

namespace fekdisc {

// K_h = {(x, h(x))}: the graph of h over the closed ball of radius
// domain_radius in ℝⁿ, with h(0) = 0, Dh(0) = 0 and declared bound c₁.
struct GraphManifold {
    std::size_t n = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> h;
    double c1 = 0;
    std::string name;
    double domain_radius = 1.0;
};

// K_h = ℝⁿ, valid everywhere, so every operation reduces to the flat families.
GraphManifold h_zero(std::size_t n);
// q·(x₁², …, xₙ²)
GraphManifold h_quad(std::size_t n, double q);
// component j is q·x_j·x_{j+1 mod n}
GraphManifold h_mix(std::size_t n, double q);

struct ManifoldCheck {
    double value_ratio = 0;       // max |h(x)| / |x|²
    double derivative_ratio = 0;  // max |Dh(x)| / |x|, Dh by central differences
    bool ok = false;
};
// Spot-checks |h(x)| ≤ c₁|x|² and |Dh(x)| ≤ c₁|x| on random points of the ball.
ManifoldCheck check_manifold(const GraphManifold& K, Rng& rng, int samples = 200);

struct BishopOptions {
    double tolerance = 1e-12;
    int max_iterations = 500;
    bool zero_start = false;  // start from U⁰ = 0 instead of u_{𝐳,t}
};

struct BishopSolution {
    std::vector<CircleFunction> U;
    std::vector<CircleFunction> hU;       // h(U) on the circle; P is its harmonic extension
    std::vector<CircleFunction> forcing;  // u_{𝐳,t}, or u′_{𝐳,t,τ} in the singular case
    int iterations = 0;                   // iterations beyond the first
    std::vector<double> ratio_log;
    double fixed_point_residual = 0;
    bool singular = false;

    // exp(mean log ratio) over the positive recorded ratios; 0 if there are none.
    double geometric_mean_ratio() const;
    double sup_norm() const;
    double P(std::size_t comp, std::complex<double> z) const;
    void write_csv(std::ostream& os) const;
};

// U = t(Re𝐳 − Im𝐳) − 𝒯₁h(U) − 𝒯₁u_{𝐳,t} by Picard iteration.
BishopSolution solve_bishop(const DiscFamilies& fam, const GraphManifold& K, const FamilyParams& p,
                            const BishopOptions& opt = {});
// U′ = 2t(|𝐳|, …, |𝐳|) − 𝒯₁h(U′) − 𝒯₁u′_{𝐳,t,τ}.
BishopSolution solve_bishop_singular(const DiscFamilies& fam, const GraphManifold& K,
                                     const FamilyParams& p, const BishopOptions& opt = {});

// U + i(h(U) + u): holomorphic by construction and attached to K_h where u = 0.
AnalyticDisc assemble_Fh(const BishopSolution& sol);
// max over nodes of ∂⁺𝔻 of |Im F − h(Re F)|.
double attachment_residual(const AnalyticDisc& disc, const GraphManifold& K);

// Φ^h(𝐳) = F^h(1−|𝐳|+i|𝐳|, 𝐳, t).
Eigen::VectorXd phi_h(const DiscFamilies& fam, const GraphManifold& K, const Eigen::VectorXd& z, double t);

struct HCapture {
    Eigen::VectorXd z_star;
    double residual = 0;
    int iterations = 0;
    std::vector<double> ratios;
    double disc_point_gap = 0;  // |1 − z*|, or |1 − z*|² for the singular capture
    double disc_point_bound = 0;
};
HCapture phi_h_capture(const DiscFamilies& fam, const GraphManifold& K, const Eigen::VectorXd& target,
                       double t);

struct TauControl {
    Eigen::VectorXd tau;
    Eigen::VectorXd target_deriv;
    double residual = 0;          // max_j |∂θU′_j(1) − target_j|
    double second_deriv_gap = 0;  // max_j |∂²θU′_j(1) − 2t(2|𝐳| − Re z_j)/|𝐳||
    int newton_steps = 0;
};
TauControl solve_tau(const DiscFamilies& fam, const GraphManifold& K, const Eigen::VectorXd& z, double t);

struct WedgeReport {
    std::vector<double> component_min;
    double attachment_residual = 0;
    bool pass = false;
};
WedgeReport verify_wedge_attachment(const BishopSolution& sol, const GraphManifold& K, double theta);
// Largest node angle on which every component of U′ stays ≥ −1e−9.
double observed_wedge(const BishopSolution& sol);

// Φ′^h(𝐳) = F′^h_{τ(𝐳,t)}(1−√|𝐳|, 𝐳, t).
Eigen::VectorXd phi_h_prime(const DiscFamilies& fam, const GraphManifold& K, const Eigen::VectorXd& z,
                            double t);
HCapture phi_h_prime_capture(const DiscFamilies& fam, const GraphManifold& K,
                             const Eigen::VectorXd& target, double t);

// Working constants for one (K, n, grid), measured on sample sets.
struct BishopCalibration {
    double t1 = 0;       // largest t (bisection) with every sampled solve contracting
    double t1_singular = 0;  // the same for the singular equation at τ = 0
    double c2 = 0;       // max |Φ^h − Φ| / (t²|𝐳|) over the (t, |𝐳|) lattice
    double c3 = 0;       // max |τ| / t
    double c3_halves[2] = {0, 0};
    double c4 = 0;       // max |Φ′^h(𝐳) − t𝐳| / (|𝐳|(t² + t√|𝐳|))
    double theta_t = 0;  // uniform wedge at t_wedge
    double t_wedge = 0;
};

double calibrate_t1(const DiscFamilies& fam, const GraphManifold& K, bool singular = false);
// Lattice t ∈ [t_lo, t_hi] geometric, |𝐳| ∈ [0.05, 0.95], 10 × 10.
double calibrate_c2(const DiscFamilies& fam, const GraphManifold& K, double t_lo = 0.005, double t_hi = 0.05);
// Needs t_wedge below the singular threshold.
BishopCalibration calibrate_bishop(const DiscFamilies& fam, const GraphManifold& K, double t_wedge);

}  // namespace fekdisc
