#pragma once

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <vector>

#include "fekdisc/analytic_disc.hpp"
#include "fekdisc/circle.hpp"
#include "fekdisc/inverse.hpp"
#include "fekdisc/rng.hpp"

namespace fekdisc {

// Family parameter 𝐳 ∈ ℂⁿ stored as the real 2n-vector (Re 𝐳, Im 𝐳).
struct FamilyParams {
    Eigen::VectorXd z;
    double t = 0.0;
    std::optional<Eigen::VectorXd> tau;

    std::size_t n() const { return static_cast<std::size_t>(z.size() / 2); }
    Eigen::VectorXd re() const { return z.head(z.size() / 2); }
    Eigen::VectorXd im() const { return z.tail(z.size() / 2); }
    std::complex<double> component(std::size_t j) const {
        return {z(static_cast<Eigen::Index>(j)), z(static_cast<Eigen::Index>(n() + j))};
    }
};

Eigen::VectorXd stack_complex(const std::vector<std::complex<double>>& v);

// Quadratic part γ + bθ + cθ² of the real trace of the (z̃,δ,γ) disc near ξ = 1
// and its reduced discriminant (b/2)² − γc.
struct QuadraticMinorant {
    double constant = 0, linear = 0, quadratic = 0, discriminant = 0;
    double operator()(double theta) const {
        return constant + linear * theta + quadratic * theta * theta;
    }
};
QuadraticMinorant quadratic_minorant(std::complex<double> zt, double delta, double gamma);

// Constants that the proofs only assert to exist, measured on sample sets.
struct FamilyCalibration {
    double r0 = 0;          // capture radius for F
    double r0_prime = 0;    // capture radius for F′
    double theta0 = 0;      // uniform attachment wedge of F′
    double c0 = 0;          // max ‖F(·,𝐳,1)‖₃ (C³ grid surrogate)
    double c0_dz = 0;       // max ‖D_𝐳F(·,𝐳,1)‖₂·|𝐳|
    double lip_g = 0;       // measured Lip(g)/t on B(0, 2r0)
    double lip_g_prime = 0; // measured Lip(g′)/t on B(0, 2r′0)
};

struct CaptureResult {
    Eigen::VectorXd z_star;
    double residual = 0;
    int iterations = 0;
    std::vector<double> ratios;
};

// The explicit disc families F, F′ and F′_τ on a fixed grid and dimension n.
// Construction builds the bump and dual basis and runs the calibration.
class DiscFamilies {
public:
    explicit DiscFamilies(std::size_t n, CircleGrid grid = CircleGrid(1024));

    std::size_t n() const { return n_; }
    const CircleGrid& grid() const { return grid_; }
    const CircleFunction& bump() const { return u_; }
    const DualBasis& dual() const { return dual_; }
    const FamilyCalibration& calibration() const { return cal_; }

    // u_{𝐳,t}: component j is t·u·Im z_j/|𝐳|.
    std::vector<CircleFunction> build_u_zt(const FamilyParams& p) const;
    AnalyticDisc family_F(const FamilyParams& p) const;

    CircleFunction build_u_delta_gamma(std::complex<double> zt, double delta, double gamma) const;
    // u′_{𝐳,t,τ}: component j is t·u_{z_j, √|𝐳|, 2|𝐳|} + tτ_j·10u₁ (τ = 0 if absent).
    std::vector<CircleFunction> build_u_prime(const FamilyParams& p) const;
    AnalyticDisc family_Fprime(const FamilyParams& p) const;
    AnalyticDisc family_Fprime_tau(const FamilyParams& p) const;

    // Capture maps Φ(𝐳) = F(1−|𝐳|+i|𝐳|, 𝐳, t) and Φ′(𝐳) = F′(1−√|𝐳|, 𝐳, t),
    // stacked as real 2n-vectors; both extend continuously by 0 at 𝐳 = 0.
    Eigen::VectorXd phi(const Eigen::VectorXd& z, double t) const;
    Eigen::VectorXd phi_prime(const Eigen::VectorXd& z, double t) const;

    CaptureResult capture_F(const Eigen::VectorXd& target, double t) const;
    CaptureResult capture_Fprime(const Eigen::VectorXd& target, double t) const;

    // Largest node angle θ_w with every component of Re F′(·,𝐳,1) ≥ 0 on
    // |θ| ≤ θ_w.
    double fprime_wedge(const Eigen::VectorXd& z) const;

    // Radius bound for F′ parameters.
    double fprime_radius() const { return 0.5 / static_cast<double>(n_); }

private:
    void check_F(const FamilyParams& p) const;
    void check_Fprime(const FamilyParams& p) const;
    FamilyCalibration calibrate() const;

    std::size_t n_;
    CircleGrid grid_;
    CircleFunction u_;
    CircleFunction t1u_;
    DualBasis dual_;
    CircleFunction t1u1_;
    CircleFunction t1u2_;
    FamilyCalibration cal_;
};

// Points drawn uniformly from the punctured ball of radius r in ℝ^m.
Eigen::VectorXd random_in_ball(Rng& rng, Eigen::Index m, double r);

}  // namespace fekdisc
