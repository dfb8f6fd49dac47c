#pragma once

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "fekdisc/analytic_disc.hpp"
#include "fekdisc/circle.hpp"

namespace fekdisc {

// Function on the closed disc: boundary samples on a CircleGrid (−∞ allowed)
// and an interior evaluator.
struct DiscFunction {
    CircleGrid grid;
    std::vector<double> boundary;
    std::function<double(std::complex<double>)> interior;

    static DiscFunction harmonic(const CircleFunction& u);
    static DiscFunction log_modulus(const AnalyticDisc& g, std::size_t comp = 0);
};

struct SubharmonicReport {
    double max_violation = 0;   // max over the interior grid of ψ − ψ₁
    double inferred_C = 0;      // max (ψ₁(z) − ψ₁(1))/|1−z|^β
    double observed_C = 0;      // max ψ(z)/|1−z|^β on the same grid
    std::size_t interior_points = 0;
    bool pass = false;
};

// Boundary data of the majorant: c|θ|^β on |θ| ≤ θ₀/2, the constant
// c·max(1, θ₀^β) on |θ| ≥ 3θ₀/4, joined by a C^∞ cutoff.
double majorant_boundary(double theta, double theta0, double beta, double c);
// Its Poisson integral at |z| < 1.
double majorant(std::complex<double> z, double theta0, double beta, double c);

// Checks ψ ≤ c|θ|^β on |θ| < θ₀ and ψ ≤ c on the grid (PreconditionError
// otherwise), then compares ψ with ψ₁ on a polar grid of radii up to 0.995.
SubharmonicReport subharmonic_compare(const DiscFunction& psi, double theta0, double beta, double c);

}  // namespace fekdisc
