#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fekdisc {

// Equispaced nodes θ_j = 2πj/M − π on the unit circle.  θ = 0 (the point
// ξ = 1) is node M/2.
class CircleGrid {
public:
    explicit CircleGrid(std::size_t m = 1024);

    std::size_t size() const { return m_; }
    double step() const;
    double node(std::size_t j) const;
    std::size_t index_of_one() const { return m_ / 2; }

    bool operator==(const CircleGrid&) const = default;

private:
    std::size_t m_;
};

// Real function on the circle, stored as samples together with its
// trigonometric coefficients
//   u(θ) = a_0 + Σ_{1≤k<M/2} (a_k cos kθ + b_k sin kθ) + a_{M/2} cos(Mθ/2).
// Both arrays have length M/2+1; b_0 and b_{M/2} are always zero.
class CircleFunction {
public:
    // Analysis of samples at the grid nodes.
    CircleFunction(CircleGrid grid, std::vector<double> samples);

    static CircleFunction zero(CircleGrid grid);
    static CircleFunction from_coefficients(CircleGrid grid, std::vector<double> a,
                                            std::vector<double> b);
    template <class F>
    static CircleFunction from_function(CircleGrid grid, F&& f) {
        std::vector<double> s(grid.size());
        for (std::size_t j = 0; j < s.size(); ++j) s[j] = f(grid.node(j));
        return CircleFunction(grid, std::move(s));
    }

    const CircleGrid& grid() const { return grid_; }
    std::size_t size() const { return samples_.size(); }
    std::span<const double> samples() const { return samples_; }
    std::span<const double> cos_coeffs() const { return a_; }
    std::span<const double> sin_coeffs() const { return b_; }
    double operator[](std::size_t j) const { return samples_[j]; }
    double at_one() const { return samples_[grid_.index_of_one()]; }

    // Trigonometric interpolant at an arbitrary angle.
    double evaluate(double theta) const;
    // Spectral θ-derivative of the given order (Nyquist mode dropped).
    CircleFunction derivative(int order = 1) const;
    double sup_norm() const;

    CircleFunction& operator+=(const CircleFunction& o);
    CircleFunction& operator-=(const CircleFunction& o);
    CircleFunction& operator*=(double s);
    friend CircleFunction operator+(CircleFunction l, const CircleFunction& r) { return l += r; }
    friend CircleFunction operator-(CircleFunction l, const CircleFunction& r) { return l -= r; }
    friend CircleFunction operator*(double s, CircleFunction u) { return u *= s; }
    friend CircleFunction operator*(CircleFunction u, double s) { return u *= s; }

private:
    struct Raw {};
    CircleFunction(Raw, CircleGrid grid, std::vector<double> samples, std::vector<double> a,
                   std::vector<double> b);

    friend CircleFunction hilbert_T(const CircleFunction&);
    friend CircleFunction hilbert_T1(const CircleFunction&);

    CircleGrid grid_;
    std::vector<double> samples_;
    std::vector<double> a_;
    std::vector<double> b_;
};

CircleFunction analyze(const CircleGrid& grid, std::vector<double> samples);

// Harmonic extension into the disc via the coefficient series.
double harmonic_extend(const CircleFunction& u, std::complex<double> z);

// Conjugate function with zero mean: Σ (a_k sin kθ − b_k cos kθ).
CircleFunction hilbert_T(const CircleFunction& u);
// hilbert_T(u) shifted to vanish at θ = 0; the sample there is exactly zero.
CircleFunction hilbert_T1(const CircleFunction& u);

struct DerivsAtOne {
    double dx = 0, dy = 0, dxx = 0, dyy = 0, dxy = 0, dtheta = 0, dtheta2 = 0;
};

// Derivatives at ξ = 1 of the harmonic extension, from the series.
DerivsAtOne derivs_at_one(const CircleFunction& u);

// ρ_1(θ) = 1/(2π(cos θ − 1)),  ρ_2(θ) = −sin θ/(2π(cos θ − 1)²).
double rho_kernel(int which, double theta);

// ∫ u ρ_which dθ; u must vanish on |θ| ≤ π/2.
double moment_rho(const CircleFunction& u, int which);

struct HolderSpec {
    int k = 0;
    double beta = 0.5;
};

// Σ_{j≤k} sup over nodes of |∂_θ^j u|.
double ck_norm(const CircleFunction& u, int k);
// Grid lower bound of the C^{k,β} norm: ck_norm plus the β-Hölder seminorm of
// ∂_θ^k u over node pairs at chordal distance ≤ π/4 and over coarse offset
// buckets (multiples of 2π/64) out to the antipode.  Nested grids give
// nondecreasing values.
double holder_norm(const CircleFunction& u, HolderSpec spec);

// exp(−1/(1−s²)) with s = (θ − center)/halfwidth taken mod 2π; zero for |s| ≥ 1.
CircleFunction bump(const CircleGrid& grid, double center, double halfwidth);

// Bump supported in |θ| > π/2 with ∫ u ρ_1 = −1.
CircleFunction bump_u_minus(const CircleGrid& grid);

struct DualBasis {
    CircleFunction u1;
    CircleFunction u2;
    double gram_condition;
};

// Pair vanishing on |θ| ≤ π/2 with [∫ u_i ρ_j dθ] = identity.
DualBasis dual_basis(const CircleGrid& grid);

}  // namespace fekdisc
