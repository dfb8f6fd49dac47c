#pragma once

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

#include "fekdisc/circle.hpp"

namespace fekdisc {

using ComplexTrace = std::vector<std::complex<double>>;

// n-tuple of boundary traces on a CircleGrid.  Each component keeps the
// nonnegative-frequency coefficients c_0..c_{M/2} of its trace, so interior
// values are f(z) = Σ c_k z^k.  Energy found at negative frequencies is kept as
// a holomorphy certificate rather than discarded silently.
class AnalyticDisc {
public:
    AnalyticDisc(CircleGrid grid, std::vector<ComplexTrace> traces);

    const CircleGrid& grid() const { return grid_; }
    std::size_t dim() const { return traces_.size(); }
    const ComplexTrace& trace(std::size_t comp) const { return traces_.at(comp); }
    std::span<const std::complex<double>> coefficients(std::size_t comp) const {
        return coeffs_.at(comp);
    }

    // Interior value of one component for |z| ≤ 1.  At z = 1 the stored node
    // sample is returned, so closed forms at ξ = 1 are reproduced exactly.
    std::complex<double> eval(std::size_t comp, std::complex<double> z) const;
    std::vector<std::complex<double>> eval(std::complex<double> z) const;

    // Negative-frequency energy over total energy, per component and the max.
    double holomorphy_residual(std::size_t comp) const { return neg_ratio_.at(comp); }
    double holomorphy_residual() const;

    // Real and imaginary parts of a component as circle functions.
    CircleFunction real_part(std::size_t comp) const;
    CircleFunction imag_part(std::size_t comp) const;

    // Sum over j ≤ k of sup |∂_θ^j|, maximized over components and Re/Im.
    double ck_norm(int k) const;

    // CSV rows "theta,re_1,im_1,...,re_n,im_n" with a header line.
    void write_csv(std::ostream& os) const;

private:
    CircleGrid grid_;
    std::vector<ComplexTrace> traces_;
    std::vector<ComplexTrace> coeffs_;
    std::vector<double> neg_ratio_;
};

// One-dimensional disc with boundary trace −𝒯₁u + iu.
AnalyticDisc conjugate_disc(const CircleFunction& u);

// Trace −𝒯₁u + iu + c for each component, assembled without FFT round trips.
ComplexTrace conjugate_trace(const CircleFunction& u, double real_shift = 0.0);

}  // namespace fekdisc
