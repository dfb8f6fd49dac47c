#include "fekdisc/analytic_disc.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "fekdisc/error.hpp"
#include "fekdisc/kahan.hpp"
#include "fft.hpp"

namespace fekdisc {

AnalyticDisc::AnalyticDisc(CircleGrid grid, std::vector<ComplexTrace> traces)
    : grid_(grid), traces_(std::move(traces)) {
    if (traces_.empty()) throw InputError("analytic disc needs at least one component");
    const std::size_t m = grid_.size();
    const std::size_t h = m / 2;
    coeffs_.reserve(traces_.size());
    neg_ratio_.reserve(traces_.size());
    ComplexTrace x(m);
    for (const auto& tr : traces_) {
        if (tr.size() != m) throw InputError("trace length does not match grid size");
        detail::fft_c2c_forward(tr, x);
        ComplexTrace c(h + 1);
        const double inv = 1.0 / static_cast<double>(m);
        double total = 0.0, neg = 0.0;
        for (std::size_t k = 0; k < m; ++k) {
            const double e = std::norm(x[k]);
            total += e;
            if (k > h) neg += e;
        }
        for (std::size_t k = 0; k <= h; ++k) c[k] = (k % 2 == 0 ? 1.0 : -1.0) * x[k] * inv;
        coeffs_.push_back(std::move(c));
        neg_ratio_.push_back(total > 0.0 ? neg / total : 0.0);
    }
}

std::complex<double> AnalyticDisc::eval(std::size_t comp, std::complex<double> z) const {
    if (std::abs(z) > 1.0 + 1e-12) throw DomainError("analytic disc evaluated outside the closed disc");
    if (z == std::complex<double>(1.0, 0.0)) return traces_.at(comp)[grid_.index_of_one()];
    const auto& c = coeffs_.at(comp);
    CompensatedComplexSum acc;
    acc.add(c[0]);
    std::complex<double> p = 1.0;
    for (std::size_t k = 1; k < c.size(); ++k) {
        p *= z;
        acc.add(c[k] * p);
    }
    return acc.value();
}

std::vector<std::complex<double>> AnalyticDisc::eval(std::complex<double> z) const {
    std::vector<std::complex<double>> out(dim());
    for (std::size_t j = 0; j < dim(); ++j) out[j] = eval(j, z);
    return out;
}

double AnalyticDisc::holomorphy_residual() const {
    return *std::max_element(neg_ratio_.begin(), neg_ratio_.end());
}

CircleFunction AnalyticDisc::real_part(std::size_t comp) const {
    const auto& tr = traces_.at(comp);
    std::vector<double> s(tr.size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = tr[j].real();
    return CircleFunction(grid_, std::move(s));
}

CircleFunction AnalyticDisc::imag_part(std::size_t comp) const {
    const auto& tr = traces_.at(comp);
    std::vector<double> s(tr.size());
    for (std::size_t j = 0; j < s.size(); ++j) s[j] = tr[j].imag();
    return CircleFunction(grid_, std::move(s));
}

double AnalyticDisc::ck_norm(int k) const {
    double m = 0.0;
    for (std::size_t j = 0; j < dim(); ++j) {
        m = std::max(m, fekdisc::ck_norm(real_part(j), k));
        m = std::max(m, fekdisc::ck_norm(imag_part(j), k));
    }
    return m;
}

void AnalyticDisc::write_csv(std::ostream& os) const {
    os << "theta";
    for (std::size_t j = 1; j <= dim(); ++j) os << ",re_" << j << ",im_" << j;
    os << '\n' << std::setprecision(17);
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        os << grid_.node(i);
        for (const auto& tr : traces_) os << ',' << tr[i].real() << ',' << tr[i].imag();
        os << '\n';
    }
}

ComplexTrace conjugate_trace(const CircleFunction& u, double real_shift) {
    const CircleFunction v = hilbert_T1(u);
    ComplexTrace tr(u.size());
    for (std::size_t j = 0; j < tr.size(); ++j) tr[j] = {real_shift - v[j], u[j]};
    return tr;
}

AnalyticDisc conjugate_disc(const CircleFunction& u) {
    return AnalyticDisc(u.grid(), {conjugate_trace(u)});
}

}  // namespace fekdisc
