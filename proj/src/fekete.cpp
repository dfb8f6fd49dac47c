#include "fekdisc/fekete.hpp"

#include <cmath>
#include <iomanip>
#include <limits>

#include "fekdisc/error.hpp"

namespace fekdisc {
namespace {

// Basis rows scaled by e^{−kφ}; rejects non-finite weights.
Eigen::MatrixXd weighted_matrix(const BasisSpec& spec, const Weight& w, const std::vector<Point>& pts) {
    Eigen::MatrixXd V = basis_matrix(spec, pts);
    if (!w.phi) return V;
    for (std::size_t j = 0; j < pts.size(); ++j) {
        const double f = w(pts[j]);
        if (!std::isfinite(f)) throw InputError("weight is not finite on the mesh");
        V.row(static_cast<Eigen::Index>(j)) *= std::exp(-spec.k * f);
    }
    return V;
}

}  // namespace

void PointConfiguration::write_csv(std::ostream& os) const {
    os << "index,x,y,z,weight\n" << std::setprecision(17);
    for (std::size_t j = 0; j < points.size(); ++j)
        os << j << ',' << points[j][0] << ',' << points[j][1] << ',' << points[j][2] << ',' << weight(points[j])
           << '\n';
}

double EmpiricalMeasure::pair(const std::function<double(const Point&)>& v) const {
    double s = 0.0;
    for (std::size_t j = 0; j < points.size(); ++j) s += weights[j] * v(points[j]);
    return s;
}

double EmpiricalMeasure::total_mass() const {
    double s = 0.0;
    for (double w : weights) s += w;
    return s;
}

double log_vandermonde(const std::vector<Point>& pts, const BasisSpec& spec, const Weight& w) {
    if (pts.size() != spec.dim) throw InputError("configuration size does not match the basis dimension");
    const Eigen::MatrixXd V = basis_matrix(spec, pts);
    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(V);
    const Eigen::MatrixXd& U = lu.matrixLU();
    const double scale = V.cwiseAbs().maxCoeff();
    double s = 0.0;
    for (Eigen::Index i = 0; i < U.rows(); ++i) {
        const double p = std::abs(U(i, i));
        if (!(p > 1e-14 * scale)) return -std::numeric_limits<double>::infinity();
        s += std::log(p);
    }
    for (const auto& p : pts) s -= spec.k * w(p);
    return s;
}

PointConfiguration leja_greedy(const BasisSpec& spec, const Weight& w, const std::vector<Point>& mesh) {
    const std::size_t n = spec.dim;
    if (mesh.size() < 5 * n) throw PreconditionError("mesh must have at least 5 N_k nodes");
    const Eigen::MatrixXd W = weighted_matrix(spec, w, mesh);
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(W.transpose());
    const Eigen::MatrixXd& R = qr.matrixQR();
    const auto ni = static_cast<Eigen::Index>(n);
    for (Eigen::Index i = 0; i < ni; ++i)
        if (!(std::abs(R(i, i)) > 1e-12 * std::abs(R(0, 0))))
            throw PreconditionError("insufficient mesh: rank below N_k");
    PointConfiguration c;
    c.weight = w;
    const auto& perm = qr.colsPermutation().indices();
    for (Eigen::Index i = 0; i < ni; ++i) {
        const auto idx = static_cast<std::size_t>(perm(i));
        c.mesh_index.push_back(idx);
        c.points.push_back(mesh[idx]);
    }
    c.logdet = log_vandermonde(c.points, spec, w);
    return c;
}

PointConfiguration exchange_refine(const PointConfiguration& start, const BasisSpec& spec, const Weight& w,
                                   const std::vector<Point>& mesh, int sweeps) {
    const std::size_t n = spec.dim;
    if (start.points.size() != n) throw InputError("configuration size does not match the basis dimension");
    const Eigen::MatrixXd W = weighted_matrix(spec, w, mesh);
    PointConfiguration c = start;
    c.weight = w;
    Eigen::MatrixXd A = weighted_matrix(spec, w, c.points);
    if (c.mesh_index.size() != n) c.mesh_index.assign(n, std::numeric_limits<std::size_t>::max());
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::MatrixXd Ainv = lu.inverse();
    for (int sweep = 0; sweep < sweeps; ++sweep) {
        bool improved = false;
        for (std::size_t i = 0; i < n; ++i) {
            const Eigen::VectorXd score = W * Ainv.col(static_cast<Eigen::Index>(i));
            Eigen::Index best = 0;
            double best_val = -1.0;
            for (Eigen::Index j = 0; j < score.size(); ++j)
                if (std::abs(score(j)) > best_val) {
                    best_val = std::abs(score(j));
                    best = j;
                }
            if (!(best_val > 1.0 + 1e-12)) continue;
            const auto bi = static_cast<std::size_t>(best);
            const auto ii = static_cast<Eigen::Index>(i);
            // Row replacement is rank one; the pivot (v − a_i)·A⁻¹e_i + 1 is the score itself.
            const Eigen::RowVectorXd du = W.row(best) - A.row(ii);
            A.row(ii) = W.row(best);
            c.points[i] = mesh[bi];
            c.mesh_index[i] = bi;
            ++c.moves;
            if (c.moves % 32 == 0) {
                lu.compute(A);
                Ainv = lu.inverse();
            } else {
                const Eigen::VectorXd col = Ainv.col(ii);
                const Eigen::RowVectorXd rowv = du * Ainv;
                Ainv.noalias() -= col * rowv / score(best);
            }
            improved = true;
        }
        if (!improved) break;
    }
    c.logdet = log_vandermonde(c.points, spec, w);
    return c;
}

PointConfiguration fekete_search(const BasisSpec& spec, const Weight& w, int sweeps) {
    const auto mesh = spec.domain.mesh();
    return exchange_refine(leja_greedy(spec, w, mesh), spec, w, mesh, sweeps);
}

EmpiricalMeasure fekete_measure(const PointConfiguration& config) {
    const std::size_t n = config.points.size();
    if (n == 0) throw InputError("empty configuration");
    return {config.points, std::vector<double>(n, 1.0 / static_cast<double>(n))};
}

}  // namespace fekdisc
