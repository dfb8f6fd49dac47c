#include "fekdisc/inverse.hpp"

#include <string>

#include "fekdisc/error.hpp"

namespace fekdisc {

InverseResult solve_quantitative_inverse(const InverseProblem& prob, InverseOptions opts) {
    const Eigen::Index m = prob.A.rows();
    if (prob.A.cols() != m || prob.target.size() != m)
        throw InputError("inverse problem dimensions do not agree");
    if (!prob.map) throw InputError("inverse problem has no map");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(prob.A);
    const double smin = svd.singularValues()(m - 1);
    if (!(smin > 0.0)) throw PreconditionError("inverse problem: A is singular");
    const double inv_norm = 1.0 / smin;
    const double kappa = inv_norm * prob.lipschitz;
    if (!(kappa < 1.0))
        throw PreconditionError("inverse problem: |A^-1| * Lip(g) = " + std::to_string(kappa) + " >= 1");
    const double reach = (1.0 - kappa) / inv_norm * prob.radius;
    if (!(prob.target.norm() < reach))
        throw PreconditionError("inverse problem: target outside the covered ball");

    const auto lu = prob.A.partialPivLu();
    InverseResult res;
    res.contraction_bound = kappa;
    Eigen::VectorXd z = Eigen::VectorXd::Zero(m);
    double prev_step = -1.0;
    for (int it = 0; it <= opts.max_iterations; ++it) {
        const Eigen::VectorXd phi = prob.map(z);
        const Eigen::VectorXd defect = prob.target - phi;
        res.residual = defect.norm();
        res.iterations = it;
        if (res.residual <= opts.tolerance) {
            res.z = z;
            return res;
        }
        const Eigen::VectorXd step = lu.solve(defect);
        const double s = step.norm();
        if (prev_step > 0.0 && s > 1e-14 * (1.0 + z.norm())) {
            const double ratio = s / prev_step;
            res.ratios.push_back(ratio);
            // A genuine contraction gives ratio ≤ |A⁻¹|·Lip(g) < 1 at every step.
            if (ratio >= 1.0)
                throw ContractionError("inverse problem: observed contraction ratio " +
                                       std::to_string(ratio) + " >= 1");
        }
        prev_step = s;
        z += step;
        res.max_iterate_norm = std::max(res.max_iterate_norm, z.norm());
        if (z.norm() >= prob.radius)
            throw ContractionError("inverse problem: iterate left the ball of radius " +
                                   std::to_string(prob.radius));
    }
    throw ConvergenceError("inverse problem: no convergence in " +
                           std::to_string(opts.max_iterations) + " iterations (residual " +
                           std::to_string(res.residual) + ")");
}

}  // namespace fekdisc
