#pragma once

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace fekdisc {

// Φ₀ = A· + g with g Lipschitz of constant lipschitz; the target must lie in
// the ball that the perturbed linear map is guaranteed to cover.
struct InverseProblem {
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> map;
    Eigen::MatrixXd A;
    double radius = 0.0;
    Eigen::VectorXd target;
    double lipschitz = 0.0;
};

struct InverseOptions {
    double tolerance = 1e-10;
    int max_iterations = 500;
};

struct InverseResult {
    Eigen::VectorXd z;
    double residual = 0.0;
    int iterations = 0;
    // |z_{k+1} − z_k| / |z_k − z_{k−1}| for each step past the first.
    std::vector<double> ratios;
    double max_iterate_norm = 0.0;
    // |A⁻¹|·lipschitz, the a priori contraction factor.
    double contraction_bound = 0.0;
};

// Iterates z ← A⁻¹(target − g(z)) from z = 0.
InverseResult solve_quantitative_inverse(const InverseProblem& prob, InverseOptions opts = {});

}  // namespace fekdisc
