#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "fekdisc/basis.hpp"

namespace fekdisc {

// φ with its declared Hölder data; an empty callable means φ ≡ 0.
struct Weight {
    std::function<double(const Point&)> phi;
    double alpha = 1.0;
    double constant = 0.0;
    std::string name = "zero";

    double operator()(const Point& p) const { return phi ? phi(p) : 0.0; }
};

struct PointConfiguration {
    std::vector<Point> points;
    std::vector<std::size_t> mesh_index;  // empty when the points are not mesh nodes
    double logdet = 0;
    Weight weight;
    int moves = 0;  // accepted exchanges

    void write_csv(std::ostream& os) const;
};

struct EmpiricalMeasure {
    std::vector<Point> points;
    std::vector<double> weights;

    double pair(const std::function<double(const Point&)>& v) const;
    double total_mass() const;
};

// log|det[s_i(p_j)]| − kΣφ(p_j) from a row-pivoted LU; −∞ when a pivot
// vanishes relative to the largest entry.
double log_vandermonde(const std::vector<Point>& pts, const BasisSpec& spec, const Weight& w = {});

// Greedy maximum-volume selection: repeatedly takes the mesh node whose
// weighted basis row has the largest residual after orthogonalizing against
// the rows already chosen (column-pivoted QR of the transposed matrix).
PointConfiguration leja_greedy(const BasisSpec& spec, const Weight& w, const std::vector<Point>& mesh);

// Single-point exchanges: for each slot, the mesh node maximizing the
// determinant ratio |v·A⁻¹e_i| replaces it when that ratio exceeds 1.
// Stops after `sweeps` passes or a pass without improvement.
PointConfiguration exchange_refine(const PointConfiguration& start, const BasisSpec& spec, const Weight& w,
                                   const std::vector<Point>& mesh, int sweeps = 10);

// Greedy start followed by exchange refinement on the domain's default mesh.
PointConfiguration fekete_search(const BasisSpec& spec, const Weight& w = {}, int sweeps = 10);

EmpiricalMeasure fekete_measure(const PointConfiguration& config);

}  // namespace fekdisc
