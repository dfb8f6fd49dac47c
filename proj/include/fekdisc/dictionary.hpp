#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fekdisc/measures.hpp"

namespace fekdisc {

// A test function already divided by an upper bound of its C^γ norm, with its
// pairing against the domain's reference measure in closed form.
struct DictMember {
    std::function<double(const Point&)> v;
    double reference = 0;
    double norm_bound = 1;  // the divisor applied
    std::string label;
};

// C^γ norms: sup|v| + [v]_γ for γ ≤ 1, sup|v| + sup|v′| + [v′]_{γ−1} for
// 1 < γ ≤ 2, distances geodesic on the circle and sphere.  Each divisor is
// the supremum of the member's analytic bound over exponents in (0, γ], so
// dictionaries shrink as γ grows and the dictionary distance is
// nonincreasing in γ.
struct TestDictionary {
    DomainKind domain = DomainKind::Interval;
    double gamma = 1;
    std::vector<DictMember> members;
};

// Interval/circle: hats (γ ≤ 1) and cosine profiles, γ ∈ (0, 2].  Sphere:
// geodesic cones at 200 Fibonacci centres and real harmonics 1 ≤ ℓ ≤ 6,
// γ ∈ (0, 1].
TestDictionary make_dictionary(DomainKind domain, double gamma);

// max over members of |⟨μ − ν, v⟩|: a lower bound of dist_γ.
double dist_gamma_dict(const EmpiricalMeasure& mu, const ReferenceMeasure& nu, const TestDictionary& dict);
double dist_gamma_dict(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, const TestDictionary& dict);

}  // namespace fekdisc
