#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fekdisc/basis.hpp"
#include "fekdisc/bishop.hpp"
#include "fekdisc/fekete.hpp"

namespace fekdisc {

// INI text with sections [run], [fekete], [disc], [bishop]; lists are comma
// separated.  Unknown sections or keys are rejected.
//
//   [run]     experiment = fekete|rate|disc|bishop, seed, out, threads
//   [fekete]  domain = interval|circle|sphere|arc:a:b|cap:x:y:z:angle,
//             k_min, k_max, mesh (0 = default), weight = zero|lin:a|quad:a,
//             sweeps, gamma
//   [disc]    m, n, t, samples
//   [bishop]  m, n, t, samples, h = zero|quad:q|mix:q, t_singular, calibrate
struct ExperimentConfig {
    std::string experiment = "fekete";
    std::uint64_t seed = 1;
    std::string out = "out";
    unsigned threads = 1;

    std::string domain = "interval";
    int k_min = 2;
    int k_max = 10;
    std::size_t mesh = 0;
    std::string weight = "zero";
    int sweeps = 10;
    std::vector<double> gamma{1.0};

    std::size_t disc_m = 1024;
    std::vector<int> disc_n{1, 2};
    std::vector<double> disc_t{0.02, 0.05, 0.1};
    int disc_samples = 10;

    std::size_t bishop_m = 1024;
    std::vector<int> bishop_n{1, 2};
    std::vector<double> bishop_t{0.05};
    int bishop_samples = 10;
    std::string h = "quad:0.5";
    double t_singular = 0.001;  // τ-control rows run here
    bool calibrate = false;

    std::vector<int> ks() const;
    // Sorted key=value lines of every field that can change results (out and
    // threads excluded).
    std::string canonical() const;
    // FNV-1a 64 of canonical(), as 16 hex digits.
    std::string hash() const;
    // Throws InputError on an empty k range or an unresolvable spec.
    void validate() const;
};

ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

Domain parse_domain(const std::string& spec);
Weight parse_weight(const std::string& spec);
GraphManifold parse_manifold(const std::string& spec, std::size_t n);

std::uint64_t fnv1a64(const std::string& s);

}  // namespace fekdisc
