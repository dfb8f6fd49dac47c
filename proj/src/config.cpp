#include "fekdisc/config.hpp"

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fekdisc/error.hpp"

namespace fekdisc {
namespace {

namespace pt = boost::property_tree;

std::vector<std::string> split(const std::string& s, const char* sep) {
    std::vector<std::string> parts;
    boost::split(parts, s, boost::is_any_of(sep));
    for (auto& p : parts) boost::trim(p);
    return parts;
}

double to_double(const std::string& s, const std::string& what) {
    double v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw InputError("bad number '" + s + "' for " + what);
    return v;
}

template <class T>
T to_int(const std::string& s, const std::string& what) {
    T v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size()) throw InputError("bad integer '" + s + "' for " + what);
    return v;
}

std::string fmt(double v) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

template <class T>
std::string join(const std::vector<T>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ",";
        if constexpr (std::is_floating_point_v<T>)
            s += fmt(v[i]);
        else
            s += std::to_string(v[i]);
    }
    return s;
}

const std::map<std::string, std::set<std::string>> kKeys = {
    {"run", {"experiment", "seed", "out", "threads"}},
    {"fekete", {"domain", "k_min", "k_max", "mesh", "weight", "sweeps", "gamma"}},
    {"disc", {"m", "n", "t", "samples"}},
    {"bishop", {"m", "n", "t", "samples", "h", "t_singular", "calibrate"}},
};

}  // namespace

std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<int> ExperimentConfig::ks() const {
    std::vector<int> out;
    for (int k = k_min; k <= k_max; ++k) out.push_back(k);
    return out;
}

std::string ExperimentConfig::canonical() const {
    std::map<std::string, std::string> kv{
        {"run.experiment", experiment},
        {"run.seed", std::to_string(seed)},
        {"fekete.domain", domain},
        {"fekete.k_min", std::to_string(k_min)},
        {"fekete.k_max", std::to_string(k_max)},
        {"fekete.mesh", std::to_string(mesh)},
        {"fekete.weight", weight},
        {"fekete.sweeps", std::to_string(sweeps)},
        {"fekete.gamma", join(gamma)},
        {"disc.m", std::to_string(disc_m)},
        {"disc.n", join(disc_n)},
        {"disc.t", join(disc_t)},
        {"disc.samples", std::to_string(disc_samples)},
        {"bishop.m", std::to_string(bishop_m)},
        {"bishop.n", join(bishop_n)},
        {"bishop.t", join(bishop_t)},
        {"bishop.samples", std::to_string(bishop_samples)},
        {"bishop.h", h},
        {"bishop.t_singular", fmt(t_singular)},
        {"bishop.calibrate", calibrate ? "true" : "false"},
    };
    std::string s;
    for (const auto& [k, v] : kv) s += k + "=" + v + "\n";
    return s;
}

std::string ExperimentConfig::hash() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(canonical())));
    return buf;
}

void ExperimentConfig::validate() const {
    static const std::set<std::string> experiments{"fekete", "rate", "disc", "bishop"};
    if (!experiments.count(experiment)) throw InputError("unknown experiment '" + experiment + "'");
    if (k_min < 0 || k_max < k_min) throw InputError("empty k range");
    if (sweeps < 0) throw InputError("sweeps must be nonnegative");
    if (threads == 0) throw InputError("threads must be positive");
    const Domain d = parse_domain(domain);
    parse_weight(weight);
    if (gamma.empty()) throw InputError("gamma list is empty");
    for (double g : gamma) {
        const bool sphere = d.ambient() == DomainKind::Sphere;
        if (!(g > 0 && g <= (sphere ? 1.0 : 2.0)))
            throw InputError("gamma " + fmt(g) + " outside the certified dictionary range");
    }
    for (const auto* ns : {&disc_n, &bishop_n})
        for (int n : *ns)
            if (n < 1) throw InputError("dimension n must be positive");
    for (const auto* ts : {&disc_t, &bishop_t})
        for (double t : *ts)
            if (!(t > 0 && t <= 1)) throw InputError("t must lie in (0, 1]");
    if (!(t_singular > 0 && t_singular <= 1)) throw InputError("t must lie in (0, 1]");
    if (disc_samples < 0 || bishop_samples < 0) throw InputError("samples must be nonnegative");
    for (std::size_t m : {disc_m, bishop_m})
        if (m < 16 || m % 2) throw InputError("grid size m must be even and at least 16");
    parse_manifold(h, 1);
}

ExperimentConfig parse_config(const std::string& text) {
    pt::ptree tree;
    std::istringstream is(text);
    try {
        pt::read_ini(is, tree);
    } catch (const pt::ini_parser_error& e) {
        throw InputError(std::string("config: ") + e.what());
    }
    ExperimentConfig c;
    for (const auto& [sec, body] : tree) {
        const auto it = kKeys.find(sec);
        if (it == kKeys.end()) throw InputError("config: unknown section [" + sec + "]");
        for (const auto& [key, val] : body) {
            if (!it->second.count(key)) throw InputError("config: unknown key " + key + " in [" + sec + "]");
            const std::string v = boost::trim_copy(val.data());
            const std::string what = sec + "." + key;
            const auto doubles = [&] {
                std::vector<double> out;
                for (const auto& p : split(v, ",")) out.push_back(to_double(p, what));
                return out;
            };
            const auto ints = [&] {
                std::vector<int> out;
                for (const auto& p : split(v, ",")) out.push_back(to_int<int>(p, what));
                return out;
            };
            if (what == "run.experiment") c.experiment = v;
            else if (what == "run.seed") c.seed = to_int<std::uint64_t>(v, what);
            else if (what == "run.out") c.out = v;
            else if (what == "run.threads") c.threads = to_int<unsigned>(v, what);
            else if (what == "fekete.domain") c.domain = v;
            else if (what == "fekete.k_min") c.k_min = to_int<int>(v, what);
            else if (what == "fekete.k_max") c.k_max = to_int<int>(v, what);
            else if (what == "fekete.mesh") c.mesh = to_int<std::size_t>(v, what);
            else if (what == "fekete.weight") c.weight = v;
            else if (what == "fekete.sweeps") c.sweeps = to_int<int>(v, what);
            else if (what == "fekete.gamma") c.gamma = doubles();
            else if (what == "disc.m") c.disc_m = to_int<std::size_t>(v, what);
            else if (what == "disc.n") c.disc_n = ints();
            else if (what == "disc.t") c.disc_t = doubles();
            else if (what == "disc.samples") c.disc_samples = to_int<int>(v, what);
            else if (what == "bishop.m") c.bishop_m = to_int<std::size_t>(v, what);
            else if (what == "bishop.n") c.bishop_n = ints();
            else if (what == "bishop.t") c.bishop_t = doubles();
            else if (what == "bishop.samples") c.bishop_samples = to_int<int>(v, what);
            else if (what == "bishop.h") c.h = v;
            else if (what == "bishop.t_singular") c.t_singular = to_double(v, what);
            else if (what == "bishop.calibrate") {
                if (v != "true" && v != "false") throw InputError("bishop.calibrate must be true or false");
                c.calibrate = v == "true";
            }
        }
    }
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

Domain parse_domain(const std::string& spec) {
    const auto p = split(spec, ":");
    if (p[0] == "interval" && p.size() == 1) return Domain::interval();
    if (p[0] == "circle" && p.size() == 1) return Domain::circle();
    if (p[0] == "sphere" && p.size() == 1) return Domain::sphere();
    if (p[0] == "arc" && p.size() == 3) return Domain::arc(to_double(p[1], "arc"), to_double(p[2], "arc"));
    if (p[0] == "cap" && p.size() == 5)
        return Domain::cap({to_double(p[1], "cap"), to_double(p[2], "cap"), to_double(p[3], "cap")},
                           to_double(p[4], "cap"));
    throw InputError("unknown domain spec '" + spec + "'");
}

Weight parse_weight(const std::string& spec) {
    const auto p = split(spec, ":");
    if (p[0] == "zero" && p.size() == 1) return {};
    if (p.size() == 2 && (p[0] == "lin" || p[0] == "quad")) {
        const double a = to_double(p[1], "weight");
        if (p[0] == "lin") return {[a](const Point& x) { return a * x[0]; }, 1.0, std::abs(a), spec};
        // a|x|² on sets inside the unit ball: Lipschitz 2|a|.
        return {[a](const Point& x) { return a * (x[0] * x[0] + x[1] * x[1] + x[2] * x[2]); }, 1.0, 2 * std::abs(a),
                spec};
    }
    throw InputError("unknown weight spec '" + spec + "'");
}

GraphManifold parse_manifold(const std::string& spec, std::size_t n) {
    const auto p = split(spec, ":");
    if (p[0] == "zero" && p.size() == 1) return h_zero(n);
    if (p.size() == 2 && p[0] == "quad") return h_quad(n, to_double(p[1], "h"));
    if (p.size() == 2 && p[0] == "mix") return h_mix(n, to_double(p[1], "h"));
    throw InputError("unknown manifold spec '" + spec + "'");
}

}  // namespace fekdisc
