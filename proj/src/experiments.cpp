#include "fekdisc/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <memory>
#include <mutex>
#include <numbers>
#include <optional>
#include <sstream>
#include <thread>

#include "fekdisc/bishop.hpp"
#include "fekdisc/dictionary.hpp"
#include "fekdisc/disc_families.hpp"
#include "fekdisc/error.hpp"
#include "fekdisc/fekete.hpp"

namespace fekdisc {
namespace {

namespace fs = std::filesystem;
using cd = std::complex<double>;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Notes end up inside CSV cells.
std::string clean(std::string s) {
    for (char& c : s)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return s;
}

std::string verdict(bool ok) { return ok ? "pass" : "fail"; }

std::string fmt_int(long long v) { return std::to_string(v); }

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::vector<std::string> error_row(std::size_t width, std::vector<std::string> lead, const std::string& msg) {
    std::vector<std::string> row = std::move(lead);
    while (row.size() + 2 < width) row.push_back("nan");
    row.push_back("error");
    row.push_back(clean(msg));
    return row;
}

std::string gamma_column(double g) { return "dist_g" + fmt_num(g); }

}  // namespace

// ---- tables and records ----

void CsvTable::add_row(std::vector<std::string> row) {
    if (row.size() != columns.size()) throw InputError("row width does not match the table header");
    rows.push_back(std::move(row));
}

std::size_t CsvTable::column(const std::string& name) const {
    const auto it = std::find(columns.begin(), columns.end(), name);
    if (it == columns.end()) throw InputError("no column " + name);
    return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> CsvTable::numbers(const std::string& name) const {
    const std::size_t c = column(name);
    std::vector<double> out;
    for (const auto& r : rows) {
        double v = std::numeric_limits<double>::quiet_NaN();
        const auto& s = r[c];
        const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size()) v = std::numeric_limits<double>::quiet_NaN();
        out.push_back(v);
    }
    return out;
}

int RunRecord::count(const std::string& status) const {
    int n = 0;
    for (const auto& [name, t] : tables) {
        const auto it = std::find(t.columns.begin(), t.columns.end(), "status");
        if (it == t.columns.end()) continue;
        const auto c = static_cast<std::size_t>(it - t.columns.begin());
        for (const auto& r : t.rows) n += r[c] == status;
    }
    return n;
}

void RunRecord::constant(const std::string& key, double value) { constant(key, fmt_num(value)); }

void RunRecord::constant(const std::string& key, const std::string& value) {
    for (auto& kv : constants)
        if (kv.first == key) {
            kv.second = value;
            return;
        }
    constants.emplace_back(key, value);
}

void RunRecord::write_table(std::ostream& os, const std::string& table) const {
    const auto& t = tables.at(table);
    os << "# experiment=" << experiment << "\n# config_hash=" << config_hash << "\n";
    for (const auto& [k, v] : constants) os << "# " << k << "=" << v << "\n";
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << "\n";
    for (const auto& r : t.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
        os << "\n";
    }
}

void RunRecord::write(const std::string& dir) const {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);
    for (const auto& [name, t] : tables) {
        const auto path = fs::path(dir) / (experiment + "_" + name + ".csv");
        std::ofstream os(path, std::ios::binary);
        write_table(os, name);
        if (!os) throw IoError("cannot write " + path.string());
    }
    const auto path = fs::path(dir) / (experiment + "_timings.txt");
    std::ofstream os(path, std::ios::binary);
    for (const auto& [k, v] : timings) os << k << " " << fmt_num(v) << "\n";
    if (!os) throw IoError("cannot write " + path.string());
}

RunRecord load_record(const std::string& dir, const std::string& experiment) {
    if (!fs::is_directory(dir)) throw IoError("no such directory " + dir);
    std::vector<fs::path> files;
    const std::string prefix = experiment + "_";
    for (const auto& e : fs::directory_iterator(dir)) {
        const auto name = e.path().filename().string();
        if (name.rfind(prefix, 0) == 0 && e.path().extension() == ".csv") files.push_back(e.path());
    }
    if (files.empty()) throw IoError("no " + experiment + " tables in " + dir);
    std::sort(files.begin(), files.end());
    RunRecord rec;
    rec.experiment = experiment;
    for (const auto& f : files) {
        std::ifstream in(f);
        if (!in) throw IoError("cannot read " + f.string());
        const auto stem = f.stem().string();
        CsvTable& t = rec.tables[stem.substr(prefix.size())];
        std::string line;
        bool header = false;
        while (std::getline(in, line)) {
            if (line.rfind("# ", 0) == 0) {
                const auto eq = line.find('=');
                if (eq == std::string::npos) continue;
                const auto key = line.substr(2, eq - 2), val = line.substr(eq + 1);
                if (key == "config_hash") rec.config_hash = val;
                else if (key != "experiment") rec.constant(key, val);
            } else if (!header) {
                t.columns = split_csv(line);
                header = true;
            } else {
                t.add_row(split_csv(line));
            }
        }
    }
    return rec;
}

std::string fmt_num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
    const std::size_t workers = std::min<std::size_t>(std::max(1u, threads), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first;
    std::mutex mu;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (!first) first = std::current_exception();
                }
            }
        });
    for (auto& t : pool) t.join();
    if (first) std::rethrow_exception(first);
}

std::uint64_t cell_seed(std::uint64_t seed, std::size_t i) {
    std::uint64_t x = seed ^ (0xd1b54a32d192ed03ULL * (static_cast<std::uint64_t>(i) + 1));
    return Rng::splitmix64(x);
}

// ---- fekete ----

RunRecord cmd_fekete(const ExperimentConfig& cfg) {
    cfg.validate();
    RunRecord rec;
    rec.experiment = "fekete";
    rec.config_hash = cfg.hash();
    const Domain d = parse_domain(cfg.domain);
    const Weight w = parse_weight(cfg.weight);
    const DomainKind amb = d.ambient();
    const bool closed = cfg.weight == "zero" && d.kind == amb;
    const auto mesh = d.mesh(cfg.mesh);
    const auto ks = cfg.ks();

    rec.constant("domain", d.name());
    rec.constant("weight", cfg.weight);
    rec.constant("reference", closed ? "equilibrium" : "fekete_k" + fmt_int(cfg.k_max));
    rec.constant("mesh_size", static_cast<double>(mesh.size()));
    if (amb == DomainKind::Circle) rec.constant("mesh_step", 2 * std::numbers::pi / static_cast<double>(circle_mesh(cfg.mesh ? cfg.mesh : 4096).size()));
    rec.constant("sweeps", static_cast<double>(cfg.sweeps));

    struct Cell {
        std::optional<PointConfiguration> conf;
        std::string err;
        double secs = 0;
    };
    std::vector<Cell> cells(ks.size());
    parallel_for(ks.size(), cfg.threads, [&](std::size_t i) {
        const auto t0 = Clock::now();
        try {
            const auto spec = make_basis(d, ks[i]);
            cells[i].conf = exchange_refine(leja_greedy(spec, w, mesh), spec, w, mesh, cfg.sweeps);
        } catch (const std::exception& e) {
            cells[i].err = "k=" + fmt_int(ks[i]) + ": " + e.what();
        }
        cells[i].secs = seconds_since(t0);
    });

    std::optional<ReferenceMeasure> ref;
    std::optional<EmpiricalMeasure> top;
    std::string top_err;
    if (closed) {
        ref = equilibrium_reference(d);
    } else if (cells.back().conf) {
        top = fekete_measure(*cells.back().conf);
    } else {
        top_err = "reference configuration failed: " + cells.back().err;
    }

    // dist₁ on the sphere is the γ = 1 dictionary bound.
    const bool sphere = amb == DomainKind::Sphere;
    std::vector<TestDictionary> dicts;
    for (double g : cfg.gamma) dicts.push_back(make_dictionary(amb, g));
    const TestDictionary dict1 = sphere ? make_dictionary(amb, 1.0) : TestDictionary{};

    CsvTable table;
    table.columns = {"k", "N", "logdet", "moves", "dist1"};
    for (double g : cfg.gamma) table.columns.push_back(gamma_column(g));
    table.columns.insert(table.columns.end(), {"status", "note"});
    std::vector<std::vector<std::string>> rows(ks.size());
    parallel_for(ks.size(), cfg.threads, [&](std::size_t i) {
        const auto t0 = Clock::now();
        const std::vector<std::string> lead{fmt_int(ks[i])};
        if (!cells[i].conf || !top_err.empty()) {
            rows[i] = error_row(table.columns.size(), lead, cells[i].conf ? top_err : cells[i].err);
            return;
        }
        try {
            const auto& c = *cells[i].conf;
            const auto mu = fekete_measure(c);
            double d1 = 0;
            if (sphere)
                d1 = ref ? dist_gamma_dict(mu, *ref, dict1) : dist_gamma_dict(mu, *top, dict1);
            else if (amb == DomainKind::Interval)
                d1 = ref ? dist1_interval(mu, *ref) : dist1_interval(mu, *top);
            else
                d1 = ref ? dist1_circle(mu, *ref) : dist1_circle(mu, *top);
            std::vector<std::string> row{fmt_int(ks[i]), fmt_int(static_cast<long long>(c.points.size())),
                                         fmt_num(c.logdet), fmt_int(c.moves), fmt_num(d1)};
            for (const auto& dict : dicts)
                row.push_back(fmt_num(ref ? dist_gamma_dict(mu, *ref, dict) : dist_gamma_dict(mu, *top, dict)));
            row.insert(row.end(), {"pass", ""});
            rows[i] = std::move(row);
        } catch (const std::exception& e) {
            rows[i] = error_row(table.columns.size(), lead, "k=" + fmt_int(ks[i]) + ": " + e.what());
        }
        cells[i].secs += seconds_since(t0);
    });
    for (auto& r : rows) table.add_row(std::move(r));
    rec.tables["k"] = std::move(table);

    CsvTable pts;
    pts.columns = {"k", "index", "mesh_index", "x", "y", "z"};
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (!cells[i].conf) continue;
        const auto& c = *cells[i].conf;
        for (std::size_t j = 0; j < c.points.size(); ++j)
            pts.add_row({fmt_int(ks[i]), fmt_int(static_cast<long long>(j)),
                         j < c.mesh_index.size() ? fmt_int(static_cast<long long>(c.mesh_index[j])) : "",
                         fmt_num(c.points[j][0]), fmt_num(c.points[j][1]), fmt_num(c.points[j][2])});
    }
    rec.tables["points"] = std::move(pts);
    for (std::size_t i = 0; i < ks.size(); ++i) rec.timings.emplace_back("k=" + fmt_int(ks[i]), cells[i].secs);
    return rec;
}

// ---- rate ----

RunRecord cmd_rate(const ExperimentConfig& cfg, const RunRecord& fekete) {
    RunRecord rec;
    rec.experiment = "rate";
    rec.config_hash = cfg.hash();
    rec.constants = fekete.constants;
    rec.timings = fekete.timings;
    CsvTable k = fekete.tables.at("k");

    const auto kcol = k.numbers("k"), dcol = k.numbers("dist1");
    const auto sc = k.column("status");
    std::vector<double> ks, dists;
    std::vector<std::size_t> used;
    for (std::size_t i = 0; i < k.rows.size(); ++i)
        if (k.rows[i][sc] == "pass" && std::isfinite(dcol[i]) && dcol[i] > 0) {
            ks.push_back(kcol[i]);
            dists.push_back(dcol[i]);
            used.push_back(i);
        }
    if (ks.size() < 5)
        throw InputError("insufficient data: the rate fit needs at least 5 rows with positive dist1, got " +
                         fmt_int(static_cast<long long>(ks.size())));
    const RateFit fit = rate_fit(ks, dists);
    rec.constant("fit_slope", fit.slope);
    rec.constant("fit_intercept", fit.intercept);
    rec.constant("bound_exponent", fit.exponent);
    rec.constant("bound_c_min", fit.c_min);

    k.columns.insert(k.columns.end() - 2, "fit");
    for (std::size_t i = 0; i < k.rows.size(); ++i) {
        const bool in = std::find(used.begin(), used.end(), i) != used.end();
        k.rows[i].insert(k.rows[i].end() - 2,
                         in ? fmt_num(std::exp(fit.intercept) * std::pow(kcol[i], fit.slope)) : "nan");
    }
    rec.tables["k"] = std::move(k);

    CsvTable checks;
    checks.columns = {"check", "k", "value", "bound", "status"};
    checks.add_row({"rate_bound", "", fmt_num(fit.c_min), "finite", verdict(fit.paper_bound_ok)});

    const Domain d = parse_domain(cfg.domain);
    const bool closed = cfg.weight == "zero" && d.kind == d.ambient();
    if (closed && d.kind == DomainKind::Circle) {
        const double step = 2 * std::numbers::pi / static_cast<double>(circle_mesh(cfg.mesh ? cfg.mesh : 4096).size());
        for (std::size_t i = 0; i < ks.size(); ++i) {
            const double bound = std::numbers::pi / (2 * ks[i] + 1) + step;
            checks.add_row({"dist1_le_pi_over_2k1", fmt_num(ks[i]), fmt_num(dists[i]), fmt_num(bound),
                            verdict(dists[i] <= bound)});
        }
        checks.add_row({"slope", "", fmt_num(fit.slope), "-0.9", verdict(fit.slope <= -0.9)});
    } else if (closed) {
        const auto ma = moving_average(dists);
        for (std::size_t j = 0; j + 1 < ma.size(); ++j)
            checks.add_row({"moving_average_decreasing", fmt_num(ks[j + 1]), fmt_num(ma[j + 1]), fmt_num(ma[j]),
                            verdict(ma[j + 1] < ma[j])});
    }
    rec.tables["checks"] = std::move(checks);
    return rec;
}

RunRecord cmd_rate(const ExperimentConfig& cfg) { return cmd_rate(cfg, cmd_fekete(cfg)); }

// ---- disc ----

namespace {

struct FamilyCell {
    std::size_t n = 0;
    double t = 0;
    int sample = 0;
};

std::vector<FamilyCell> family_cells(const std::vector<int>& ns, const std::vector<double>& ts, int samples) {
    std::vector<FamilyCell> cells;
    for (int n : ns)
        for (double t : ts)
            for (int s = 0; s < samples; ++s) cells.push_back({static_cast<std::size_t>(n), t, s});
    return cells;
}

std::vector<std::unique_ptr<DiscFamilies>> build_families(const std::vector<int>& ns, std::size_t m,
                                                          unsigned threads) {
    std::vector<std::unique_ptr<DiscFamilies>> fams(ns.size());
    parallel_for(ns.size(), threads, [&](std::size_t i) {
        fams[i] = std::make_unique<DiscFamilies>(static_cast<std::size_t>(ns[i]), CircleGrid(m));
    });
    return fams;
}

const DiscFamilies& family_for(const std::vector<int>& ns, const std::vector<std::unique_ptr<DiscFamilies>>& fams,
                               std::size_t n) {
    for (std::size_t i = 0; i < ns.size(); ++i)
        if (static_cast<std::size_t>(ns[i]) == n) return *fams[i];
    throw InputError("no family for n");
}

double max_trace_gap(const AnalyticDisc& a, const AnalyticDisc& b) {
    double m = 0;
    for (std::size_t c = 0; c < a.dim(); ++c)
        for (std::size_t j = 0; j < a.trace(c).size(); ++j) m = std::max(m, std::abs(a.trace(c)[j] - b.trace(c)[j]));
    return m;
}

}  // namespace

RunRecord cmd_disc(const ExperimentConfig& cfg) {
    cfg.validate();
    RunRecord rec;
    rec.experiment = "disc";
    rec.config_hash = cfg.hash();
    const auto t0 = Clock::now();
    const auto fams = build_families(cfg.disc_n, cfg.disc_m, cfg.threads);
    rec.timings.emplace_back("families", seconds_since(t0));
    rec.constant("grid_m", static_cast<double>(cfg.disc_m));
    for (std::size_t i = 0; i < fams.size(); ++i) {
        const auto& c = fams[i]->calibration();
        const std::string sfx = "_n" + fmt_int(cfg.disc_n[i]);
        rec.constant("r0" + sfx, c.r0);
        rec.constant("r0_prime" + sfx, c.r0_prime);
        rec.constant("theta0" + sfx, c.theta0);
        rec.constant("c0" + sfx, c.c0);
        rec.constant("fprime_radius" + sfx, fams[i]->fprime_radius());
    }
    rec.constant("holomorphy_tol", 1e-10);
    rec.constant("wedge_tol", -1e-10);
    rec.constant("capture_tol", 1e-8);

    const auto cells = family_cells(cfg.disc_n, cfg.disc_t, cfg.disc_samples);
    CsvTable table;
    table.columns = {"n", "t", "sample", "z_norm", "zp_norm", "F1_err", "Fp1_err", "holomorphy", "wedge_min",
                     "discriminant", "capF_res", "capF_ratio", "capFp_res", "capFp_ratio", "tau0_gap", "status", "note"};
    std::vector<std::vector<std::string>> rows(cells.size());
    std::vector<double> secs(cells.size());
    std::optional<AnalyticDisc> trace_disc;
    parallel_for(cells.size(), cfg.threads, [&](std::size_t i) {
        const auto c0 = Clock::now();
        const auto& cell = cells[i];
        const std::vector<std::string> lead{fmt_int(static_cast<long long>(cell.n)), fmt_num(cell.t),
                                            fmt_int(cell.sample)};
        try {
            const auto& f = family_for(cfg.disc_n, fams, cell.n);
            const auto& cal = f.calibration();
            const auto m = static_cast<Eigen::Index>(2 * cell.n);
            const double t = cell.t;
            Rng rng(cell_seed(cfg.seed, i));
            const Eigen::VectorXd z = random_in_ball(rng, m, 0.999);
            const Eigen::VectorXd zp = random_in_ball(rng, m, 0.99 * f.fprime_radius());
            const Eigen::VectorXd tg = random_in_ball(rng, m, 0.99 * cal.r0);
            const Eigen::VectorXd tgp = random_in_ball(rng, m, 0.99 * cal.r0_prime);

            const auto F = f.family_F({z, t, {}});
            const auto Fp = f.family_Fprime({zp, t, {}});
            double f1 = 0, fp1 = 0, disc = -std::numeric_limits<double>::infinity();
            double wedge = std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < cell.n; ++c) {
                const auto ci = static_cast<Eigen::Index>(c);
                f1 = std::max(f1, std::abs(F.eval(c, 1.0) - cd(t * (z(ci) - z(ci + m / 2)), 0)));
                fp1 = std::max(fp1, std::abs(Fp.eval(c, 1.0) - cd(2 * t * zp.norm(), 0)));
                const cd zc(zp(ci), zp(ci + m / 2));
                disc = std::max(disc, quadratic_minorant(zc, std::sqrt(zp.norm()), 2 * zp.norm()).discriminant);
                for (std::size_t j = 0; j < f.grid().size(); ++j)
                    if (std::abs(f.grid().node(j)) <= cal.theta0) wedge = std::min(wedge, Fp.trace(c)[j].real());
            }
            const double holo = std::max(F.holomorphy_residual(), Fp.holomorphy_residual());
            const auto cF = f.capture_F(tg, t);
            const auto cFp = f.capture_Fprime(tgp, t);
            const double rF = cF.z_star.norm() / tg.norm(), rFp = cFp.z_star.norm() / tgp.norm();
            const double tau0 = max_trace_gap(f.family_Fprime_tau({zp, t, Eigen::VectorXd::Zero(m / 2)}), Fp);
            const bool ok = f1 == 0 && fp1 == 0 && holo <= 1e-10 && wedge >= -1e-10 && disc <= 0 &&
                            cF.residual <= 1e-8 && cFp.residual <= 1e-8 && rF <= 2 && rFp <= 2 && tau0 == 0;
            rows[i] = {lead[0], lead[1], lead[2], fmt_num(z.norm()), fmt_num(zp.norm()), fmt_num(f1), fmt_num(fp1),
                       fmt_num(holo), fmt_num(wedge), fmt_num(disc), fmt_num(cF.residual), fmt_num(rF),
                       fmt_num(cFp.residual), fmt_num(rFp), fmt_num(tau0), verdict(ok), ""};
            if (i == 0) trace_disc = F;
        } catch (const std::exception& e) {
            rows[i] = error_row(table.columns.size(), lead, e.what());
        }
        secs[i] = seconds_since(c0);
    });
    for (auto& r : rows) table.add_row(std::move(r));
    rec.tables["samples"] = std::move(table);

    if (trace_disc) {
        CsvTable tr;
        tr.columns = {"theta"};
        for (std::size_t c = 0; c < trace_disc->dim(); ++c) {
            tr.columns.push_back("re" + fmt_int(static_cast<long long>(c)));
            tr.columns.push_back("im" + fmt_int(static_cast<long long>(c)));
        }
        const auto& grid = trace_disc->grid();
        for (std::size_t j = 0; j < grid.size(); ++j) {
            std::vector<std::string> row{fmt_num(grid.node(j))};
            for (std::size_t c = 0; c < trace_disc->dim(); ++c) {
                row.push_back(fmt_num(trace_disc->trace(c)[j].real()));
                row.push_back(fmt_num(trace_disc->trace(c)[j].imag()));
            }
            tr.add_row(std::move(row));
        }
        rec.tables["trace"] = std::move(tr);
    }
    for (std::size_t i = 0; i < cells.size(); ++i)
        rec.timings.emplace_back("n=" + fmt_int(static_cast<long long>(cells[i].n)) + ",t=" + fmt_num(cells[i].t) +
                                     ",s=" + fmt_int(cells[i].sample),
                                 secs[i]);
    return rec;
}

// ---- bishop ----

RunRecord cmd_bishop(const ExperimentConfig& cfg) {
    cfg.validate();
    RunRecord rec;
    rec.experiment = "bishop";
    rec.config_hash = cfg.hash();
    const auto t0 = Clock::now();
    const auto fams = build_families(cfg.bishop_n, cfg.bishop_m, cfg.threads);
    std::vector<GraphManifold> Ks;
    for (int n : cfg.bishop_n) Ks.push_back(parse_manifold(cfg.h, static_cast<std::size_t>(n)));
    std::vector<double> c2(fams.size());
    parallel_for(fams.size(), cfg.threads, [&](std::size_t i) { c2[i] = calibrate_c2(*fams[i], Ks[i]); });
    rec.timings.emplace_back("calibration", seconds_since(t0));

    rec.constant("h", cfg.h);
    rec.constant("grid_m", static_cast<double>(cfg.bishop_m));
    rec.constant("ratio_factor", 1.1);
    rec.constant("residual_tol", 1e-11);
    rec.constant("attachment_tol", 1e-9);
    rec.constant("uniqueness_tol", 1e-10);
    rec.constant("phi_slack", 1e-13);
    rec.constant("t_singular", cfg.t_singular);
    for (std::size_t i = 0; i < fams.size(); ++i) {
        const std::string sfx = "_n" + fmt_int(cfg.bishop_n[i]);
        rec.constant("c0" + sfx, fams[i]->calibration().c0);
        rec.constant("theta0" + sfx, fams[i]->calibration().theta0);
        rec.constant("c2" + sfx, c2[i]);
        if (cfg.calibrate) {
            const auto tc = Clock::now();
            std::string t1, t1s;
            try {
                t1 = fmt_num(calibrate_t1(*fams[i], Ks[i]));
            } catch (const std::exception& e) {
                t1 = "error:" + clean(e.what());
            }
            try {
                t1s = fmt_num(calibrate_t1(*fams[i], Ks[i], true));
            } catch (const std::exception& e) {
                t1s = "error:" + clean(e.what());
            }
            rec.constant("t1" + sfx, t1);
            rec.constant("t1_singular" + sfx, t1s);
            rec.timings.emplace_back("thresholds" + sfx, seconds_since(tc));
        }
    }
    const auto index_of = [&](std::size_t n) {
        for (std::size_t i = 0; i < cfg.bishop_n.size(); ++i)
            if (static_cast<std::size_t>(cfg.bishop_n[i]) == n) return i;
        return std::size_t{0};
    };

    const auto cells = family_cells(cfg.bishop_n, cfg.bishop_t, cfg.bishop_samples);
    CsvTable table;
    table.columns = {"n", "t", "sample", "z_norm", "iterations", "gm_ratio", "ratio_bound", "residual", "norm_margin",
                     "attachment", "two_start_gap", "phi_gap", "phi_bound", "status", "note"};
    std::vector<std::vector<std::string>> rows(cells.size());
    std::vector<double> secs(cells.size());
    parallel_for(cells.size(), cfg.threads, [&](std::size_t i) {
        const auto c0 = Clock::now();
        const auto& cell = cells[i];
        const std::vector<std::string> lead{fmt_int(static_cast<long long>(cell.n)), fmt_num(cell.t),
                                            fmt_int(cell.sample)};
        try {
            const std::size_t fi = index_of(cell.n);
            const auto& f = *fams[fi];
            const auto& K = Ks[fi];
            const double t = cell.t;
            Rng rng(cell_seed(cfg.seed, i));
            const Eigen::VectorXd z = random_in_ball(rng, static_cast<Eigen::Index>(2 * cell.n), 0.95);
            const auto sol = solve_bishop(f, K, {z, t, {}});
            const auto other = solve_bishop(f, K, {z, t, {}}, {1e-12, 500, true});
            double gap = 0;
            for (std::size_t c = 0; c < sol.U.size(); ++c)
                for (std::size_t j = 0; j < sol.U[c].size(); ++j)
                    gap = std::max(gap, std::abs(sol.U[c][j] - other.U[c][j]));
            const double attach = attachment_residual(assemble_Fh(sol), K);
            const double gm = sol.geometric_mean_ratio(), bound = 1.1 * std::sqrt(t);
            const double margin = sol.sup_norm() / (4 * f.calibration().c0 * t);
            const double pg = (phi_h(f, K, z, t) - f.phi(z, t)).norm();
            const double pb = c2[fi] * t * t * z.norm();
            const bool ok = gm <= bound && sol.fixed_point_residual <= 1e-11 && margin <= 1 && attach <= 1e-9 &&
                            gap <= 1e-10 && pg <= pb + 1e-13;
            rows[i] = {lead[0], lead[1], lead[2], fmt_num(z.norm()), fmt_int(sol.iterations), fmt_num(gm),
                       fmt_num(bound), fmt_num(sol.fixed_point_residual), fmt_num(margin), fmt_num(attach),
                       fmt_num(gap), fmt_num(pg), fmt_num(pb), verdict(ok), ""};
        } catch (const std::exception& e) {
            rows[i] = error_row(table.columns.size(), lead, e.what());
        }
        secs[i] = seconds_since(c0);
    });
    for (auto& r : rows) table.add_row(std::move(r));
    rec.tables["solves"] = std::move(table);

    // τ control and wedge attachment of the singular disc.
    std::vector<FamilyCell> tcells;
    for (int n : cfg.bishop_n)
        for (int s = 0; s < cfg.bishop_samples; ++s) tcells.push_back({static_cast<std::size_t>(n), cfg.t_singular, s});
    CsvTable tau;
    tau.columns = {"n", "t", "sample", "z_norm", "tau_residual", "tau_norm", "tau_over_t", "second_deriv_gap",
                   "wedge_min", "attachment", "status", "note"};
    std::vector<std::vector<std::string>> trows(tcells.size());
    std::vector<double> tsecs(tcells.size());
    parallel_for(tcells.size(), cfg.threads, [&](std::size_t i) {
        const auto c0 = Clock::now();
        const auto& cell = tcells[i];
        const std::vector<std::string> lead{fmt_int(static_cast<long long>(cell.n)), fmt_num(cell.t),
                                            fmt_int(cell.sample)};
        try {
            const std::size_t fi = index_of(cell.n);
            const auto& f = *fams[fi];
            const auto& K = Ks[fi];
            Rng rng(cell_seed(cfg.seed ^ 0x7a75ULL, i));
            const Eigen::VectorXd z =
                random_in_ball(rng, static_cast<Eigen::Index>(2 * cell.n), 0.99 * f.fprime_radius());
            const auto tc = solve_tau(f, K, z, cell.t);
            const auto sol = solve_bishop_singular(f, K, {z, cell.t, tc.tau});
            const auto rep = verify_wedge_attachment(sol, K, f.calibration().theta0);
            const double wmin = *std::min_element(rep.component_min.begin(), rep.component_min.end());
            const bool ok = tc.residual <= 1e-8 && rep.pass && rep.attachment_residual <= 1e-9;
            trows[i] = {lead[0], lead[1], lead[2], fmt_num(z.norm()), fmt_num(tc.residual), fmt_num(tc.tau.norm()),
                        fmt_num(tc.tau.norm() / cell.t), fmt_num(tc.second_deriv_gap), fmt_num(wmin),
                        fmt_num(rep.attachment_residual), verdict(ok), ""};
        } catch (const std::exception& e) {
            trows[i] = error_row(tau.columns.size(), lead, e.what());
        }
        tsecs[i] = seconds_since(c0);
    });
    for (auto& r : trows) tau.add_row(std::move(r));
    double c3 = 0;
    for (double v : tau.numbers("tau_over_t"))
        if (std::isfinite(v)) c3 = std::max(c3, v);
    rec.constant("c3", c3);
    rec.tables["tau"] = std::move(tau);

    for (std::size_t i = 0; i < cells.size(); ++i)
        rec.timings.emplace_back("n=" + fmt_int(static_cast<long long>(cells[i].n)) + ",t=" + fmt_num(cells[i].t) +
                                     ",s=" + fmt_int(cells[i].sample),
                                 secs[i]);
    for (std::size_t i = 0; i < tcells.size(); ++i)
        rec.timings.emplace_back("tau,n=" + fmt_int(static_cast<long long>(tcells[i].n)) +
                                     ",s=" + fmt_int(tcells[i].sample),
                                 tsecs[i]);
    return rec;
}

RunRecord run_experiment(const ExperimentConfig& cfg) {
    if (cfg.experiment == "fekete") return cmd_fekete(cfg);
    if (cfg.experiment == "rate") return cmd_rate(cfg);
    if (cfg.experiment == "disc") return cmd_disc(cfg);
    if (cfg.experiment == "bishop") return cmd_bishop(cfg);
    throw InputError("unknown experiment '" + cfg.experiment + "'");
}

}  // namespace fekdisc
