#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include "fekdisc/error.hpp"
#include "fekdisc/experiments.hpp"

namespace fekdisc {
namespace {

namespace fs = std::filesystem;

constexpr double kWidth = 640, kHeight = 400, kMargin = 56;
const char* const kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

struct Axis {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    bool log = false;

    bool usable(double v) const { return std::isfinite(v) && (!log || v > 0); }
    void grow(double v) {
        if (!usable(v)) return;
        const double u = log ? std::log10(v) : v;
        lo = std::min(lo, u);
        hi = std::max(hi, u);
    }
    void finish() {
        if (!(lo <= hi)) lo = 0, hi = 1;
        if (hi - lo < 1e-300) lo -= 0.5, hi += 0.5;
    }
    double map(double v, double from, double to) const {
        const double u = log ? std::log10(v) : v;
        return from + (to - from) * (u - lo) / (hi - lo);
    }
    std::string label(double u) const { return fmt_num(log ? std::pow(10.0, u) : u); }
};

void write_svg(const fs::path& path, const PlotSpec& p, const std::vector<double>& x,
               const std::vector<std::vector<double>>& ys) {
    Axis ax{.log = p.loglog}, ay{.log = p.loglog};
    for (std::size_t i = 0; i < x.size(); ++i) {
        ax.grow(x[i]);
        for (const auto& y : ys)
            if (ax.usable(x[i])) ay.grow(y[i]);
    }
    ax.finish();
    ay.finish();
    std::ofstream os(path, std::ios::binary);
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight << "\">\n";
    os << "<rect x=\"" << kMargin << "\" y=\"" << kMargin / 2 << "\" width=\"" << kWidth - 1.5 * kMargin
       << "\" height=\"" << kHeight - 1.5 * kMargin << "\" fill=\"none\" stroke=\"black\"/>\n";
    const double x0 = kMargin, x1 = kWidth - kMargin / 2, y0 = kHeight - kMargin, y1 = kMargin / 2;
    os << "<text x=\"" << x0 << "\" y=\"" << y0 + 16 << "\" font-size=\"11\">" << ax.label(ax.lo) << "</text>\n";
    os << "<text x=\"" << x1 << "\" y=\"" << y0 + 16 << "\" font-size=\"11\" text-anchor=\"end\">" << ax.label(ax.hi)
       << "</text>\n";
    os << "<text x=\"" << x0 - 4 << "\" y=\"" << y0 << "\" font-size=\"11\" text-anchor=\"end\">" << ay.label(ay.lo)
       << "</text>\n";
    os << "<text x=\"" << x0 - 4 << "\" y=\"" << y1 + 10 << "\" font-size=\"11\" text-anchor=\"end\">"
       << ay.label(ay.hi) << "</text>\n";
    os << "<text x=\"" << (x0 + x1) / 2 << "\" y=\"" << kHeight - 12 << "\" font-size=\"12\" text-anchor=\"middle\">"
       << p.x << (p.loglog ? " (log)" : "") << "</text>\n";
    for (std::size_t s = 0; s < ys.size(); ++s) {
        const char* color = kColors[s % std::size(kColors)];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!ax.usable(x[i]) || !ay.usable(ys[s][i])) continue;
            os << (first ? "" : " ") << fmt_num(std::round(ax.map(x[i], x0, x1) * 100) / 100) << ","
               << fmt_num(std::round(ay.map(ys[s][i], y0, y1) * 100) / 100);
            first = false;
        }
        os << "\"/>\n";
        os << "<text x=\"" << x1 - 4 << "\" y=\"" << y1 + 16 + 14 * s << "\" font-size=\"11\" text-anchor=\"end\" fill=\""
           << color << "\">" << p.y[s] << "</text>\n";
    }
    os << "</svg>\n";
    if (!os) throw IoError("cannot write " + path.string());
}

}  // namespace

std::vector<PlotSpec> plots_for(const std::string& experiment) {
    if (experiment == "fekete") return {{"dist", "k", "k", {"dist1"}, true}};
    if (experiment == "rate") return {{"rate", "k", "k", {"dist1", "fit"}, true}};
    if (experiment == "disc") return {{"trace", "trace", "theta", {"re0", "im0"}, false}};
    if (experiment == "bishop") return {{"ratios", "solves", "z_norm", {"gm_ratio", "ratio_bound"}, false}};
    throw InputError("no plots for experiment '" + experiment + "'");
}

std::vector<std::string> emit_plotdata(const RunRecord& record, const std::string& dir, const std::string& kind) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir);
    std::vector<std::string> written;
    bool matched = false;
    for (PlotSpec p : plots_for(record.experiment)) {
        if (!kind.empty() && kind != p.name) continue;
        matched = true;
        const auto it = record.tables.find(p.table);
        if (it == record.tables.end()) throw InputError("record has no table " + p.table + " for plot " + p.name);
        const auto& t = it->second;
        const auto x = t.numbers(p.x);
        std::vector<std::vector<double>> ys;
        for (const auto& y : p.y) ys.push_back(t.numbers(y));
        // Rows keep table order except the scatter of bishop ratios, sorted by x.
        std::vector<std::size_t> order(x.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return p.table == "solves" && x[a] < x[b];
        });

        const auto base = fs::path(dir) / (record.experiment + "_" + p.name);
        std::ofstream os(base.string() + ".dat", std::ios::binary);
        os << "# experiment=" << record.experiment << "\n# config_hash=" << record.config_hash << "\n# plot=" << p.name
           << (p.loglog ? " loglog" : "") << "\n# " << p.x;
        for (const auto& y : p.y) os << " " << y;
        os << "\n";
        std::vector<double> sx;
        std::vector<std::vector<double>> sy(ys.size());
        for (std::size_t i : order) {
            os << fmt_num(x[i]);
            sx.push_back(x[i]);
            for (std::size_t s = 0; s < ys.size(); ++s) {
                os << " " << fmt_num(ys[s][i]);
                sy[s].push_back(ys[s][i]);
            }
            os << "\n";
        }
        if (!os) throw IoError("cannot write " + base.string() + ".dat");
        written.push_back(base.string() + ".dat");
        write_svg(base.string() + ".svg", p, sx, sy);
        written.push_back(base.string() + ".svg");
    }
    if (!matched) throw InputError("unknown plot kind '" + kind + "'");
    return written;
}

}  // namespace fekdisc
