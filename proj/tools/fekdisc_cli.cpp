#include <CLI11.hpp>

#include <iostream>
#include <optional>

#include "fekdisc/config.hpp"
#include "fekdisc/error.hpp"
#include "fekdisc/experiments.hpp"

using namespace fekdisc;

namespace {

struct Overrides {
    std::string config;
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
};

void add_common(CLI::App* sub, Overrides& o) {
    sub->add_option("--config", o.config, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--seed", o.seed, "64-bit seed");
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
}

ExperimentConfig resolve(const Overrides& o) {
    ExperimentConfig cfg = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
    if (o.out) cfg.out = *o.out;
    if (o.seed) cfg.seed = *o.seed;
    if (o.threads) cfg.threads = *o.threads;
    return cfg;
}

void summarize(const RunRecord& rec, const std::string& dir) {
    std::cout << rec.experiment << " config_hash=" << rec.config_hash << " pass=" << rec.count("pass")
              << " fail=" << rec.count("fail") << " error=" << rec.count("error") << " out=" << dir << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fekete configurations and analytic disc experiments"};
    app.require_subcommand(1);
    Overrides o;
    std::string plot_experiment, plot_kind;
    for (const char* name : {"fekete", "rate", "disc", "bishop"}) {
        auto* sub = app.add_subcommand(name, std::string("run the ") + name + " experiment");
        add_common(sub, o);
    }
    auto* plot = app.add_subcommand("plot", "write plot data and SVGs from tables already in --out");
    add_common(plot, o);
    plot->add_option("--experiment", plot_experiment, "fekete, rate, disc or bishop (default: from the config)");
    plot->add_option("--kind", plot_kind, "a single plot name");

    CLI11_PARSE(app, argc, argv);

    try {
        auto* sub = app.get_subcommands().front();
        ExperimentConfig cfg = resolve(o);
        if (sub->get_name() == "plot") {
            const std::string exp = plot_experiment.empty() ? cfg.experiment : plot_experiment;
            const auto rec = load_record(cfg.out, exp);
            for (const auto& p : emit_plotdata(rec, cfg.out, plot_kind)) std::cout << p << "\n";
            return 0;
        }
        cfg.experiment = sub->get_name();
        cfg.validate();
        const auto rec = run_experiment(cfg);
        rec.write(cfg.out);
        summarize(rec, cfg.out);
        return rec.all_pass() ? 0 : 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
