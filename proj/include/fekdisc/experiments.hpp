#pragma once

#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fekdisc/config.hpp"
#include "fekdisc/measures.hpp"

namespace fekdisc {

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    // Throws InputError when the width does not match the header.
    void add_row(std::vector<std::string> row);
    std::size_t column(const std::string& name) const;
    std::vector<double> numbers(const std::string& name) const;  // non-numeric cells become NaN
};

// One plot: y against x from a table of the record.
struct PlotSpec {
    std::string name;
    std::string table;
    std::string x;
    std::vector<std::string> y;
    bool loglog = false;
};

// Every table row that asserts something has a `status` column holding
// pass, fail or error; error rows also carry the message in `note`.
struct RunRecord {
    std::string experiment;
    std::string config_hash;
    std::vector<std::pair<std::string, std::string>> constants;  // in emission order
    std::map<std::string, CsvTable> tables;
    std::vector<std::pair<std::string, double>> timings;  // seconds; kept out of the CSVs

    int count(const std::string& status) const;
    bool all_pass() const { return count("fail") == 0 && count("error") == 0; }
    void constant(const std::string& key, double value);
    void constant(const std::string& key, const std::string& value);

    // <dir>/<experiment>_<table>.csv per table and <dir>/<experiment>_timings.txt.
    // Throws IoError when the directory cannot be created or written.
    void write(const std::string& dir) const;
    void write_table(std::ostream& os, const std::string& table) const;
};

// Shortest round-trip decimal form; nan and inf spelled out.
std::string fmt_num(double v);

// Runs fn(i) for every i < count on `threads` workers pulling indices from a
// shared counter.  fn must write only to its own slot; the first exception is
// rethrown after all workers join.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn);

// Independent generator seed for cell i of a run.
std::uint64_t cell_seed(std::uint64_t seed, std::size_t i);

// Per k: greedy + exchange, then dist₁ and dictionary dist_γ to the
// reference.  Zero weight on the interval, circle or sphere compares with the
// closed-form equilibrium measure; otherwise with the k_max Fekete measure.
// A failing k becomes an error row.
RunRecord cmd_fekete(const ExperimentConfig& cfg);

// Fits the dist₁ column of a fekete record.  Throws InputError with fewer
// than 5 usable rows.
RunRecord cmd_rate(const ExperimentConfig& cfg, const RunRecord& fekete);
RunRecord cmd_rate(const ExperimentConfig& cfg);

// Closed forms, holomorphy, F′ wedge, minorant discriminant, captures and the
// τ = 0 reduction for each (n, t, sample).
RunRecord cmd_disc(const ExperimentConfig& cfg);

// Bishop contraction, attachment, uniqueness and Φ^h comparison for each
// (n, t, sample), plus τ-control rows at t_singular.
RunRecord cmd_bishop(const ExperimentConfig& cfg);

RunRecord run_experiment(const ExperimentConfig& cfg);

// Plots defined for an experiment: fekete → dist, rate → rate (log-log),
// disc → trace (one row per grid node), bishop → ratios.
std::vector<PlotSpec> plots_for(const std::string& experiment);

// Writes <dir>/<experiment>_<plot>.dat (whitespace columns, # header with the
// config hash) and <dir>/<experiment>_<plot>.svg for every plot of the
// record's experiment, or only `kind` when given.  Returns the paths written.
std::vector<std::string> emit_plotdata(const RunRecord& record, const std::string& dir,
                                       const std::string& kind = "");

// Reads back the CSVs RunRecord::write produced for `experiment` in dir.
RunRecord load_record(const std::string& dir, const std::string& experiment);

}  // namespace fekdisc
