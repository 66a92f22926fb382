#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "percolab/error.hpp"

namespace percolab {

enum class Mode { critical, subcritical, supercritical, excursion, prop1, cltpath };
enum class GraphMode { multigraph, simple };

Mode mode_from_string(const std::string& s);
const char* mode_name(Mode mode);

struct ExperimentConfig {
    Mode mode = Mode::critical;
    std::uint64_t n = 0;
    int d = 3;
    std::optional<double> lambda;
    std::optional<double> epsilon;
    std::optional<double> p_override;
    std::uint64_t trials = 0;
    std::uint64_t master_seed = 1;
    GraphMode graph_mode = GraphMode::multigraph;
    int top_m = 4;
    double ds = 1e-3;
    double smax = 20.0;
    std::string out_dir;  // empty: keep records in memory only
    int workers = 0;      // 0: hardware concurrency
    bool diameter = false;
    std::uint64_t diameter_cap = 5000;
    std::uint64_t stride = 0;       // >0: per-trial (t, Y_t) path dumps
    std::uint64_t explore_cap = 0;  // cap exploration steps; 0 = full run
    double delta_band = 0.1;        // giant-band half width
    std::vector<double> s_points = {1.0};
    std::vector<double> prop1_thresholds = {4.0, 6.0};
    std::string prop1_source = "circulant";  // or "simple"
    int max_retries = 1000;

    void validate() const;
    double derive_p() const;
    nlohmann::json to_json() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
};

struct TrialRecord {
    std::uint64_t trial = 0;
    std::uint64_t seed = 0;
    double p = 0.0;
    std::vector<std::uint64_t> sizes;  // top component sizes, non-increasing
    bool was_simple = false;

    // supercritical two-phase
    std::uint64_t m1 = 0;
    bool giant_ok = false;
    std::vector<std::uint64_t> remainder_sizes;

    // optional diameter measurements of the top components
    std::vector<std::uint64_t> diameters;
    std::vector<std::uint8_t> diameter_exact;

    // cltpath: rescaled yhat at the configured s points
    std::vector<double> yhat_at_s;

    // excursion oracle
    std::vector<double> gamma_lengths;
    bool truncated = false;

    double wall_ms = 0.0;  // in-memory only; excluded from persisted payload

    nlohmann::json to_json(Mode mode) const;
    static TrialRecord from_json(const nlohmann::json& j, Mode mode);
};

struct SweepResult {
    ExperimentConfig config;
    std::vector<TrialRecord> records;
    std::string records_path;  // empty when not persisted
};

// Run the configured trials on a worker pool. Per-trial generators are
// derived from (master_seed, trial); records are persisted incrementally in
// trial order when out_dir is set, as one header line plus one JSON object
// per record.
SweepResult run_sweep(const ExperimentConfig& config);

// Load a records.jsonl file written by run_sweep.
SweepResult read_records(const std::string& path);

// One trial of the two-phase supercritical protocol: find the largest
// component and its damage counts on a fresh percolated matching, then build
// the remainder degree sequence (a (d-k)-tuple per k-damaged outside tuple,
// full tuples for untouched ones) and explore a fresh matching on it. The
// record carries the giant's size and boundary plus the remainder sizes.
// run_sweep with mode = supercritical runs this per trial.
TrialRecord supercritical_two_phase(const ExperimentConfig& config, std::uint64_t trial);

nlohmann::json supercritical_summary(const SweepResult& sweep);

struct WindowReport {
    std::vector<double> ks;  // per coordinate, 1-based semantics (ks[0] = largest)
    std::uint64_t graph_trials = 0;
    std::uint64_t oracle_trials = 0;
    // per coordinate: sorted (value, cdf) tables for graph and oracle samples
    std::vector<std::vector<std::pair<double, double>>> graph_cdf;
    std::vector<std::vector<std::pair<double, double>>> oracle_cdf;
};

// Compare rescaled component sizes against the excursion-length oracle at
// matching (d, lambda).
WindowReport compare_window(const SweepResult& graph, const SweepResult& oracle);

// Write the report's per-coordinate CDF tables as value,cdf CSV files.
void write_window_cdfs(const WindowReport& report, const std::string& dir);

nlohmann::json prop1_report(const SweepResult& sweep);
nlohmann::json clt_path_report(const SweepResult& sweep);

// Full pipeline for one configuration: sweep, aggregate, persist summary.
nlohmann::json run_experiment(const ExperimentConfig& config);

// Prediction table (CSV text) for a set of parameter rows.
struct PredictionQuery {
    double n = 0;
    int d = 3;
    std::optional<double> epsilon;
    std::optional<double> lambda;
};
std::string prediction_table_csv(const std::vector<PredictionQuery>& rows);

}  // namespace percolab
