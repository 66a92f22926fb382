// Command-line driver. Talks to the core exclusively through the C API in
// percolab.h; CLI11 and nlohmann/json are used only to parse flags and build
// the config payload.
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "percolab.h"

using nlohmann::json;

namespace {

int fail(const std::string& code, const std::string& message) {
    json err;
    err["error"]["code"] = code;
    err["error"]["message"] = message;
    std::cerr << err.dump() << std::endl;
    return 1;
}

int fail_status(plab_status status) {
    return fail(plab_status_name(status), plab_last_error());
}

std::string default_out_dir() {
    const char* env = std::getenv("PERCOLAB_OUT_DIR");
    return env ? std::string(env) : std::string();
}

struct RunArgs {
    std::string mode;
    std::uint64_t n = 0;
    int d = 3;
    std::optional<double> lambda, epsilon, p;
    std::uint64_t trials = 0;
    std::uint64_t seed = 1;
    std::string graph = "multigraph";
    int top_m = 4;
    double ds = 1e-3;
    double smax = 20.0;
    std::string out = default_out_dir();
    int workers = 0;
    bool diameter = false;
    std::uint64_t stride = 0;
    std::uint64_t explore_cap = 0;
    double delta = 0.1;
    std::vector<double> s_points;
    std::vector<double> prop1_thresholds;
    std::string prop1_source = "circulant";
    int max_retries = 1000;
};

json run_config(const RunArgs& a) {
    json cfg;
    cfg["mode"] = a.mode;
    cfg["n"] = a.n;
    cfg["d"] = a.d;
    if (a.lambda) cfg["lambda"] = *a.lambda;
    if (a.epsilon) cfg["epsilon"] = *a.epsilon;
    if (a.p) cfg["p"] = *a.p;
    cfg["trials"] = a.trials;
    cfg["seed"] = a.seed;
    cfg["graph"] = a.graph;
    cfg["top_m"] = a.top_m;
    cfg["ds"] = a.ds;
    cfg["smax"] = a.smax;
    if (!a.out.empty()) cfg["out"] = a.out;
    cfg["workers"] = a.workers;
    cfg["diameter"] = a.diameter;
    cfg["stride"] = a.stride;
    cfg["explore_cap"] = a.explore_cap;
    cfg["delta"] = a.delta;
    if (!a.s_points.empty()) cfg["s_points"] = a.s_points;
    if (!a.prop1_thresholds.empty()) cfg["prop1_thresholds"] = a.prop1_thresholds;
    cfg["prop1_source"] = a.prop1_source;
    cfg["max_retries"] = a.max_retries;
    return cfg;
}

int cmd_run(const RunArgs& args) {
    const std::string payload = run_config(args).dump();
    plab_experiment* experiment = nullptr;
    plab_status status = plab_experiment_from_json(payload.c_str(), &experiment);
    if (status != PLAB_OK) return fail_status(status);

    plab_report* report = nullptr;
    status = plab_experiment_run(experiment, &report);
    if (status != PLAB_OK) {
        plab_experiment_free(experiment);
        return fail_status(status);
    }
    std::cout << plab_report_summary_json(report) << std::endl;
    plab_report_free(report);
    plab_experiment_free(experiment);
    return 0;
}

int cmd_predict(double n, int d, std::optional<double> epsilon, std::optional<double> lambda,
                const std::string& out_path) {
    json row;
    row["n"] = n;
    row["d"] = d;
    if (epsilon) row["epsilon"] = *epsilon;
    if (lambda) row["lambda"] = *lambda;
    json rows = json::array({row});

    char* csv = nullptr;
    plab_status status = plab_prediction_table_csv(rows.dump().c_str(), &csv);
    if (status != PLAB_OK) return fail_status(status);
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        std::FILE* f = std::fopen(out_path.c_str(), "w");
        if (!f) {
            plab_string_free(csv);
            return fail("io", "cannot open " + out_path);
        }
        std::fputs(csv, f);
        std::fclose(f);
    }
    plab_string_free(csv);
    return 0;
}

int cmd_compare(const std::string& records, const std::string& oracle, const std::string& out_dir) {
    char* result = nullptr;
    plab_status status =
        plab_compare_window(records.c_str(), oracle.c_str(), out_dir.empty() ? nullptr : out_dir.c_str(), &result);
    if (status != PLAB_OK) return fail_status(status);
    std::cout << result << std::endl;
    plab_string_free(result);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"percolation experiments on random regular graphs"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "run a Monte Carlo sweep");
    run->add_option("--mode", run_args.mode,
                    "critical|subcritical|supercritical|excursion|prop1|cltpath")
        ->required();
    run->add_option("--n", run_args.n, "number of vertices");
    run->add_option("--d", run_args.d, "degree");
    run->add_option("--lambda", run_args.lambda, "window location");
    run->add_option("--epsilon", run_args.epsilon, "distance from criticality");
    run->add_option("--p", run_args.p, "explicit percolation probability (overrides)");
    run->add_option("--trials", run_args.trials, "number of trials");
    run->add_option("--seed", run_args.seed, "master seed");
    run->add_option("--graph", run_args.graph, "multigraph|simple");
    run->add_option("--top-m", run_args.top_m, "component sizes to keep per trial");
    run->add_option("--ds", run_args.ds, "oracle grid step");
    run->add_option("--smax", run_args.smax, "oracle horizon");
    run->add_option("--out", run_args.out, "output directory (default: $PERCOLAB_OUT_DIR)");
    run->add_option("--workers", run_args.workers, "worker threads (0 = hardware)");
    run->add_flag("--diameter", run_args.diameter, "record diameters of top components");
    run->add_option("--stride", run_args.stride, "dump (t, Y_t) every stride steps");
    run->add_option("--explore-cap", run_args.explore_cap, "cap exploration steps");
    run->add_option("--delta", run_args.delta, "giant-band half width");
    run->add_option("--s-points", run_args.s_points, "cltpath sample points");
    run->add_option("--prop1-A", run_args.prop1_thresholds, "prop1 thresholds");
    run->add_option("--prop1-source", run_args.prop1_source, "circulant|simple");
    run->add_option("--max-retries", run_args.max_retries, "simple-graph rejection budget");

    double pr_n = 0;
    int pr_d = 3;
    std::optional<double> pr_eps, pr_lambda;
    std::string pr_out;
    auto* predict = app.add_subcommand("predict", "emit the prediction table (CSV)");
    predict->add_option("--n", pr_n, "number of vertices")->required();
    predict->add_option("--d", pr_d, "degree");
    predict->add_option("--epsilon", pr_eps, "distance from criticality");
    predict->add_option("--lambda", pr_lambda, "window location");
    predict->add_option("--out", pr_out, "write CSV here instead of stdout");

    std::string cm_records, cm_oracle, cm_out;
    auto* compare = app.add_subcommand("compare", "KS comparison of records vs oracle");
    compare->add_option("--records", cm_records, "critical-mode records.jsonl")->required();
    compare->add_option("--oracle", cm_oracle, "excursion-mode records.jsonl")->required();
    compare->add_option("--out", cm_out, "directory for CDF tables");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("invalid_argument", e.what());
    }

    try {
        if (run->parsed()) return cmd_run(run_args);
        if (predict->parsed()) return cmd_predict(pr_n, pr_d, pr_eps, pr_lambda, pr_out);
        if (compare->parsed()) return cmd_compare(cm_records, cm_oracle, cm_out);
    } catch (const std::exception& e) {
        return fail("internal", e.what());
    }
    return fail("invalid_argument", "no subcommand");
}
