#include "percolab.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include <json.hpp>

#include "percolab/harness.hpp"

using nlohmann::json;

namespace {

thread_local std::string g_last_error;

plab_status status_from_error(percolab::ErrorCode code) {
    switch (code) {
        case percolab::ErrorCode::invalid_input: return PLAB_ERR_INVALID_ARGUMENT;
        case percolab::ErrorCode::out_of_regime: return PLAB_ERR_OUT_OF_REGIME;
        case percolab::ErrorCode::sampling_failure: return PLAB_ERR_SAMPLING_FAILURE;
        case percolab::ErrorCode::no_root: return PLAB_ERR_NO_ROOT;
        case percolab::ErrorCode::resource_limit: return PLAB_ERR_RESOURCE_LIMIT;
        case percolab::ErrorCode::io_failure: return PLAB_ERR_IO;
    }
    return PLAB_ERR_INTERNAL;
}

template <typename Fn>
plab_status guarded(Fn&& fn) {
    try {
        fn();
        return PLAB_OK;
    } catch (const percolab::Error& e) {
        g_last_error = e.what();
        return status_from_error(e.code());
    } catch (const json::exception& e) {
        g_last_error = e.what();
        return PLAB_ERR_INVALID_ARGUMENT;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return PLAB_ERR_INTERNAL;
    }
}

char* dup_string(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (out) std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

struct plab_experiment {
    percolab::ExperimentConfig config;
};

struct plab_report {
    std::string summary;
};

extern "C" {

const char* plab_version(void) { return "0.1.0"; }

const char* plab_status_name(plab_status status) {
    switch (status) {
        case PLAB_OK: return "ok";
        case PLAB_ERR_INVALID_ARGUMENT: return "invalid_argument";
        case PLAB_ERR_OUT_OF_REGIME: return "out_of_regime";
        case PLAB_ERR_SAMPLING_FAILURE: return "sampling_failure";
        case PLAB_ERR_NO_ROOT: return "no_root";
        case PLAB_ERR_RESOURCE_LIMIT: return "resource_limit";
        case PLAB_ERR_IO: return "io";
        case PLAB_ERR_INTERNAL: return "internal";
    }
    return "unknown";
}

const char* plab_last_error(void) { return g_last_error.c_str(); }

plab_status plab_experiment_from_json(const char* config_json, plab_experiment** out) {
    if (!config_json || !out) {
        g_last_error = "null argument";
        return PLAB_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        json j = json::parse(config_json);
        auto config = percolab::ExperimentConfig::from_json(j);
        config.validate();
        *out = new plab_experiment{std::move(config)};
    });
}

void plab_experiment_free(plab_experiment* experiment) { delete experiment; }

plab_status plab_experiment_run(plab_experiment* experiment, plab_report** out) {
    if (!experiment || !out) {
        g_last_error = "null argument";
        return PLAB_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        json summary = percolab::run_experiment(experiment->config);
        *out = new plab_report{summary.dump(2)};
    });
}

const char* plab_report_summary_json(const plab_report* report) {
    return report ? report->summary.c_str() : "";
}

void plab_report_free(plab_report* report) { delete report; }

plab_status plab_prediction_table_csv(const char* rows_json, char** out_csv) {
    if (!rows_json || !out_csv) {
        g_last_error = "null argument";
        return PLAB_ERR_INVALID_ARGUMENT;
    }
    *out_csv = nullptr;
    return guarded([&] {
        json rows = json::parse(rows_json);
        if (!rows.is_array()) throw percolab::Error(percolab::ErrorCode::invalid_input, "expected a JSON array");
        std::vector<percolab::PredictionQuery> queries;
        for (const auto& row : rows) {
            percolab::PredictionQuery q;
            q.n = row.at("n").get<double>();
            q.d = row.value("d", 3);
            if (row.contains("epsilon")) q.epsilon = row["epsilon"].get<double>();
            if (row.contains("lambda")) q.lambda = row["lambda"].get<double>();
            queries.push_back(q);
        }
        *out_csv = dup_string(percolab::prediction_table_csv(queries));
    });
}

plab_status plab_compare_window(const char* records_path, const char* oracle_path,
                                const char* out_dir, char** out_json) {
    if (!records_path || !oracle_path || !out_json) {
        g_last_error = "null argument";
        return PLAB_ERR_INVALID_ARGUMENT;
    }
    *out_json = nullptr;
    return guarded([&] {
        auto graph = percolab::read_records(records_path);
        auto oracle = percolab::read_records(oracle_path);
        auto report = percolab::compare_window(graph, oracle);
        if (out_dir && out_dir[0] != '\0') percolab::write_window_cdfs(report, out_dir);
        json j;
        j["ks"] = report.ks;
        j["graph_trials"] = report.graph_trials;
        j["oracle_trials"] = report.oracle_trials;
        j["coordinates"] = report.ks.size();
        *out_json = dup_string(j.dump(2));
    });
}

void plab_string_free(char* s) { std::free(s); }

}  // extern "C"
