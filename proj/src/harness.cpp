#include "percolab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <condition_variable>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include "percolab/components.hpp"
#include "percolab/excursion.hpp"
#include "percolab/exploration.hpp"
#include "percolab/matching.hpp"
#include "percolab/multigraph.hpp"
#include "percolab/stats.hpp"
#include "percolab/walk_theory.hpp"

namespace percolab {

namespace fs = std::filesystem;
using nlohmann::json;

Mode mode_from_string(const std::string& s) {
    if (s == "critical") return Mode::critical;
    if (s == "subcritical") return Mode::subcritical;
    if (s == "supercritical") return Mode::supercritical;
    if (s == "excursion") return Mode::excursion;
    if (s == "prop1") return Mode::prop1;
    if (s == "cltpath") return Mode::cltpath;
    throw Error(ErrorCode::invalid_input, "unknown mode: " + s);
}

const char* mode_name(Mode mode) {
    switch (mode) {
        case Mode::critical: return "critical";
        case Mode::subcritical: return "subcritical";
        case Mode::supercritical: return "supercritical";
        case Mode::excursion: return "excursion";
        case Mode::prop1: return "prop1";
        case Mode::cltpath: return "cltpath";
    }
    return "unknown";
}

void ExperimentConfig::validate() const {
    if (d < 3) throw Error(ErrorCode::invalid_input, "d must be >= 3");
    if (top_m < 1) throw Error(ErrorCode::invalid_input, "top_m must be >= 1");
    if (lambda && epsilon)
        throw Error(ErrorCode::invalid_input, "lambda and epsilon are mutually exclusive");
    const bool graph_mode_run = mode != Mode::excursion;
    if (graph_mode_run) {
        if (n == 0) throw Error(ErrorCode::invalid_input, "n must be positive");
        if (n * static_cast<std::uint64_t>(d) % 2 != 0)
            throw Error(ErrorCode::invalid_input, "n*d must be even");
    }
    switch (mode) {
        case Mode::critical:
        case Mode::cltpath:
            if (!lambda && !p_override)
                throw Error(ErrorCode::invalid_input, "critical-window modes need lambda (or an explicit p)");
            break;
        case Mode::subcritical:
        case Mode::supercritical:
            if (!epsilon && !p_override)
                throw Error(ErrorCode::invalid_input, "off-window modes need epsilon (or an explicit p)");
            if (epsilon && !(*epsilon > 0.0))
                throw Error(ErrorCode::invalid_input, "epsilon must be positive");
            break;
        case Mode::excursion:
            if (!lambda) throw Error(ErrorCode::invalid_input, "excursion mode needs lambda");
            if (!(ds > 0.0) || !(smax >= ds))
                throw Error(ErrorCode::invalid_input, "need ds > 0 and smax >= ds");
            break;
        case Mode::prop1:
            if (epsilon) throw Error(ErrorCode::invalid_input, "prop1 takes p or lambda <= 0, not epsilon");
            if (prop1_source != "circulant" && prop1_source != "simple")
                throw Error(ErrorCode::invalid_input, "prop1 source must be circulant or simple");
            break;
    }
    if (p_override && !(*p_override >= 0.0 && *p_override <= 1.0))
        throw Error(ErrorCode::invalid_input, "p must lie in [0, 1]");
}

double ExperimentConfig::derive_p() const {
    if (p_override) return *p_override;
    switch (mode) {
        case Mode::critical:
        case Mode::cltpath:
            return p_from_lambda(static_cast<double>(n), d, *lambda);
        case Mode::subcritical:
            return (1.0 - *epsilon) / (d - 1);
        case Mode::supercritical:
            return (1.0 + *epsilon) / (d - 1);
        case Mode::prop1:
            return lambda ? p_from_lambda(static_cast<double>(n), d, *lambda) : 1.0 / (d - 1);
        case Mode::excursion:
            break;
    }
    throw Error(ErrorCode::invalid_input, "no percolation probability in excursion mode");
}

json ExperimentConfig::to_json() const {
    json j;
    j["mode"] = mode_name(mode);
    j["n"] = n;
    j["d"] = d;
    if (lambda) j["lambda"] = *lambda;
    if (epsilon) j["epsilon"] = *epsilon;
    if (p_override) j["p"] = *p_override;
    j["trials"] = trials;
    j["seed"] = master_seed;
    j["graph"] = graph_mode == GraphMode::multigraph ? "multigraph" : "simple";
    j["top_m"] = top_m;
    j["ds"] = ds;
    j["smax"] = smax;
    j["workers"] = workers;
    j["diameter"] = diameter;
    j["diameter_cap"] = diameter_cap;
    j["stride"] = stride;
    j["explore_cap"] = explore_cap;
    j["delta"] = delta_band;
    j["s_points"] = s_points;
    j["prop1_thresholds"] = prop1_thresholds;
    j["prop1_source"] = prop1_source;
    j["max_retries"] = max_retries;
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    ExperimentConfig cfg;
    cfg.mode = mode_from_string(j.at("mode").get<std::string>());
    cfg.n = j.value("n", std::uint64_t{0});
    cfg.d = j.value("d", 3);
    if (j.contains("lambda")) cfg.lambda = j["lambda"].get<double>();
    if (j.contains("epsilon")) cfg.epsilon = j["epsilon"].get<double>();
    if (j.contains("p")) cfg.p_override = j["p"].get<double>();
    cfg.trials = j.value("trials", std::uint64_t{0});
    cfg.master_seed = j.value("seed", std::uint64_t{1});
    const std::string graph = j.value("graph", std::string("multigraph"));
    if (graph != "multigraph" && graph != "simple")
        throw Error(ErrorCode::invalid_input, "graph must be multigraph or simple");
    cfg.graph_mode = graph == "simple" ? GraphMode::simple : GraphMode::multigraph;
    cfg.top_m = j.value("top_m", 4);
    cfg.ds = j.value("ds", 1e-3);
    cfg.smax = j.value("smax", 20.0);
    cfg.out_dir = j.value("out", std::string());
    cfg.workers = j.value("workers", 0);
    cfg.diameter = j.value("diameter", false);
    cfg.diameter_cap = j.value("diameter_cap", std::uint64_t{5000});
    cfg.stride = j.value("stride", std::uint64_t{0});
    cfg.explore_cap = j.value("explore_cap", std::uint64_t{0});
    cfg.delta_band = j.value("delta", 0.1);
    if (j.contains("s_points")) cfg.s_points = j["s_points"].get<std::vector<double>>();
    if (j.contains("prop1_thresholds"))
        cfg.prop1_thresholds = j["prop1_thresholds"].get<std::vector<double>>();
    cfg.prop1_source = j.value("prop1_source", std::string("circulant"));
    cfg.max_retries = j.value("max_retries", 1000);
    return cfg;
}

json TrialRecord::to_json(Mode mode) const {
    json j;
    j["trial"] = trial;
    j["seed"] = seed;
    if (mode != Mode::excursion) {
        j["p"] = p;
        j["sizes"] = sizes;
        j["was_simple"] = was_simple;
    }
    if (mode == Mode::supercritical) {
        j["m1"] = m1;
        j["giant_ok"] = giant_ok;
        j["remainder_sizes"] = remainder_sizes;
    }
    if (!diameters.empty()) {
        j["diameters"] = diameters;
        j["diameter_exact"] = diameter_exact;
    }
    if (mode == Mode::cltpath) j["yhat"] = yhat_at_s;
    if (mode == Mode::excursion) {
        j["lengths"] = gamma_lengths;
        j["truncated"] = truncated;
    }
    return j;
}

TrialRecord TrialRecord::from_json(const json& j, Mode mode) {
    TrialRecord rec;
    rec.trial = j.at("trial").get<std::uint64_t>();
    rec.seed = j.at("seed").get<std::uint64_t>();
    rec.p = j.value("p", 0.0);
    if (j.contains("sizes")) rec.sizes = j["sizes"].get<std::vector<std::uint64_t>>();
    rec.was_simple = j.value("was_simple", false);
    rec.m1 = j.value("m1", std::uint64_t{0});
    rec.giant_ok = j.value("giant_ok", false);
    if (j.contains("remainder_sizes"))
        rec.remainder_sizes = j["remainder_sizes"].get<std::vector<std::uint64_t>>();
    if (j.contains("diameters")) {
        rec.diameters = j["diameters"].get<std::vector<std::uint64_t>>();
        rec.diameter_exact = j["diameter_exact"].get<std::vector<std::uint8_t>>();
    }
    if (j.contains("yhat")) rec.yhat_at_s = j["yhat"].get<std::vector<double>>();
    if (j.contains("lengths")) rec.gamma_lengths = j["lengths"].get<std::vector<double>>();
    rec.truncated = j.value("truncated", false);
    (void)mode;
    return rec;
}

namespace {

struct TopSizes {
    explicit TopSizes(int m) : limit(static_cast<std::size_t>(m)) {}
    std::size_t limit;
    std::vector<std::uint64_t> best;  // sorted descending

    void offer(std::uint64_t size) {
        auto it = std::upper_bound(best.begin(), best.end(), size, std::greater<>());
        if (it == best.end() && best.size() >= limit) return;
        best.insert(it, size);
        if (best.size() > limit) best.pop_back();
    }
};

bool in_regime(std::uint64_t n, double eps) {
    return eps > 0.0 && static_cast<double>(n) * eps * eps * eps > 1.0;
}

double theory_clt_mean(int d, double lambda, double s) {
    return (d - 1.0) * (lambda * s - (d - 2.0) / (2.0 * d) * s * s);
}

double theory_clt_var(int d, double s) { return (d - 1.0) * (d - 2.0) * s; }

void dump_path_csv(const std::string& out_dir, std::uint64_t trial, const WalkPath& path,
                   std::uint64_t stride) {
    std::ofstream out(out_dir + "/path_" + std::to_string(trial) + ".csv");
    if (!out) throw Error(ErrorCode::io_failure, "cannot open path dump for trial " + std::to_string(trial));
    out << "t,y\n";
    for (std::size_t t = 0; t < path.y.size(); t += stride)
        out << t << ',' << path.y[t] << '\n';
    if ((path.y.size() - 1) % stride != 0)
        out << path.y.size() - 1 << ',' << path.y.back() << '\n';
}

TrialRecord graph_trial(const ExperimentConfig& cfg, std::uint64_t trial) {
    TrialRecord rec;
    rec.trial = trial;
    rec.seed = derive_trial_seed(cfg.master_seed, trial);
    rec.p = cfg.derive_p();
    Rng rng(rec.seed);

    DegreeSequence deg = DegreeSequence::regular(cfg.n, cfg.d);
    TopSizes top(cfg.top_m);
    RunOptions opts;
    opts.record_path = cfg.stride > 0;
    opts.collect_traces = false;
    opts.keep_matching = true;
    opts.max_steps = cfg.explore_cap;
    opts.on_component = [&](const ComponentTrace& tr) { top.offer(tr.size()); };

    RunResult run;
    if (cfg.graph_mode == GraphMode::simple) {
        SimpleSample sample = sample_simple_regular(cfg.n, cfg.d, rng, cfg.max_retries);
        percolate(sample.matching, rec.p, rng);
        rec.was_simple = true;
        run = run_exploration(deg, std::move(sample.matching), opts);
    } else {
        run = run_exploration(deg, rec.p, std::move(rng), opts);
        rec.was_simple = cfg.explore_cap == 0 && matching_simple(run.matching, deg);
    }
    rec.sizes = top.best;

    if (cfg.diameter && cfg.explore_cap == 0) {
        MultiGraph open_graph = contract(run.matching, deg, /*open_only=*/true);
        ComponentSummary summary = union_find_components(open_graph);
        const std::size_t count = std::min<std::size_t>(cfg.top_m, summary.sizes.size());
        for (std::size_t j = 0; j < count; ++j) {
            DiameterResult dr = bfs_diameter(open_graph, summary, static_cast<std::uint32_t>(j), cfg.diameter_cap);
            rec.diameters.push_back(dr.value);
            rec.diameter_exact.push_back(dr.exact ? 1 : 0);
        }
    }
    if (cfg.stride > 0 && !cfg.out_dir.empty()) dump_path_csv(cfg.out_dir, trial, run.path, cfg.stride);
    return rec;
}

TrialRecord cltpath_trial(const ExperimentConfig& cfg, std::uint64_t trial) {
    TrialRecord rec;
    rec.trial = trial;
    rec.seed = derive_trial_seed(cfg.master_seed, trial);
    rec.p = cfg.derive_p();
    Rng rng(rec.seed);

    double s_top = 0.0;
    for (double s : cfg.s_points) s_top = std::max(s_top, s);
    const double scale = (cfg.d - 1.0) * std::pow(static_cast<double>(cfg.n), 2.0 / 3.0);
    std::uint64_t cap = static_cast<std::uint64_t>(std::ceil(scale * s_top)) + 2;
    if (cfg.explore_cap > 0) cap = std::max(cap, cfg.explore_cap);

    DegreeSequence deg = DegreeSequence::regular(cfg.n, cfg.d);
    TopSizes top(cfg.top_m);
    RunOptions opts;
    opts.record_path = true;
    opts.collect_traces = false;
    opts.keep_matching = false;
    opts.max_steps = cap;
    opts.on_component = [&](const ComponentTrace& tr) { top.offer(tr.size()); };
    RunResult run = run_exploration(deg, rec.p, std::move(rng), opts);
    rec.sizes = top.best;

    const std::vector<std::int64_t> hat = y_hat(run.path);
    const double y_scale = std::pow(static_cast<double>(cfg.n), -1.0 / 3.0);
    for (double s : cfg.s_points) {
        const double index = scale * s;
        const auto lo = static_cast<std::size_t>(index);
        const std::size_t hi = std::min(lo + 1, hat.size() - 1);
        const double frac = index - static_cast<double>(lo);
        rec.yhat_at_s.push_back(
            y_scale * ((1.0 - frac) * static_cast<double>(hat[lo]) + frac * static_cast<double>(hat[hi])));
    }
    if (cfg.stride > 0 && !cfg.out_dir.empty()) dump_path_csv(cfg.out_dir, trial, run.path, cfg.stride);
    return rec;
}

TrialRecord supercritical_trial(const ExperimentConfig& cfg, std::uint64_t trial) {  // see supercritical_two_phase
    TrialRecord rec;
    rec.trial = trial;
    rec.seed = derive_trial_seed(cfg.master_seed, trial);
    rec.p = cfg.derive_p();
    Rng rng(rec.seed);

    DegreeSequence deg = DegreeSequence::regular(cfg.n, cfg.d);
    Matching m;
    if (cfg.graph_mode == GraphMode::simple) {
        SimpleSample sample = sample_simple_regular(cfg.n, cfg.d, rng, cfg.max_retries);
        m = std::move(sample.matching);
        rec.was_simple = true;
    } else {
        m = sample_matching(deg.half_edge_count(), rng);
        rec.was_simple = matching_simple(m, deg);
    }
    percolate(m, rec.p, rng);

    MultiGraph g_full = contract(m, deg, /*open_only=*/false);
    ComponentSummary summary = union_find_components(g_full);
    for (std::size_t j = 0; j < std::min<std::size_t>(cfg.top_m, summary.sizes.size()); ++j)
        rec.sizes.push_back(summary.sizes[j]);

    std::vector<std::uint64_t> damage = damage_counts(g_full, summary, 0);
    rec.m1 = damage.size() > 1 ? damage[1] : 0;

    if (cfg.epsilon && in_regime(cfg.n, *cfg.epsilon)) {
        const double eps = *cfg.epsilon;
        const double giant = predict_giant(static_cast<double>(cfg.n), cfg.d, eps);
        const double boundary = predict_damage(static_cast<double>(cfg.n), cfg.d, eps);
        const double delta = cfg.delta_band;
        rec.giant_ok =
            rec.sizes[0] >= (1.0 - delta) * giant && rec.sizes[0] <= (1.0 + delta) * giant &&
            rec.m1 >= (1.0 - delta) * boundary && rec.m1 <= (1.0 + delta) * boundary;
    }

    // Remainder degree sequence: a (d-k)-tuple for every k-damaged outside
    // tuple, full tuples for the untouched ones; k = d leaves nothing.
    std::vector<std::uint16_t> closed_into(cfg.n, 0);
    for (std::size_t e = 0; e < g_full.edges.size(); ++e) {
        if (g_full.edge_open[e] != 0) continue;
        auto [a, b] = g_full.edges[e];
        const bool a_in = summary.membership[a] == 0;
        const bool b_in = summary.membership[b] == 0;
        if (a_in == b_in) continue;
        ++closed_into[a_in ? b : a];
    }
    std::vector<std::uint16_t> rem_sizes;
    rem_sizes.reserve(cfg.n - summary.sizes[0]);
    for (std::uint32_t v = 0; v < cfg.n; ++v) {
        if (summary.membership[v] == 0) continue;
        const int residual = cfg.d - closed_into[v];
        if (residual >= 1) rem_sizes.push_back(static_cast<std::uint16_t>(residual));
    }
    if (rem_sizes.size() >= 2) {
        DegreeSequence rem(std::move(rem_sizes), cfg.d);
        TopSizes rtop(cfg.top_m);
        RunOptions opts;
        opts.record_path = false;
        opts.collect_traces = false;
        opts.keep_matching = false;
        opts.on_component = [&](const ComponentTrace& tr) { rtop.offer(tr.size()); };
        run_exploration(rem, rec.p, std::move(rng), opts);
        rec.remainder_sizes = rtop.best;
    }
    return rec;
}

TrialRecord excursion_trial(const ExperimentConfig& cfg, std::uint64_t trial) {
    TrialRecord rec;
    rec.trial = trial;
    rec.seed = derive_trial_seed(cfg.master_seed, trial);
    Rng rng(rec.seed);
    GridPath w = reflect(simulate_b_lambda(cfg.d, *cfg.lambda, cfg.smax, cfg.ds, rng));
    ExcursionLengths lens = excursion_lengths(w, cfg.top_m);
    rec.truncated = lens.has_trailing && !lens.lengths.empty() && lens.trailing_length >= lens.lengths.front();
    rec.gamma_lengths = std::move(lens.lengths);
    return rec;
}

TrialRecord prop1_trial(const ExperimentConfig& cfg, const MultiGraph& graph, std::uint64_t trial) {
    TrialRecord rec;
    rec.trial = trial;
    rec.seed = derive_trial_seed(cfg.master_seed, trial);
    rec.p = cfg.derive_p();
    Rng rng(rec.seed);
    std::vector<std::uint8_t> open = percolate_edges(graph, rec.p, rng);
    ComponentSummary summary = union_find_components(graph, open);
    for (std::size_t j = 0; j < std::min<std::size_t>(cfg.top_m, summary.sizes.size()); ++j)
        rec.sizes.push_back(summary.sizes[j]);
    return rec;
}

// Worker pool with an ordered incremental writer on the calling thread.
std::vector<TrialRecord> run_pool(const ExperimentConfig& cfg,
                                  const std::function<TrialRecord(std::uint64_t)>& trial_fn,
                                  std::ostream* sink) {
    const std::uint64_t trials = cfg.trials;
    std::vector<TrialRecord> results(trials);
    if (trials == 0) return results;

    unsigned hw = std::thread::hardware_concurrency();
    std::uint64_t workers = cfg.workers > 0 ? static_cast<std::uint64_t>(cfg.workers)
                                            : std::max<unsigned>(hw, 1);
    workers = std::min<std::uint64_t>(workers, trials);

    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> stop{false};
    std::mutex mu;
    std::condition_variable cv;
    std::vector<std::uint8_t> ready(trials, 0);
    std::exception_ptr failure;

    auto work = [&] {
        try {
            while (!stop.load(std::memory_order_relaxed)) {
                const std::uint64_t i = next.fetch_add(1);
                if (i >= trials) break;
                TrialRecord rec = trial_fn(i);
                {
                    std::lock_guard lock(mu);
                    results[i] = std::move(rec);
                    ready[i] = 1;
                }
                cv.notify_all();
            }
        } catch (...) {
            {
                std::lock_guard lock(mu);
                if (!failure) failure = std::current_exception();
            }
            stop.store(true);
            cv.notify_all();
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint64_t i = 0; i < workers; ++i) pool.emplace_back(work);

    for (std::uint64_t w = 0; w < trials; ++w) {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return ready[w] != 0 || failure; });
        if (failure) break;
        if (sink) {
            *sink << results[w].to_json(cfg.mode).dump() << '\n';
            sink->flush();
            if (!*sink) {
                failure = std::make_exception_ptr(
                    Error(ErrorCode::io_failure, "failed writing record " + std::to_string(w)));
                stop.store(true);
                break;
            }
        }
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return results;
}

}  // namespace

TrialRecord supercritical_two_phase(const ExperimentConfig& config, std::uint64_t trial) {
    if (config.mode != Mode::supercritical)
        throw Error(ErrorCode::invalid_input, "supercritical_two_phase needs mode = supercritical");
    config.validate();
    return supercritical_trial(config, trial);
}

SweepResult run_sweep(const ExperimentConfig& config) {
    config.validate();

    SweepResult sweep;
    sweep.config = config;

    std::ofstream file;
    std::ostream* sink = nullptr;
    if (!config.out_dir.empty()) {
        fs::create_directories(config.out_dir);
        sweep.records_path = config.out_dir + "/records.jsonl";
        file.open(sweep.records_path, std::ios::trunc);
        if (!file) throw Error(ErrorCode::io_failure, "cannot open " + sweep.records_path);
        json header;
        header["type"] = "header";
        header["config"] = config.to_json();
        file << header.dump() << '\n';
        sink = &file;
    }

    std::function<TrialRecord(std::uint64_t)> trial_fn;
    MultiGraph prop1_graph;
    switch (config.mode) {
        case Mode::critical:
        case Mode::subcritical:
            trial_fn = [&config](std::uint64_t i) { return graph_trial(config, i); };
            break;
        case Mode::supercritical:
            trial_fn = [&config](std::uint64_t i) { return supercritical_trial(config, i); };
            break;
        case Mode::cltpath:
            trial_fn = [&config](std::uint64_t i) { return cltpath_trial(config, i); };
            break;
        case Mode::excursion:
            trial_fn = [&config](std::uint64_t i) { return excursion_trial(config, i); };
            break;
        case Mode::prop1: {
            const double p = config.derive_p();
            if (p > 1.0 / (config.d - 1) + 1e-12)
                throw Error(ErrorCode::invalid_input, "the prop1 tail bound needs p <= 1/(d-1)");
            if (config.prop1_source == "circulant") {
                prop1_graph = circulant_regular(config.n, config.d);
            } else {
                Rng rng = make_trial_rng(config.master_seed, ~std::uint64_t{0});
                prop1_graph = sample_simple_regular(config.n, config.d, rng, config.max_retries).graph;
            }
            trial_fn = [&config, &prop1_graph](std::uint64_t i) {
                return prop1_trial(config, prop1_graph, i);
            };
            break;
        }
    }

    try {
        sweep.records = run_pool(config, trial_fn, sink);
    } catch (const Error& e) {
        if (e.code() == ErrorCode::io_failure && !sweep.records_path.empty())
            throw Error(ErrorCode::io_failure,
                        std::string(e.what()) + "; partial results at " + sweep.records_path);
        throw;
    }
    return sweep;
}

SweepResult read_records(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::io_failure, "cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::io_failure, "missing header line in " + path);
    json header = json::parse(line, nullptr, false);
    if (header.is_discarded() || header.value("type", "") != "header")
        throw Error(ErrorCode::invalid_input, "first line of " + path + " is not a header");

    SweepResult sweep;
    sweep.config = ExperimentConfig::from_json(header.at("config"));
    sweep.records_path = path;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded()) throw Error(ErrorCode::invalid_input, "bad record line in " + path);
        sweep.records.push_back(TrialRecord::from_json(j, sweep.config.mode));
    }
    return sweep;
}

namespace {

std::vector<std::pair<double, double>> cdf_table(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    std::vector<std::pair<double, double>> table;
    table.reserve(values.size());
    const double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        table.emplace_back(values[i], static_cast<double>(i + 1) / n);
    return table;
}

}  // namespace

WindowReport compare_window(const SweepResult& graph, const SweepResult& oracle) {
    if (graph.config.mode != Mode::critical)
        throw Error(ErrorCode::invalid_input, "compare_window needs critical-mode records");
    if (oracle.config.mode != Mode::excursion)
        throw Error(ErrorCode::invalid_input, "compare_window needs excursion-mode oracle records");
    if (graph.config.d != oracle.config.d)
        throw Error(ErrorCode::invalid_input, "d mismatch between records and oracle");
    if (!graph.config.lambda || !oracle.config.lambda ||
        std::abs(*graph.config.lambda - *oracle.config.lambda) > 1e-12)
        throw Error(ErrorCode::invalid_input, "lambda mismatch between records and oracle");
    if (graph.records.empty() || oracle.records.empty())
        throw Error(ErrorCode::invalid_input, "compare_window needs non-empty record sets");

    WindowReport report;
    report.graph_trials = graph.records.size();
    report.oracle_trials = oracle.records.size();
    const int m = std::min(graph.config.top_m, oracle.config.top_m);
    const double scale = std::pow(static_cast<double>(graph.config.n), -2.0 / 3.0);
    for (int j = 0; j < m; ++j) {
        std::vector<double> a, b;
        a.reserve(graph.records.size());
        b.reserve(oracle.records.size());
        for (const auto& rec : graph.records)
            a.push_back(j < static_cast<int>(rec.sizes.size()) ? static_cast<double>(rec.sizes[j]) * scale : 0.0);
        for (const auto& rec : oracle.records)
            b.push_back(j < static_cast<int>(rec.gamma_lengths.size()) ? rec.gamma_lengths[j] : 0.0);
        report.ks.push_back(ks_two_sample(a, b));
        report.graph_cdf.push_back(cdf_table(std::move(a)));
        report.oracle_cdf.push_back(cdf_table(std::move(b)));
    }
    return report;
}

void write_window_cdfs(const WindowReport& report, const std::string& dir) {
    fs::create_directories(dir);
    auto write = [&](const std::string& name, const std::vector<std::pair<double, double>>& table) {
        std::ofstream out(dir + "/" + name);
        if (!out) throw Error(ErrorCode::io_failure, "cannot write " + name);
        out << "value,cdf\n";
        for (const auto& [value, prob] : table) out << value << ',' << prob << '\n';
    };
    for (std::size_t j = 0; j < report.ks.size(); ++j) {
        write("cdf_c" + std::to_string(j + 1) + ".csv", report.graph_cdf[j]);
        write("cdf_gamma" + std::to_string(j + 1) + ".csv", report.oracle_cdf[j]);
    }
}

json supercritical_summary(const SweepResult& sweep) {
    const auto& cfg = sweep.config;
    std::vector<double> c1, m1, rem_largest;
    std::uint64_t giant_hits = 0;
    for (const auto& rec : sweep.records) {
        if (!rec.sizes.empty()) c1.push_back(static_cast<double>(rec.sizes[0]));
        m1.push_back(static_cast<double>(rec.m1));
        if (!rec.remainder_sizes.empty()) rem_largest.push_back(static_cast<double>(rec.remainder_sizes[0]));
        if (rec.giant_ok) ++giant_hits;
    }
    json j;
    j["trials"] = sweep.records.size();
    if (!c1.empty()) {
        j["mean_c1"] = mean(c1);
        j["median_c1"] = median(c1);
    }
    if (!m1.empty()) j["mean_m1"] = mean(m1);
    if (!rem_largest.empty()) j["median_remainder_c1"] = median(rem_largest);
    if (!sweep.records.empty())
        j["giant_band_rate"] = static_cast<double>(giant_hits) / static_cast<double>(sweep.records.size());
    if (cfg.epsilon && in_regime(cfg.n, *cfg.epsilon)) {
        const double n = static_cast<double>(cfg.n), eps = *cfg.epsilon;
        j["predicted_giant"] = predict_giant(n, cfg.d, eps);
        j["predicted_m1"] = predict_damage(n, cfg.d, eps);
        j["predicted_second"] = predict_second(n, cfg.d, eps);
        j["delta"] = cfg.delta_band;
    }
    return j;
}

json prop1_report(const SweepResult& sweep) {
    const auto& cfg = sweep.config;
    const double n23 = std::pow(static_cast<double>(cfg.n), 2.0 / 3.0);
    const double trials = static_cast<double>(sweep.records.size());
    json rows = json::array();
    for (double a : cfg.prop1_thresholds) {
        const double bound = 8.0 / std::pow(a, 1.5);
        std::uint64_t exceed = 0;
        for (const auto& rec : sweep.records)
            if (!rec.sizes.empty() && static_cast<double>(rec.sizes[0]) > a * n23) ++exceed;
        const double rate = trials > 0 ? static_cast<double>(exceed) / trials : 0.0;
        const bool vacuous = bound >= 1.0;
        const double capped = std::min(bound, 1.0);
        const double slack = trials > 0 ? 3.0 * std::sqrt(capped * (1.0 - capped) / trials) : 0.0;
        json row;
        row["A"] = a;
        row["bound"] = bound;
        row["rate"] = rate;
        row["vacuous"] = vacuous;
        row["pass"] = vacuous || rate <= capped + slack;
        rows.push_back(row);
    }
    json j;
    j["source"] = cfg.prop1_source;
    j["rows"] = rows;
    j["informative_above"] = std::pow(8.0, 2.0 / 3.0);  // bound < 1 needs A above this
    return j;
}

json clt_path_report(const SweepResult& sweep) {
    const auto& cfg = sweep.config;
    json rows = json::array();
    for (std::size_t i = 0; i < cfg.s_points.size(); ++i) {
        std::vector<double> values;
        values.reserve(sweep.records.size());
        for (const auto& rec : sweep.records)
            if (i < rec.yhat_at_s.size()) values.push_back(rec.yhat_at_s[i]);
        if (values.size() < 2) continue;
        json row;
        row["s"] = cfg.s_points[i];
        row["mean"] = mean(values);
        row["variance"] = sample_variance(values);
        row["theory_mean"] = theory_clt_mean(cfg.d, cfg.lambda.value_or(0.0), cfg.s_points[i]);
        row["theory_variance"] = theory_clt_var(cfg.d, cfg.s_points[i]);
        rows.push_back(row);
    }
    json j;
    j["rows"] = rows;
    return j;
}

namespace {

void write_excursion_csv(const SweepResult& sweep) {
    if (sweep.config.out_dir.empty()) return;
    std::ofstream lengths(sweep.config.out_dir + "/lengths.csv");
    if (!lengths) throw Error(ErrorCode::io_failure, "cannot write lengths.csv");
    lengths << "trial";
    for (int j = 1; j <= sweep.config.top_m; ++j) lengths << ",l" << j;
    lengths << ",truncated\n";
    std::vector<double> gamma1;
    for (const auto& rec : sweep.records) {
        lengths << rec.trial;
        for (int j = 0; j < sweep.config.top_m; ++j)
            lengths << ',' << (j < static_cast<int>(rec.gamma_lengths.size()) ? rec.gamma_lengths[j] : 0.0);
        lengths << ',' << (rec.truncated ? 1 : 0) << '\n';
        if (!rec.gamma_lengths.empty()) gamma1.push_back(rec.gamma_lengths[0]);
    }
    std::ofstream cdf(sweep.config.out_dir + "/cdf_gamma1.csv");
    if (!cdf) throw Error(ErrorCode::io_failure, "cannot write cdf_gamma1.csv");
    cdf << "value,cdf\n";
    for (const auto& [value, prob] : cdf_table(std::move(gamma1))) cdf << value << ',' << prob << '\n';
}

}  // namespace

json run_experiment(const ExperimentConfig& config) {
    SweepResult sweep = run_sweep(config);

    json summary;
    summary["config"] = config.to_json();
    if (!sweep.records_path.empty()) summary["records"] = sweep.records_path;

    switch (config.mode) {
        case Mode::critical:
        case Mode::subcritical: {
            std::vector<double> c1, c3_over_c1;
            for (const auto& rec : sweep.records) {
                if (rec.sizes.empty()) continue;
                c1.push_back(static_cast<double>(rec.sizes[0]));
                if (rec.sizes.size() >= 3)
                    c3_over_c1.push_back(static_cast<double>(rec.sizes[2]) / static_cast<double>(rec.sizes[0]));
            }
            json stats;
            stats["trials"] = sweep.records.size();
            if (!c1.empty()) {
                stats["mean_c1"] = mean(c1);
                stats["median_c1"] = median(c1);
            }
            if (!c3_over_c1.empty()) stats["median_c3_over_c1"] = median(c3_over_c1);
            if (config.epsilon && in_regime(config.n, *config.epsilon)) {
                const double n = static_cast<double>(config.n);
                stats["psi"] = psi(n, *config.epsilon);
                stats["predicted_cl"] = predict_subcritical(n, config.d, *config.epsilon);
            }
            summary["component_stats"] = stats;
            break;
        }
        case Mode::supercritical:
            summary["supercritical"] = supercritical_summary(sweep);
            break;
        case Mode::excursion: {
            std::vector<double> gamma1;
            std::uint64_t truncated = 0;
            for (const auto& rec : sweep.records) {
                if (!rec.gamma_lengths.empty()) gamma1.push_back(rec.gamma_lengths[0]);
                if (rec.truncated) ++truncated;
            }
            json stats;
            stats["trials"] = sweep.records.size();
            if (!gamma1.empty()) stats["median_gamma1"] = median(gamma1);
            if (!sweep.records.empty())
                stats["truncated_fraction"] =
                    static_cast<double>(truncated) / static_cast<double>(sweep.records.size());
            summary["excursion"] = stats;
            write_excursion_csv(sweep);
            break;
        }
        case Mode::prop1:
            summary["prop1"] = prop1_report(sweep);
            break;
        case Mode::cltpath:
            summary["cltpath"] = clt_path_report(sweep);
            break;
    }

    if (!config.out_dir.empty()) {
        std::ofstream out(config.out_dir + "/summary.json");
        if (!out) throw Error(ErrorCode::io_failure, "cannot write summary.json");
        out << summary.dump(2) << '\n';
    }
    return summary;
}

std::string prediction_table_csv(const std::vector<PredictionQuery>& rows) {
    std::ostringstream out;
    out << "n,d,lambda,epsilon,p_window,p_subcritical,p_supercritical,psi,subcritical_cl,giant_c1,"
           "damage_m1,second_cl\n";
    out.precision(10);
    for (const auto& row : rows) {
        if (row.epsilon && row.lambda)
            throw Error(ErrorCode::invalid_input, "prediction rows take epsilon or lambda, not both");
        if (!row.epsilon && !row.lambda)
            throw Error(ErrorCode::invalid_input, "prediction rows need epsilon or lambda");
        out << row.n << ',' << row.d << ',';
        if (row.lambda) {
            out << *row.lambda << ",," << p_from_lambda(row.n, row.d, *row.lambda) << ",,,,,,,\n";
        } else {
            const double eps = *row.epsilon;
            out << ',' << eps << ",," << (1.0 - eps) / (row.d - 1) << ',' << (1.0 + eps) / (row.d - 1)
                << ',' << psi(row.n, eps) << ',' << predict_subcritical(row.n, row.d, eps) << ','
                << predict_giant(row.n, row.d, eps) << ',' << predict_damage(row.n, row.d, eps) << ','
                << predict_second(row.n, row.d, eps) << '\n';
        }
    }
    return out.str();
}

}  // namespace percolab
