#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "percolab/components.hpp"
#include "percolab/exploration.hpp"
#include "percolab/stats.hpp"

using namespace percolab;

namespace {

std::vector<std::uint64_t> trace_sizes(const std::vector<ComponentTrace>& traces) {
    std::vector<std::uint64_t> sizes;
    sizes.reserve(traces.size());
    for (const auto& tr : traces) sizes.push_back(tr.size());
    std::sort(sizes.begin(), sizes.end(), std::greater<>());
    return sizes;
}

}  // namespace

TEST_CASE("init of the regular case") {
    Exploration ex(DegreeSequence::regular(10, 3), 0.5, Rng(1));
    CHECK(ex.t() == 0);
    CHECK(ex.active_count() == 3);  // first tuple active
    CHECK(ex.y() == 3);
    CHECK(ex.z() == 0);
    CHECK(ex.class_count(3) == 9);
    CHECK(ex.class_count(0) == 1);
    for (int h = 0; h < 3; ++h) CHECK(ex.status(h) == HalfEdgeStatus::active);
    for (int h = 3; h < 30; ++h) CHECK(ex.status(h) == HalfEdgeStatus::neutral);
}

TEST_CASE("init with mixed tuple sizes") {
    // sizes must sum to an even number, so a unit tuple pads (3,2,2)
    Exploration ex(DegreeSequence({3, 2, 2, 1}, 3), 0.5, Rng(1));
    CHECK(ex.active_count() == 3);
    CHECK(ex.y() == 3);
    CHECK(ex.class_count(0) == 1);
    CHECK(ex.class_count(2) == 2);
    CHECK(ex.class_count(1) == 1);
    CHECK(ex.class_count(3) == 0);
}

TEST_CASE("init single tuple and invalid input") {
    Exploration ex(DegreeSequence::regular(1, 2), 0.5, Rng(1));
    CHECK(ex.active_count() == 2);
    CHECK(ex.total_steps() == 1);
    StepRecord rec = ex.step();
    CHECK(rec.eta_active);
    CHECK(ex.done());
    CHECK(ex.record_times() == std::vector<std::uint64_t>{1});
    CHECK_THROWS_AS(ex.step(), Error);

    CHECK_THROWS_AS(DegreeSequence({}, 3), Error);
    CHECK_THROWS_AS(Exploration(DegreeSequence::regular(4, 3), 1.5, Rng(1)), Error);
}

TEST_CASE("step dynamics follow the case equations") {
    Rng seeds(77);
    for (int rep = 0; rep < 30; ++rep) {
        const int d = 3 + rep % 3;
        const std::uint64_t n = 10 + (rep % 4) * 10;
        if (n * d % 2 != 0) continue;
        const double p = (rep % 5) / 4.0;
        Exploration ex(DegreeSequence::regular(n, d), p, Rng(seeds()),
                       Exploration::Options{true, false, false}, nullptr);
        std::int64_t prev_z = ex.z();
        std::int64_t prev_a = ex.active_count();
        while (!ex.done()) {
            StepRecord rec = ex.step();
            // reseed happens exactly when the active set was empty
            CHECK((rec.reseed > 0) == (prev_a == 0));
            if (rec.reseed > 0) {
                CHECK(rec.reseed >= 1);
                CHECK(rec.reseed <= d);
                CHECK(ex.z() == prev_z + rec.reseed);
            } else {
                CHECK(ex.z() == prev_z);
            }
            CHECK(rec.a_tilde_before == prev_a + rec.reseed);
            // the three classifications and their active-count updates
            if (rec.eta_active) {
                CHECK(rec.xi == -2);
                CHECK(rec.a_after == rec.a_tilde_before - 2);
            } else if (rec.open) {
                CHECK(rec.xi == static_cast<std::int32_t>(rec.eta_class) - 2);
                CHECK(rec.a_after == rec.a_tilde_before + rec.eta_class - 2);
            } else {
                CHECK(rec.xi == -1);
                CHECK(rec.a_after == rec.a_tilde_before - 1);
            }
            CHECK(rec.y_after == ex.active_count() - ex.z());
            prev_z = ex.z();
            prev_a = ex.active_count();
        }
    }
}

TEST_CASE("class counts match a from-scratch recount") {
    Rng seeds(123);
    for (int rep = 0; rep < 10; ++rep) {
        const int d = 3 + rep % 2;
        const std::uint64_t n = 12;
        DegreeSequence deg = DegreeSequence::regular(n, d);
        Exploration ex(deg, 0.4, Rng(seeds()));
        while (!ex.done()) {
            ex.step();
            std::vector<std::uint64_t> recount(d + 1, 0);
            for (std::uint64_t tuple = 0; tuple < n; ++tuple) {
                int neutral = 0;
                for (std::uint64_t h = deg.offset_of(tuple); h < deg.offset_of(tuple) + d; ++h)
                    if (ex.status(h) == HalfEdgeStatus::neutral) ++neutral;
                CHECK(ex.tuple_neutral(tuple) == neutral);
                ++recount[neutral];
            }
            for (int k = 0; k <= d; ++k) CHECK(ex.class_count(k) == recount[k]);
        }
    }
}

TEST_CASE("run_full with p=0 yields n singletons") {
    RunResult run = run_full(DegreeSequence::regular(30, 3), 0.0, Rng(9));
    CHECK(run.traces.size() == 30);
    for (const auto& tr : run.traces) CHECK(tr.size() == 1);
}

TEST_CASE("run_full with p=1 matches union-find, one trace when connected") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        DegreeSequence deg = DegreeSequence::regular(20, 3);
        RunResult run = run_full(deg, 1.0, Rng(seed));
        ComponentSummary summary = union_find_components(contract(run.matching, deg, true));
        CHECK(trace_sizes(run.traces) == summary.sizes);
        if (summary.sizes.size() == 1) CHECK(run.traces.size() == 1);
    }
}

TEST_CASE("component multiset equals the union-find oracle") {
    Rng seeds(20240202);
    for (int d : {3, 4, 5}) {
        for (std::uint64_t n : {10ull, 50ull, 200ull}) {
            if (n * d % 2 != 0) continue;
            for (double p : {0.2, 1.0 / (d - 1), 0.9}) {
                for (int rep = 0; rep < 4; ++rep) {
                    DegreeSequence deg = DegreeSequence::regular(n, d);
                    RunResult run = run_full(deg, p, Rng(seeds()));
                    ComponentSummary summary = union_find_components(contract(run.matching, deg, true));
                    REQUIRE(trace_sizes(run.traces) == summary.sizes);
                }
            }
        }
    }
}

TEST_CASE("preset-matching traversal agrees with the oracle too") {
    Rng rng(606);
    DegreeSequence deg = DegreeSequence::regular(40, 3);
    for (int rep = 0; rep < 10; ++rep) {
        Matching m = sample_matching(deg.half_edge_count(), rng);
        percolate(m, 0.45, rng);
        ComponentSummary summary = union_find_components(contract(m, deg, true));
        RunOptions options;
        options.collect_members = true;
        RunResult run = run_exploration(deg, std::move(m), options);
        CHECK(trace_sizes(run.traces) == summary.sizes);
    }
}

TEST_CASE("membership and member lists agree with trace sizes") {
    DegreeSequence deg = DegreeSequence::regular(60, 3);
    RunResult run = run_full(deg, 0.3, Rng(5));
    std::vector<std::uint64_t> by_membership(run.traces.size(), 0);
    for (std::uint32_t tuple = 0; tuple < 60; ++tuple) {
        REQUIRE(run.component_of_tuple[tuple] != Exploration::kNoComponent);
        ++by_membership[run.component_of_tuple[tuple]];
    }
    for (const auto& tr : run.traces) {
        CHECK(tr.size() == tr.member_tuples.size());
        CHECK(tr.size() == by_membership[tr.index]);
        for (std::uint32_t tuple : tr.member_tuples) CHECK(run.component_of_tuple[tuple] == tr.index);
    }
}

TEST_CASE("unseeded singletons occur and are exact") {
    // at small p many tuples are finished entirely by closed draws
    int orphans = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        DegreeSequence deg = DegreeSequence::regular(50, 3);
        RunResult run = run_full(deg, 0.2, Rng(seed));
        for (const auto& tr : run.traces) {
            if (!tr.seeded) {
                ++orphans;
                CHECK(tr.size() == 1);
                CHECK(tr.window_length() == 0);
            }
        }
        ComponentSummary summary = union_find_components(contract(run.matching, deg, true));
        REQUIRE(trace_sizes(run.traces) == summary.sizes);
    }
    CHECK(orphans > 0);
}

TEST_CASE("component sandwich and window identity") {
    Rng seeds(31337);
    int at_lower_edge = 0;
    for (int rep = 0; rep < 40; ++rep) {
        const int d = 3 + rep % 3;
        const std::uint64_t n = 40;
        if (n * d % 2 != 0) continue;
        const double p = 0.15 + 0.2 * (rep % 4);
        DegreeSequence deg = DegreeSequence::regular(n, d);
        RunResult run = run_full(deg, p, Rng(seeds()));
        std::uint64_t window_total = 0;
        for (const auto& tr : run.traces) {
            CHECK(tr.sandwich_holds(d));
            const std::int64_t gap = static_cast<std::int64_t>(d - 1) * static_cast<std::int64_t>(tr.size()) -
                                     static_cast<std::int64_t>(tr.window_length());
            if (gap == -1) ++at_lower_edge;
            if (tr.seeded) {
                CHECK(tr.window_length() == tr.s + tr.t_closed + tr.u);
                window_total += tr.window_length();
            }
        }
        CHECK(window_total == run.steps);
    }
    // windows seeded by full tuples that only join full tuples sit exactly on
    // the -1 edge, so the bracket is tight
    CHECK(at_lower_edge > 0);
}

TEST_CASE("record times are strict record minima of y and exactly those of yhat") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        RunResult run = run_full(DegreeSequence::regular(80, 3), 0.5, Rng(seed));
        const auto& y = run.path.y;
        const auto hat = y_hat(run.path);

        // every record time is a strict running minimum of y
        for (std::uint64_t t : run.path.record_times) {
            for (std::uint64_t s = 0; s < t; ++s) CHECK(y[t] < y[s]);
        }

        // and the strict running minima of yhat are exactly the record times
        std::vector<std::uint64_t> hat_records;
        std::int64_t run_min = hat[0];
        for (std::size_t t = 1; t < hat.size(); ++t) {
            if (hat[t] < run_min) {
                hat_records.push_back(t);
                run_min = hat[t];
            }
        }
        CHECK(hat_records == run.path.record_times);

        // yhat clips y from below at the last record value
        for (std::size_t t = 0; t < hat.size(); ++t) CHECK(hat[t] >= y[t]);
    }
}

TEST_CASE("y_hat on a crafted path") {
    WalkPath path;
    path.n = 4;
    path.d = 3;
    path.y = {3, 2, 1, 0, -1, 0, 1, -2};
    path.record_times = {4, 7};  // walk state, not derivable from y alone
    auto hat = y_hat(path);
    // monotone decrease clips at y[0] until the first record resets the level
    CHECK(hat == std::vector<std::int64_t>{3, 3, 3, 3, -1, 0, 1, -2});

    WalkPath floor_only;
    floor_only.n = 4;
    floor_only.d = 3;
    floor_only.y = {3, 2, 1, 0};
    floor_only.record_times = {1, 2, 3};
    CHECK(y_hat(floor_only) == floor_only.y);
}

TEST_CASE("rescaled_yhat endpoints") {
    DegreeSequence deg = DegreeSequence::regular(64, 3);
    RunResult run = run_full(deg, 0.4, Rng(2));
    const double v0 = rescaled_yhat(run.path, 0.0);
    CHECK(v0 == doctest::Approx(3.0 * std::pow(64.0, -1.0 / 3.0)));
    CHECK_THROWS_AS(rescaled_yhat(run.path, 1e9), Error);
    CHECK_THROWS_AS(rescaled_yhat(run.path, -0.1), Error);
}

TEST_CASE("capped runs stop early and keep a consistent path") {
    DegreeSequence deg = DegreeSequence::regular(100, 3);
    RunOptions options;
    options.max_steps = 10;
    RunResult run = run_exploration(deg, 0.5, Rng(3), options);
    CHECK(run.steps == 10);
    CHECK(run.path.y.size() == 11);
    CHECK(run.path.xi.size() == 10);
}

TEST_CASE("drift and variance of the increments near criticality" * doctest::timeout(600)) {
    // At p = 1/(d-1), binned means of xi should track -(d-2) t / (d(d-1) n)
    // and the variance should sit near d-2 while t = o(n).
    const int d = 3;
    const std::uint64_t n = 30000;
    const std::uint64_t t_max = 3000;
    const int trials = 400;
    const double p = 1.0 / (d - 1);

    const std::uint64_t bins = 6;
    const std::uint64_t bin_width = t_max / bins;
    std::vector<double> bin_sum(bins, 0.0), bin_sq(bins, 0.0);
    std::vector<std::uint64_t> bin_count(bins, 0);

    for (int trial = 0; trial < trials; ++trial) {
        DegreeSequence deg = DegreeSequence::regular(n, d);
        RunOptions options;
        options.max_steps = t_max;
        options.collect_traces = false;
        options.keep_matching = false;
        RunResult run = run_exploration(deg, p, make_trial_rng(424242, trial), options);
        for (std::uint64_t t = 1; t <= t_max; ++t) {
            const double xi = run.path.xi[t - 1];
            const std::uint64_t b = std::min((t - 1) / bin_width, bins - 1);
            bin_sum[b] += xi;
            bin_sq[b] += xi * xi;
            ++bin_count[b];
        }
    }

    for (std::uint64_t b = 0; b < bins; ++b) {
        const double mean_xi = bin_sum[b] / static_cast<double>(bin_count[b]);
        const double t_mid = (static_cast<double>(b) + 0.5) * static_cast<double>(bin_width);
        const double predicted = -(d - 2.0) / (d * (d - 1.0)) * t_mid / static_cast<double>(n);
        const double sigma = std::sqrt((d - 2.0) / static_cast<double>(bin_count[b]));
        CHECK(std::abs(mean_xi - predicted) < 4.0 * sigma + 0.003);

        const double var_xi = bin_sq[b] / static_cast<double>(bin_count[b]) - mean_xi * mean_xi;
        CHECK(var_xi == doctest::Approx(d - 2.0).epsilon(0.05));
    }
}
