#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <vector>

#include "percolab/degree_sequence.hpp"
#include "percolab/matching.hpp"
#include "percolab/multigraph.hpp"

namespace percolab {

enum class HalfEdgeStatus : std::uint8_t { neutral = 0, active = 1, explored = 2 };

// One exploration step: what was matched, how it was classified before the
// counts were updated, and the walk bookkeeping afterwards.
struct StepRecord {
    std::uint64_t t = 0;  // 1-based
    std::uint32_t w = 0;
    std::uint32_t eta = 0;
    bool open = false;
    bool eta_active = false;
    std::uint16_t eta_class = 0;  // neutral count of eta's tuple before updates (0 when eta was active)
    std::uint16_t reseed = 0;     // neutrals activated when w was chosen neutral
    std::int32_t xi = 0;
    std::int64_t a_tilde_before = 0;
    std::int64_t a_after = 0;
    std::int64_t y_after = 0;
};

// Per-component tallies. Seeded components occupy the step window
// (t_start, t_end] between consecutive zeros of the active count. A tuple
// whose last neutral vertex is consumed by a closed draw is never activated;
// it is emitted as an unseeded singleton at the step that finished it.
struct ComponentTrace {
    std::uint64_t index = 0;
    std::uint64_t t_start = 0;
    std::uint64_t t_end = 0;
    std::uint64_t s = 0;         // open edges to neutral tuples: joins
    std::uint64_t t_closed = 0;  // closed edges to neutral tuples
    std::uint64_t u = 0;         // draws that hit an active vertex
    std::uint64_t v = 0;         // draws that hit a partially explored tuple
    bool seeded = true;
    std::vector<std::uint32_t> member_tuples;

    std::uint64_t size() const { return s + 1; }
    std::uint64_t window_length() const { return seeded ? t_end - t_start + 1 : 0; }

    // Size bracket, checked in integers. Over a window the active-count
    // balance gives (d-1)*size - window = (d-1) - N_seed + D + U, where
    // N_seed <= d is the seed activation and D >= 0 the deficit of partial
    // joins, so the scaled gap lies in [-1, U + (d-1)(V+1)]. The -1 is
    // attained by windows seeded with a full tuple that join only full
    // tuples and never hit their own active set.
    bool sandwich_holds(int d) const {
        const std::int64_t lhs = static_cast<std::int64_t>(d - 1) * static_cast<std::int64_t>(size()) -
                                 static_cast<std::int64_t>(window_length());
        return lhs >= -1 && lhs <= static_cast<std::int64_t>(u) +
                                       static_cast<std::int64_t>(d - 1) * (static_cast<std::int64_t>(v) + 1);
    }
};

// The walk Y and its record structure over a complete (or capped) run.
struct WalkPath {
    std::uint64_t n = 0;  // tuple count
    int d = 0;
    std::vector<std::int64_t> y;              // y[0] is the initial value
    std::vector<std::int32_t> xi;             // xi[t-1] is the step-t increment
    std::vector<std::uint64_t> record_times;  // times the active count hit zero
};

// Clip Y from below at the last record value on each window; constant after
// the end of the process.
std::vector<std::int64_t> y_hat(const WalkPath& path);

// n^{-1/3} * yhat evaluated at index (d-1) n^{2/3} s, linearly interpolated.
double rescaled_yhat(const WalkPath& path, double s);

class Exploration {
public:
    struct Options {
        bool check_invariants = false;
        bool track_membership = false;  // tuple -> trace index of its component
        bool collect_members = false;   // store member tuples on each trace
    };
    using ComponentSink = std::function<void(ComponentTrace&&)>;

    // Interleaved construction: the matching is drawn pair by pair and each
    // pair percolated with probability p as it appears.
    Exploration(const DegreeSequence& deg, double p, Rng rng, Options opts, ComponentSink sink);
    Exploration(const DegreeSequence& deg, double p, Rng rng);

    // Fixed-matching traversal: eta is read off a complete, already
    // percolated matching (used for graphs conditioned to be simple).
    Exploration(const DegreeSequence& deg, Matching preset, Options opts, ComponentSink sink);
    Exploration(const DegreeSequence& deg, Matching preset);

    bool done() const { return t_ == total_steps_; }
    std::uint64_t total_steps() const { return total_steps_; }
    StepRecord step();

    std::uint64_t t() const { return t_; }
    std::int64_t active_count() const { return a_; }
    std::int64_t y() const { return y_; }
    std::int64_t z() const { return z_; }
    std::int64_t running_min_y() const { return run_min_y_; }
    std::uint64_t class_count(int k) const { return cnt_[k]; }
    std::uint16_t tuple_neutral(std::uint64_t tuple) const { return tuple_neutral_[tuple]; }
    HalfEdgeStatus status(std::uint64_t h) const { return static_cast<HalfEdgeStatus>(status_[h]); }
    const std::vector<std::uint64_t>& record_times() const { return record_times_; }
    const DegreeSequence& degrees() const { return deg_; }
    const std::vector<std::uint32_t>& component_of_tuple() const { return comp_of_tuple_; }
    std::uint64_t components_emitted() const { return next_trace_index_; }
    Matching take_matching() { return std::move(matching_); }

    static constexpr std::uint32_t kNoComponent = std::numeric_limits<std::uint32_t>::max();

private:
    void init_state();
    void seed_tuple(std::uint64_t tuple);
    std::uint32_t pop_lowest_active();
    void emit_orphan(std::uint64_t tuple);
    void emit_window();
    void check_tilde_invariants() const;

    std::uint64_t owner_of(std::uint32_t h) const {
        return owner_.empty() ? h / static_cast<std::uint32_t>(deg_.max_size()) : owner_[h];
    }

    DegreeSequence deg_;
    double p_ = 0.0;
    Rng rng_;
    bool preset_ = false;
    Matching matching_;

    std::vector<std::uint32_t> owner_;  // half-edge -> tuple; empty in the regular case
    std::vector<std::uint8_t> status_;
    std::vector<std::uint16_t> tuple_neutral_;
    std::vector<std::uint64_t> cnt_;  // tuples by neutral count
    std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> active_;
    std::uint64_t neutral_scan_ = 0;

    std::vector<std::uint32_t> pool_;  // unmatched half-edges (draw mode only)
    std::vector<std::uint32_t> pos_;
    std::uint64_t live_ = 0;

    std::uint64_t t_ = 0;
    std::uint64_t total_steps_ = 0;
    std::int64_t a_ = 0;
    std::int64_t y_ = 0;
    std::int64_t z_ = 0;
    std::int64_t run_min_y_ = 0;
    std::vector<std::uint64_t> record_times_;

    // current window tallies
    std::uint64_t win_start_ = 1;
    std::uint64_t s_ = 0, t_closed_ = 0, u_ = 0, v_ = 0;
    std::vector<std::uint32_t> window_tuples_;

    Options opts_;
    ComponentSink sink_;
    std::vector<std::uint32_t> comp_of_tuple_;
    std::uint64_t next_trace_index_ = 0;
};

struct RunOptions {
    bool record_path = true;
    bool collect_traces = true;
    bool collect_members = false;
    bool track_membership = false;
    bool keep_matching = true;
    bool check_invariants = false;
    std::uint64_t max_steps = 0;  // 0 = run the full matching
    std::function<void(const ComponentTrace&)> on_component;
};

struct RunResult {
    std::vector<ComponentTrace> traces;
    WalkPath path;
    Matching matching;
    std::vector<std::uint32_t> component_of_tuple;
    std::uint64_t steps = 0;
    std::uint64_t component_count = 0;
};

RunResult run_exploration(const DegreeSequence& deg, double p, Rng rng, const RunOptions& options);
RunResult run_exploration(const DegreeSequence& deg, Matching preset, const RunOptions& options);

// Full run with everything recorded.
inline RunResult run_full(const DegreeSequence& deg, double p, Rng rng) {
    RunOptions options;
    options.collect_members = true;
    options.track_membership = true;
    return run_exploration(deg, p, std::move(rng), options);
}

}  // namespace percolab
