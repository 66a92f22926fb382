#include "percolab/exploration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace percolab {

namespace {
constexpr std::uint8_t kNeutral = 0, kActive = 1, kExplored = 2;
}

Exploration::Exploration(const DegreeSequence& deg, double p, Rng rng, Options opts, ComponentSink sink)
    : deg_(deg), p_(p), rng_(std::move(rng)), preset_(false), opts_(opts), sink_(std::move(sink)) {
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::invalid_input, "p must lie in [0, 1]");
    matching_.partner.assign(deg_.half_edge_count(), 0);
    matching_.open.assign(deg_.half_edge_count(), 0);
    pool_.resize(deg_.half_edge_count());
    std::iota(pool_.begin(), pool_.end(), 0u);
    pos_.resize(deg_.half_edge_count());
    std::iota(pos_.begin(), pos_.end(), 0u);
    live_ = deg_.half_edge_count();
    init_state();
}

Exploration::Exploration(const DegreeSequence& deg, Matching preset, Options opts, ComponentSink sink)
    : deg_(deg), p_(0.0), preset_(true), matching_(std::move(preset)), opts_(opts), sink_(std::move(sink)) {
    if (matching_.half_edge_count() != deg_.half_edge_count())
        throw Error(ErrorCode::invalid_input, "preset matching size does not match degree sequence");
    init_state();
}

Exploration::Exploration(const DegreeSequence& deg, double p, Rng rng)
    : Exploration(deg, p, std::move(rng), Options{}, nullptr) {}

Exploration::Exploration(const DegreeSequence& deg, Matching preset)
    : Exploration(deg, std::move(preset), Options{}, nullptr) {}

void Exploration::init_state() {
    const std::uint64_t h = deg_.half_edge_count();
    const std::uint64_t n = deg_.tuple_count();
    total_steps_ = h / 2;
    status_.assign(h, kNeutral);
    tuple_neutral_.resize(n);
    cnt_.assign(static_cast<std::size_t>(deg_.max_size()) + 1, 0);
    for (std::uint64_t i = 0; i < n; ++i) {
        tuple_neutral_[i] = deg_.size_of(i);
        ++cnt_[deg_.size_of(i)];
    }
    if (!deg_.is_regular()) {
        owner_.resize(h);
        for (std::uint64_t i = 0; i < n; ++i) {
            const std::uint64_t lo = deg_.offset_of(i), hi = lo + deg_.size_of(i);
            for (std::uint64_t he = lo; he < hi; ++he) owner_[he] = static_cast<std::uint32_t>(i);
        }
    }
    if (opts_.track_membership) comp_of_tuple_.assign(n, kNoComponent);

    // The first tuple starts active; its activation is folded into the
    // initial walk value rather than into the reseed total.
    y_ = deg_.size_of(0);
    run_min_y_ = y_;
    seed_tuple(0);
}

void Exploration::seed_tuple(std::uint64_t tuple) {
    const std::uint16_t k = tuple_neutral_[tuple];
    --cnt_[k];
    ++cnt_[0];
    tuple_neutral_[tuple] = 0;
    const std::uint64_t lo = deg_.offset_of(tuple), hi = lo + deg_.size_of(tuple);
    for (std::uint64_t h = lo; h < hi; ++h) {
        if (status_[h] == kNeutral) {
            status_[h] = kActive;
            active_.push(static_cast<std::uint32_t>(h));
        }
    }
    a_ += k;
    if (opts_.track_membership || opts_.collect_members) window_tuples_.push_back(static_cast<std::uint32_t>(tuple));
}

std::uint32_t Exploration::pop_lowest_active() {
    while (true) {
        std::uint32_t h = active_.top();
        active_.pop();
        if (status_[h] == kActive) return h;  // stale entries were explored as eta
    }
}

void Exploration::emit_orphan(std::uint64_t tuple) {
    ComponentTrace trace;
    trace.index = next_trace_index_++;
    trace.t_start = t_;
    trace.t_end = t_;
    trace.seeded = false;
    if (opts_.track_membership) comp_of_tuple_[tuple] = static_cast<std::uint32_t>(trace.index);
    if (opts_.collect_members) trace.member_tuples.push_back(static_cast<std::uint32_t>(tuple));
    if (sink_) sink_(std::move(trace));
}

void Exploration::emit_window() {
    ComponentTrace trace;
    trace.index = next_trace_index_++;
    trace.t_start = win_start_;
    trace.t_end = t_;
    trace.s = s_;
    trace.t_closed = t_closed_;
    trace.u = u_;
    trace.v = v_;
    trace.seeded = true;
    if (opts_.track_membership)
        for (std::uint32_t tp : window_tuples_) comp_of_tuple_[tp] = static_cast<std::uint32_t>(trace.index);
    if (opts_.collect_members) trace.member_tuples = window_tuples_;
    window_tuples_.clear();
    s_ = t_closed_ = u_ = v_ = 0;
    win_start_ = t_ + 1;
    if (sink_) sink_(std::move(trace));
}

void Exploration::check_tilde_invariants() const {
    std::uint64_t tuples = 0, neutral_total = 0;
    for (std::size_t k = 0; k < cnt_.size(); ++k) {
        tuples += cnt_[k];
        neutral_total += cnt_[k] * k;
    }
    if (tuples != deg_.tuple_count())
        throw Error(ErrorCode::invalid_input, "class counts do not sum to the tuple count");
    if (neutral_total + static_cast<std::uint64_t>(a_) + 2 * t_ != deg_.half_edge_count())
        throw Error(ErrorCode::invalid_input, "neutral/active/explored totals do not cover all half-edges");
}

StepRecord Exploration::step() {
    if (done()) throw Error(ErrorCode::invalid_input, "exploration already complete");

    StepRecord rec;
    rec.t = t_ + 1;

    // choose w: lowest active half-edge, else seed the lowest neutral tuple
    std::uint32_t w;
    if (a_ > 0) {
        w = pop_lowest_active();
    } else {
        while (status_[neutral_scan_] != kNeutral) ++neutral_scan_;
        w = static_cast<std::uint32_t>(neutral_scan_);
        const std::uint64_t tw = owner_of(w);
        rec.reseed = tuple_neutral_[tw];
        seed_tuple(tw);
        z_ += rec.reseed;
        // w itself is now in the heap; it is the lowest active, remove it
        std::uint32_t popped = pop_lowest_active();
        if (opts_.check_invariants && popped != w)
            throw Error(ErrorCode::invalid_input, "seed vertex is not the lowest active");
    }
    rec.w = w;
    rec.a_tilde_before = a_;
    if (opts_.check_invariants) check_tilde_invariants();

    // draw eta among unmatched half-edges other than w
    std::uint32_t eta;
    if (preset_) {
        eta = matching_.partner[w];
        rec.open = matching_.pair_open(w);
    } else {
        auto remove_from_pool = [&](std::uint32_t h) {
            std::uint32_t last = pool_[live_ - 1];
            std::uint32_t at = pos_[h];
            pool_[at] = last;
            pos_[last] = at;
            --live_;
        };
        remove_from_pool(w);
        eta = pool_[uniform_below(rng_, live_)];
        remove_from_pool(eta);
        matching_.partner[w] = eta;
        matching_.partner[eta] = w;
        rec.open = bernoulli(rng_, p_);
        matching_.open[w] = matching_.open[eta] = rec.open ? 1 : 0;
    }
    rec.eta = eta;
    rec.eta_active = status_[eta] == kActive;
    const std::uint64_t te = owner_of(eta);
    rec.eta_class = tuple_neutral_[te];

    // status updates per the step classification
    status_[w] = kExplored;
    --a_;
    if (rec.eta_active) {
        status_[eta] = kExplored;
        --a_;
        rec.xi = -2;
        ++u_;
    } else {
        const std::uint16_t k = rec.eta_class;
        if (k >= 1 && k <= static_cast<std::uint16_t>(deg_.max_size() - 1)) ++v_;
        if (rec.open) {
            ++s_;
            seed_tuple(te);
            status_[eta] = kExplored;
            --a_;
            rec.xi = static_cast<std::int32_t>(k) - 2;
        } else {
            ++t_closed_;
            status_[eta] = kExplored;
            --cnt_[k];
            ++cnt_[k - 1];
            tuple_neutral_[te] = k - 1;
            rec.xi = -1;
        }
    }

    y_ += rec.xi;
    ++t_;
    rec.a_after = a_;
    rec.y_after = y_;
    if (y_ < run_min_y_) run_min_y_ = y_;

    if (opts_.check_invariants) {
        if (a_ < 0) throw Error(ErrorCode::invalid_input, "negative active count");
        if (y_ != a_ - z_) throw Error(ErrorCode::invalid_input, "walk identity y = a - z violated");
        if (a_ > y_ - run_min_y_ + deg_.max_size())
            throw Error(ErrorCode::invalid_input, "active-count bound violated");
    }

    // components finished this step: a tuple emptied by a closed draw first,
    // then the window if the active set emptied
    if (!rec.eta_active && !rec.open && rec.eta_class == 1) emit_orphan(te);
    if (a_ == 0) {
        record_times_.push_back(t_);
        emit_window();
    }
    return rec;
}

namespace {

RunResult run_impl(Exploration& ex, const DegreeSequence& deg, const RunOptions& options,
                   std::vector<ComponentTrace>& traces) {
    RunResult result;
    const std::uint64_t steps =
        options.max_steps == 0 ? ex.total_steps() : std::min(options.max_steps, ex.total_steps());
    if (options.record_path) {
        result.path.n = deg.tuple_count();
        result.path.d = deg.max_size();
        result.path.y.reserve(steps + 1);
        result.path.xi.reserve(steps);
        result.path.y.push_back(ex.y());
    }
    while (ex.t() < steps) {
        StepRecord rec = ex.step();
        if (options.record_path) {
            result.path.y.push_back(rec.y_after);
            result.path.xi.push_back(rec.xi);
        }
    }
    result.steps = ex.t();
    result.component_count = ex.components_emitted();
    if (options.record_path) result.path.record_times = ex.record_times();
    if (options.track_membership) result.component_of_tuple = ex.component_of_tuple();
    if (options.keep_matching) result.matching = ex.take_matching();
    result.traces = std::move(traces);
    return result;
}

Exploration::ComponentSink make_sink(std::vector<ComponentTrace>& traces, const RunOptions& options) {
    return [&traces, &options](ComponentTrace&& trace) {
        if (options.on_component) options.on_component(trace);
        if (options.collect_traces) traces.push_back(std::move(trace));
    };
}

}  // namespace

RunResult run_exploration(const DegreeSequence& deg, double p, Rng rng, const RunOptions& options) {
    std::vector<ComponentTrace> traces;
    Exploration::Options opts{options.check_invariants, options.track_membership, options.collect_members};
    Exploration ex(deg, p, std::move(rng), opts, make_sink(traces, options));
    return run_impl(ex, deg, options, traces);
}

RunResult run_exploration(const DegreeSequence& deg, Matching preset, const RunOptions& options) {
    std::vector<ComponentTrace> traces;
    Exploration::Options opts{options.check_invariants, options.track_membership, options.collect_members};
    Exploration ex(deg, std::move(preset), opts, make_sink(traces, options));
    return run_impl(ex, deg, options, traces);
}

std::vector<std::int64_t> y_hat(const WalkPath& path) {
    std::vector<std::int64_t> out(path.y.size());
    if (path.y.empty()) return out;
    std::int64_t floor_value = path.y[0];
    std::size_t next_record = 0;
    out[0] = path.y[0];
    for (std::size_t t = 1; t < path.y.size(); ++t) {
        if (next_record < path.record_times.size() && path.record_times[next_record] == t) {
            floor_value = path.y[t];  // record minima reset the clip level
            ++next_record;
        }
        out[t] = std::max(path.y[t], floor_value);
    }
    return out;
}

double rescaled_yhat(const WalkPath& path, double s) {
    if (s < 0.0) throw Error(ErrorCode::invalid_input, "s must be nonnegative");
    const double n = static_cast<double>(path.n);
    const double index = (path.d - 1) * std::pow(n, 2.0 / 3.0) * s;
    if (index > static_cast<double>(path.y.size() - 1))
        throw Error(ErrorCode::invalid_input, "s lies beyond the recorded path");
    std::vector<std::int64_t> hat = y_hat(path);
    const auto lo = static_cast<std::size_t>(index);
    const std::size_t hi = std::min(lo + 1, hat.size() - 1);
    const double frac = index - static_cast<double>(lo);
    const double value = (1.0 - frac) * static_cast<double>(hat[lo]) + frac * static_cast<double>(hat[hi]);
    return value * std::pow(n, -1.0 / 3.0);
}

}  // namespace percolab
