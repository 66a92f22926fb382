#include "percolab/excursion.hpp"

#include <algorithm>
#include <cmath>

namespace percolab {

namespace {

void check_grid(int d, double s_max, double ds) {
    if (d < 3) throw Error(ErrorCode::invalid_input, "d must be >= 3");
    if (!(ds > 0.0) || !(s_max >= ds)) throw Error(ErrorCode::invalid_input, "need ds > 0 and s_max >= ds");
}

GridPath drift_grid(int d, double lambda, double s_max, double ds) {
    GridPath path;
    path.ds = ds;
    path.smax = s_max;
    path.d = d;
    path.lambda = lambda;
    const auto steps = static_cast<std::size_t>(s_max / ds);
    path.values.resize(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i) {
        const double s = static_cast<double>(i) * ds;
        path.values[i] = lambda * s - (d - 2.0) / (2.0 * d) * s * s;
    }
    return path;
}

}  // namespace

GridPath simulate_b_lambda(int d, double lambda, double s_max, double ds, Rng& rng) {
    check_grid(d, s_max, ds);
    GridPath path = drift_grid(d, lambda, s_max, ds);
    const double step_sd = std::sqrt((d - 2.0) / (d - 1.0) * ds);
    std::normal_distribution<double> gauss(0.0, step_sd);
    double sum = 0.0;
    for (std::size_t i = 1; i < path.values.size(); ++i) {
        sum += gauss(rng);
        path.values[i] += sum;
    }
    return path;
}

GridPath simulate_b_lambda_drift(int d, double lambda, double s_max, double ds) {
    check_grid(d, s_max, ds);
    return drift_grid(d, lambda, s_max, ds);
}

GridPath reflect(const GridPath& path) {
    GridPath out = path;
    double running_min = 0.0;
    for (std::size_t i = 0; i < path.values.size(); ++i) {
        if (path.values[i] < running_min) {
            running_min = path.values[i];
            out.values[i] = 0.0;  // new minima are exact zeros
        } else {
            out.values[i] = path.values[i] - running_min;
        }
    }
    return out;
}

ExcursionLengths excursion_lengths(const GridPath& reflected, int m) {
    if (m < 1) throw Error(ErrorCode::invalid_input, "m must be >= 1");
    if (reflected.values.empty() || reflected.values.front() != 0.0)
        throw Error(ErrorCode::invalid_input, "expected a reflected path starting at 0");

    ExcursionLengths out;
    const auto& w = reflected.values;
    std::size_t last_zero = 0;
    for (std::size_t i = 1; i < w.size(); ++i) {
        if (w[i] < 0.0) throw Error(ErrorCode::invalid_input, "reflected path must be nonnegative");
        if (w[i] <= 0.0) {
            if (i > last_zero + 1)
                out.lengths.push_back(static_cast<double>(i - last_zero) * reflected.ds);
            last_zero = i;
        }
    }
    if (last_zero + 1 < w.size()) {
        out.has_trailing = true;
        out.trailing_length = static_cast<double>(w.size() - 1 - last_zero) * reflected.ds;
        out.lengths.push_back(out.trailing_length);
    }
    std::sort(out.lengths.begin(), out.lengths.end(), std::greater<>());
    out.lengths.resize(static_cast<std::size_t>(m), 0.0);
    return out;
}

GammaSample sample_gamma(int d, double lambda, double s_max, double ds, std::uint64_t trials,
                         int m, Rng& rng) {
    GammaSample sample;
    sample.lengths.reserve(trials);
    std::uint64_t truncated = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        GridPath w = reflect(simulate_b_lambda(d, lambda, s_max, ds, rng));
        ExcursionLengths lens = excursion_lengths(w, m);
        if (lens.has_trailing && !lens.lengths.empty() && lens.trailing_length >= lens.lengths.front())
            ++truncated;
        sample.lengths.push_back(std::move(lens.lengths));
    }
    sample.truncated_fraction = trials == 0 ? 0.0 : static_cast<double>(truncated) / static_cast<double>(trials);
    return sample;
}

}  // namespace percolab
