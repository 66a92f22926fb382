#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "percolab/error.hpp"

namespace percolab {

inline double mean(const std::vector<double>& xs) {
    if (xs.empty()) throw Error(ErrorCode::invalid_input, "mean of empty sample");
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

inline double sample_variance(const std::vector<double>& xs) {
    if (xs.size() < 2) throw Error(ErrorCode::invalid_input, "variance needs >= 2 points");
    double m = mean(xs), s = 0.0;
    for (double x : xs) s += (x - m) * (x - m);
    return s / static_cast<double>(xs.size() - 1);
}

inline double quantile(std::vector<double> xs, double q) {
    if (xs.empty()) throw Error(ErrorCode::invalid_input, "quantile of empty sample");
    q = std::clamp(q, 0.0, 1.0);
    const auto idx = static_cast<std::size_t>(q * static_cast<double>(xs.size() - 1) + 0.5);
    std::nth_element(xs.begin(), xs.begin() + static_cast<std::ptrdiff_t>(idx), xs.end());
    return xs[idx];
}

inline double median(std::vector<double> xs) { return quantile(std::move(xs), 0.5); }

// Standard error of the sample median from the order-statistic spread at
// +-sqrt(n)/2 around the middle.
inline double median_standard_error(std::vector<double> xs) {
    if (xs.size() < 16) throw Error(ErrorCode::invalid_input, "median SE needs a larger sample");
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    const double half_width = 0.5 * std::sqrt(n);
    const auto lo = static_cast<std::size_t>(std::max(0.0, n / 2.0 - half_width));
    const auto hi = static_cast<std::size_t>(std::min(n - 1.0, n / 2.0 + half_width));
    return 0.5 * (xs[hi] - xs[lo]);
}

// Max gap between the two empirical CDFs over the merged support.
inline double ks_two_sample(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw Error(ErrorCode::invalid_input, "ks_two_sample needs non-empty samples");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

}  // namespace percolab
