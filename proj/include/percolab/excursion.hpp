#pragma once

#include <cstdint>
#include <vector>

#include "percolab/error.hpp"
#include "percolab/rng.hpp"

namespace percolab {

// Values of a drifted Brownian path (or its reflection) over the uniform grid
// s = 0, ds, 2 ds, ..., floor(smax/ds) * ds.
struct GridPath {
    double ds = 0.0;
    double smax = 0.0;
    int d = 0;
    double lambda = 0.0;
    std::vector<double> values;
};

// Time-changed Brownian motion with quadratic drift: per-step Gaussian
// variance (d-2)/(d-1) ds and drift lambda*s - (d-2)/(2d) s^2.
GridPath simulate_b_lambda(int d, double lambda, double s_max, double ds, Rng& rng);

// Noise-free variant: the pure drift curve.
GridPath simulate_b_lambda_drift(int d, double lambda, double s_max, double ds);

// Subtract the running minimum. Result is nonnegative and starts at 0; new
// minima become exact zeros.
GridPath reflect(const GridPath& path);

struct ExcursionLengths {
    std::vector<double> lengths;  // non-increasing, padded with 0 to m entries
    bool has_trailing = false;    // path ended strictly above its running minimum
    double trailing_length = 0.0;
};

// Maximal grid intervals on which the reflected path is positive, delimited
// by its zeros; a trailing incomplete excursion is included with its
// truncated length and flagged.
ExcursionLengths excursion_lengths(const GridPath& reflected, int m);

struct GammaSample {
    std::vector<std::vector<double>> lengths;  // per trial, ordered decreasing
    double truncated_fraction = 0.0;           // trials whose longest excursion touched smax
};

GammaSample sample_gamma(int d, double lambda, double s_max, double ds, std::uint64_t trials,
                         int m, Rng& rng);

}  // namespace percolab
