#pragma once

#include <cstdint>
#include <vector>

#include "percolab/error.hpp"
#include "percolab/rng.hpp"

namespace percolab {

// Integer-valued step distribution with minimum value -1, the substrate for
// the hitting-time and tilting machinery. Walks built from such laws cannot
// jump over 0 on the way down.
class IncrementLaw {
public:
    struct Atom {
        int value;
        double prob;
    };

    explicit IncrementLaw(std::vector<Atom> atoms);

    const std::vector<Atom>& atoms() const { return atoms_; }
    double mean() const;
    double variance() const;
    int min_value() const { return atoms_.front().value; }
    int max_value() const { return atoms_.back().value; }
    bool has_both_signs() const;

    int sample(Rng& rng) const;

private:
    std::vector<Atom> atoms_;  // sorted by value
    std::vector<double> cum_;
};

// Bin(d-1, p) - 1: the one-vertex exploration increment on a d-regular graph.
IncrementLaw binomial_shift_law(int d, double p);

// d-2 with probability p, -1 otherwise: the coupling law used inside the
// scaling window.
IncrementLaw two_point_law(int d, double p);

// d-2 w.p. (1-(2d-3)e)/(d-1), d-3 w.p. 2e, -1 w.p. (d-2-e)/(d-1): the
// remainder-graph coupling law.
IncrementLaw three_point_law(int d, double eps);

// phi(theta) = E e^{theta beta} and its derivative E[beta e^{theta beta}].
double mgf(const IncrementLaw& law, double theta);
double tilt_derivative(const IncrementLaw& law, double theta);

// Root of E[beta e^{theta beta}] = 0. Requires atoms of both signs.
double solve_theta0(const IncrementLaw& law);

// Exact hitting-time distribution P(tau = l), l <= max_steps, for the walk
// W_t = w0 + sum beta_i stopped at 0, by forward dynamic programming over
// walk values. Index 0 of the result is unused (tau >= 1).
std::vector<double> tau_tail_dp(const IncrementLaw& law, int w0, std::uint64_t max_steps);

struct TauTailFit {
    double constant = 0.0;    // fitted c in P(tau=l) ~ c l^{-3/2} phi(theta0)^l
    double theta0 = 0.0;
    double phi0 = 0.0;
    double ratio_max = 0.0;   // max over the window of exact/fitted
    double ratio_min = 0.0;   // min over the window of exact/fitted
    std::uint64_t window_lo = 0;
    std::uint64_t window_hi = 0;
    std::uint64_t points_used = 0;  // lattice laws have zero-mass l, skipped
    double e_tau_sq = 0.0;    // sum l^2 P(tau=l) over the DP range
    double total_mass = 0.0;
};

TauTailFit tau_tail_fit(const IncrementLaw& law, const std::vector<double>& dp_pmf,
                        std::uint64_t window_lo = 100, std::uint64_t window_hi = 2000);

enum class TiltSide {
    negative,  // requires E e^{-c beta} >= 1; bound (1-e^{-c w0})/(1-e^{-c h})
    positive,  // requires E e^{ c beta} <= 1; bound (e^{c w0}-1)/(e^{c h}-1)
};

// Optional-stopping escape bound: P(walk reaches h before 0) <= returned value.
double hitting_bound(const IncrementLaw& law, int w0, int h, double c, TiltSide side);

// Monte Carlo companions for the bounds above.
double simulate_escape_probability(const IncrementLaw& law, int w0, int h,
                                   std::uint64_t trials, Rng& rng);
// Hitting time of 0, capped: returns min(tau, cap+1).
std::uint64_t simulate_tau(const IncrementLaw& law, int w0, std::uint64_t cap, Rng& rng);

// Number of rotations j of the sequence (summing to -d) whose proper-prefix
// cyclic partial sums all exceed -d. Always in [1, d].
int spitzer_count(const std::vector<int>& a, int d);

// Subcritical size scale 2 eps^{-2} ln(n eps^3). Requires n eps^3 > 1.
double psi(double n, double eps);

double predict_subcritical(double n, int d, double eps);  // (d-2)/(d-1) * psi
double predict_giant(double n, int d, double eps);        // 2 d eps n / (d-2)
double predict_damage(double n, int d, double eps);       // 2 d eps n
double predict_second(double n, int d, double eps);       // 2(d-2)/(d-1) eps^-2 ln(n eps^3)
double p_from_lambda(double n, int d, double lambda);     // (1 + lambda n^{-1/3})/(d-1)

}  // namespace percolab
