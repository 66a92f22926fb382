#include "percolab/walk_theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace percolab {

IncrementLaw::IncrementLaw(std::vector<Atom> atoms) {
    for (const auto& a : atoms) {
        if (a.prob < 0.0) throw Error(ErrorCode::invalid_input, "negative atom probability");
        if (a.value < -1) throw Error(ErrorCode::invalid_input, "atom value below -1");
        if (a.prob > 0.0) atoms_.push_back(a);
    }
    if (atoms_.empty()) throw Error(ErrorCode::invalid_input, "law needs at least one atom");
    std::sort(atoms_.begin(), atoms_.end(), [](const Atom& x, const Atom& y) { return x.value < y.value; });
    double total = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        if (i > 0 && atoms_[i].value == atoms_[i - 1].value)
            throw Error(ErrorCode::invalid_input, "duplicate atom value");
        total += atoms_[i].prob;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw Error(ErrorCode::invalid_input, "atom probabilities must sum to 1");
    cum_.resize(atoms_.size());
    double run = 0.0;
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
        run += atoms_[i].prob;
        cum_[i] = run;
    }
    cum_.back() = 1.0;
}

double IncrementLaw::mean() const {
    double m = 0.0;
    for (const auto& a : atoms_) m += a.prob * a.value;
    return m;
}

double IncrementLaw::variance() const {
    double m = mean(), v = 0.0;
    for (const auto& a : atoms_) v += a.prob * (a.value - m) * (a.value - m);
    return v;
}

bool IncrementLaw::has_both_signs() const {
    return atoms_.front().value < 0 && atoms_.back().value > 0;
}

int IncrementLaw::sample(Rng& rng) const {
    double u = uniform_unit(rng);
    for (std::size_t i = 0; i + 1 < cum_.size(); ++i)
        if (u < cum_[i]) return atoms_[i].value;
    return atoms_.back().value;
}

IncrementLaw binomial_shift_law(int d, double p) {
    if (d < 3) throw Error(ErrorCode::invalid_input, "d must be >= 3");
    if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::invalid_input, "p must lie in (0, 1)");
    std::vector<IncrementLaw::Atom> atoms;
    double coeff = 1.0;  // C(d-1, k), built incrementally
    for (int k = 0; k <= d - 1; ++k) {
        double prob = coeff * std::pow(p, k) * std::pow(1.0 - p, d - 1 - k);
        atoms.push_back({k - 1, prob});
        coeff = coeff * (d - 1 - k) / (k + 1);
    }
    return IncrementLaw(std::move(atoms));
}

IncrementLaw two_point_law(int d, double p) {
    if (d < 3) throw Error(ErrorCode::invalid_input, "d must be >= 3");
    if (!(p > 0.0 && p < 1.0)) throw Error(ErrorCode::invalid_input, "p must lie in (0, 1)");
    return IncrementLaw({{d - 2, p}, {-1, 1.0 - p}});
}

IncrementLaw three_point_law(int d, double eps) {
    if (d < 3) throw Error(ErrorCode::invalid_input, "d must be >= 3");
    double p_top = (1.0 - (2.0 * d - 3.0) * eps) / (d - 1);
    double p_mid = 2.0 * eps;
    double p_bot = (d - 2.0 - eps) / (d - 1);
    if (eps < 0.0 || p_top <= 0.0 || p_mid >= 1.0 || p_bot <= 0.0 || p_bot >= 1.0)
        throw Error(ErrorCode::invalid_input, "eps outside the valid range for three_point_law");
    return IncrementLaw({{d - 2, p_top}, {d - 3, p_mid}, {-1, p_bot}});
}

double mgf(const IncrementLaw& law, double theta) {
    double s = 0.0;
    for (const auto& a : law.atoms()) s += a.prob * std::exp(theta * a.value);
    return s;
}

double tilt_derivative(const IncrementLaw& law, double theta) {
    double s = 0.0;
    for (const auto& a : law.atoms()) s += a.prob * a.value * std::exp(theta * a.value);
    return s;
}

namespace {

double tilt_second_derivative(const IncrementLaw& law, double theta) {
    double s = 0.0;
    for (const auto& a : law.atoms())
        s += a.prob * static_cast<double>(a.value) * a.value * std::exp(theta * a.value);
    return s;
}

}  // namespace

double solve_theta0(const IncrementLaw& law) {
    if (!law.has_both_signs())
        throw Error(ErrorCode::no_root, "tilt root needs atoms of both signs");

    // tilt_derivative is strictly increasing, so bracket then bisect.
    double g0 = tilt_derivative(law, 0.0);
    double lo = 0.0, hi = 0.0;
    if (g0 == 0.0) return 0.0;
    if (g0 < 0.0) {
        hi = 1.0;
        while (tilt_derivative(law, hi) < 0.0) hi *= 2.0;
        lo = 0.0;
    } else {
        lo = -1.0;
        while (tilt_derivative(law, lo) > 0.0) lo *= 2.0;
        hi = 0.0;
    }
    for (int it = 0; it < 200 && hi - lo > 1e-13; ++it) {
        double mid = 0.5 * (lo + hi);
        if (tilt_derivative(law, mid) < 0.0) lo = mid; else hi = mid;
    }
    double theta = 0.5 * (lo + hi);
    double g = tilt_derivative(law, theta);
    double gp = tilt_second_derivative(law, theta);
    if (gp > 0.0) theta -= g / gp;  // one Newton polish
    return theta;
}

std::vector<double> tau_tail_dp(const IncrementLaw& law, int w0, std::uint64_t max_steps) {
    if (w0 < 1) throw Error(ErrorCode::invalid_input, "w0 must be >= 1");
    if (max_steps < 1) throw Error(ErrorCode::invalid_input, "max_steps must be >= 1");

    const int amax = law.max_value();
    // A value above max_steps - t cannot descend to 0 in time (steps >= -1),
    // so the table stays triangular and exact for all l <= max_steps.
    double ops = 0.0;
    for (std::uint64_t t = 0; t < max_steps; ++t) {
        double width = std::min<double>(static_cast<double>(w0) + static_cast<double>(t) * std::max(amax, 0),
                                        static_cast<double>(max_steps - t));
        ops += std::max(width, 1.0) * static_cast<double>(law.atoms().size());
    }
    if (ops > 6e9) throw Error(ErrorCode::resource_limit, "tau_tail_dp budget exceeded");

    std::uint64_t cap = std::min<std::uint64_t>(
        max_steps, static_cast<std::uint64_t>(w0) + max_steps * static_cast<std::uint64_t>(std::max(amax, 0)));
    std::vector<double> cur(cap + 2, 0.0), nxt(cap + 2, 0.0);
    cur[static_cast<std::size_t>(std::min<std::uint64_t>(w0, cap))] = (static_cast<std::uint64_t>(w0) <= cap) ? 1.0 : 0.0;
    std::vector<double> pmf(max_steps + 1, 0.0);

    std::uint64_t vmax = static_cast<std::uint64_t>(w0);
    const double p_down = law.atoms().front().value == -1 ? law.atoms().front().prob : 0.0;
    for (std::uint64_t t = 1; t <= max_steps; ++t) {
        pmf[t] = cur[1] * p_down;
        std::uint64_t vlim = std::min<std::uint64_t>(vmax + static_cast<std::uint64_t>(std::max(amax, 0)),
                                                     std::min<std::uint64_t>(cap, max_steps - t + 1));
        std::fill(nxt.begin(), nxt.begin() + static_cast<std::ptrdiff_t>(vlim) + 1, 0.0);
        for (std::uint64_t v = 1; v <= vmax; ++v) {
            double mass = cur[v];
            if (mass == 0.0) continue;
            for (const auto& a : law.atoms()) {
                std::int64_t w = static_cast<std::int64_t>(v) + a.value;
                if (w >= 1 && static_cast<std::uint64_t>(w) <= vlim) nxt[static_cast<std::uint64_t>(w)] += mass * a.prob;
            }
        }
        cur.swap(nxt);
        vmax = vlim;
        if (vmax == 0) break;
    }
    return pmf;
}

TauTailFit tau_tail_fit(const IncrementLaw& law, const std::vector<double>& dp_pmf,
                        std::uint64_t window_lo, std::uint64_t window_hi) {
    TauTailFit fit;
    fit.theta0 = solve_theta0(law);
    fit.phi0 = mgf(law, fit.theta0);
    fit.window_lo = window_lo;
    fit.window_hi = std::min<std::uint64_t>(window_hi, dp_pmf.empty() ? 0 : dp_pmf.size() - 1);

    double log_phi = std::log(fit.phi0);
    double sum_r = 0.0, max_r = -std::numeric_limits<double>::infinity(), min_r = std::numeric_limits<double>::infinity();
    std::uint64_t used = 0;
    for (std::uint64_t l = fit.window_lo; l <= fit.window_hi; ++l) {
        if (dp_pmf[l] <= 0.0) continue;  // lattice laws leave periodic gaps
        double r = std::log(dp_pmf[l]) - (-1.5 * std::log(static_cast<double>(l)) + static_cast<double>(l) * log_phi);
        sum_r += r;
        max_r = std::max(max_r, r);
        min_r = std::min(min_r, r);
        ++used;
    }
    fit.points_used = used;
    if (used > 0) {
        double mean_r = sum_r / static_cast<double>(used);
        fit.constant = std::exp(mean_r);
        fit.ratio_max = std::exp(max_r - mean_r);
        fit.ratio_min = std::exp(min_r - mean_r);
    }
    for (std::uint64_t l = 1; l < dp_pmf.size(); ++l) {
        fit.e_tau_sq += static_cast<double>(l) * static_cast<double>(l) * dp_pmf[l];
        fit.total_mass += dp_pmf[l];
    }
    return fit;
}

double hitting_bound(const IncrementLaw& law, int w0, int h, double c, TiltSide side) {
    if (!(c > 0.0)) throw Error(ErrorCode::invalid_input, "c must be positive");
    if (!(w0 > 0 && h > w0)) throw Error(ErrorCode::invalid_input, "need 0 < w0 < h");
    if (side == TiltSide::negative) {
        if (mgf(law, -c) < 1.0 - 1e-12)
            throw Error(ErrorCode::invalid_input, "E e^{-c beta} >= 1 fails for this c");
        return (1.0 - std::exp(-c * w0)) / (1.0 - std::exp(-c * h));
    }
    if (mgf(law, c) > 1.0 + 1e-12)
        throw Error(ErrorCode::invalid_input, "E e^{c beta} <= 1 fails for this c");
    return std::expm1(c * w0) / std::expm1(c * h);
}

double simulate_escape_probability(const IncrementLaw& law, int w0, int h,
                                   std::uint64_t trials, Rng& rng) {
    if (!(w0 > 0 && h > w0)) throw Error(ErrorCode::invalid_input, "need 0 < w0 < h");
    std::uint64_t escapes = 0;
    for (std::uint64_t i = 0; i < trials; ++i) {
        std::int64_t w = w0;
        while (w > 0 && w < h) w += law.sample(rng);
        if (w >= h) ++escapes;
    }
    return static_cast<double>(escapes) / static_cast<double>(trials);
}

std::uint64_t simulate_tau(const IncrementLaw& law, int w0, std::uint64_t cap, Rng& rng) {
    std::int64_t w = w0;
    for (std::uint64_t t = 1; t <= cap; ++t) {
        w += law.sample(rng);
        if (w == 0) return t;
    }
    return cap + 1;
}

int spitzer_count(const std::vector<int>& a, int d) {
    if (d < 1) throw Error(ErrorCode::invalid_input, "d must be >= 1");
    std::int64_t total = 0;
    for (int x : a) total += x;
    if (total != -static_cast<std::int64_t>(d))
        throw Error(ErrorCode::invalid_input, "sequence must sum to -d");

    const std::size_t k = a.size();
    int count = 0;
    for (std::size_t j = 0; j < k; ++j) {
        std::int64_t prefix = 0;
        bool ok = true;
        for (std::size_t l = 0; l + 1 < k; ++l) {
            prefix += a[(j + l) % k];
            if (prefix <= -static_cast<std::int64_t>(d)) { ok = false; break; }
        }
        if (ok) ++count;
    }
    return count;
}

namespace {

void check_regime(double n, int d, double eps) {
    if (d < 3) throw Error(ErrorCode::invalid_input, "d must be >= 3");
    if (!(eps > 0.0) || !(n * eps * eps * eps > 1.0))
        throw Error(ErrorCode::out_of_regime, "need eps > 0 and n eps^3 > 1");
}

}  // namespace

double psi(double n, double eps) {
    if (!(eps > 0.0) || !(n * eps * eps * eps > 1.0))
        throw Error(ErrorCode::out_of_regime, "need eps > 0 and n eps^3 > 1");
    return 2.0 / (eps * eps) * std::log(n * eps * eps * eps);
}

double predict_subcritical(double n, int d, double eps) {
    check_regime(n, d, eps);
    return (d - 2.0) / (d - 1.0) * psi(n, eps);
}

double predict_giant(double n, int d, double eps) {
    check_regime(n, d, eps);
    return 2.0 * d * eps * n / (d - 2.0);
}

double predict_damage(double n, int d, double eps) {
    check_regime(n, d, eps);
    return 2.0 * d * eps * n;
}

double predict_second(double n, int d, double eps) {
    check_regime(n, d, eps);
    return 2.0 * (d - 2.0) / (d - 1.0) / (eps * eps) * std::log(n * eps * eps * eps);
}

double p_from_lambda(double n, int d, double lambda) {
    if (d < 3) throw Error(ErrorCode::invalid_input, "d must be >= 3");
    if (!(n > 0.0)) throw Error(ErrorCode::invalid_input, "n must be positive");
    double p = (1.0 + lambda * std::pow(n, -1.0 / 3.0)) / (d - 1.0);
    if (!(p >= 0.0 && p <= 1.0))
        throw Error(ErrorCode::invalid_input, "lambda places p outside [0, 1]");
    return p;
}

}  // namespace percolab
