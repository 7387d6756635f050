#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "jointvol/black_scholes.hpp"
#include "jointvol/rng.hpp"

namespace jointvol {

// One piece of a piecewise-constant (sigma, r) curve.
struct PathSegment {
    double dt;     // duration in years, > 0
    double sigma;  // >= 0
    double rate;
};

// Deterministic piecewise-constant volatility and rate curves on [0, tau].
struct PathSpec {
    double spot = 1.0;
    std::vector<PathSegment> segments;

    double tau() const {
        double total = 0.0;
        for (const PathSegment& s : segments) total += s.dt;
        return total;
    }

    // Cumulative segment endpoints, 0 excluded; the last entry equals tau().
    std::vector<double> breakpoints() const {
        std::vector<double> t;
        t.reserve(segments.size());
        double acc = 0.0;
        for (const PathSegment& s : segments) {
            acc += s.dt;
            t.push_back(acc);
        }
        return t;
    }

    void validate() const {
        if (!(spot > 0.0)) throw std::invalid_argument("path spec: spot must be positive");
        if (segments.empty())
            throw std::invalid_argument("path spec: at least one segment required");
        for (const PathSegment& s : segments) {
            if (!(s.dt > 0.0))
                throw std::invalid_argument("path spec: segment durations must be positive");
            if (!(s.sigma >= 0.0))
                throw std::invalid_argument("path spec: sigmas must be non-negative");
        }
    }
};

struct AveragedParams {
    double variance;  // v = (1/tau) * integral of sigma(s)^2
    double rate;      // rho = (1/tau) * integral of r(s)
};

// Time averages of sigma^2 and r; exact sums, no quadrature.
inline AveragedParams averaged_params(const PathSpec& spec) {
    spec.validate();
    double var_integral = 0.0;
    double rate_integral = 0.0;
    for (const PathSegment& s : spec.segments) {
        var_integral += s.sigma * s.sigma * s.dt;
        rate_integral += s.rate * s.dt;
    }
    const double tau = spec.tau();
    return {var_integral / tau, rate_integral / tau};
}

struct McEstimate {
    double mean;
    double std_error;
    std::int64_t n_paths;
    std::uint64_t seed;
};

namespace detail {

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

} // namespace detail

// Discounted expected payoff by exact terminal sampling: the terminal price
// composes one lognormal increment per segment, so there is no
// time-discretization bias. Discounting is deterministic. Paths are
// independent counter-based substreams indexed by path number and summed in
// fixed blocks, so the estimate does not depend on evaluation order.
inline McEstimate mc_discounted_payoff(const PathSpec& spec, OptionKind kind,
                                       double strike, std::int64_t n_paths,
                                       std::uint64_t seed, bool antithetic = false) {
    spec.validate();
    if (!(strike > 0.0))
        throw std::invalid_argument("mc_discounted_payoff: strike must be positive");
    if (n_paths < 100)
        throw std::invalid_argument("mc_discounted_payoff: need at least 100 paths");

    const std::size_t n_seg = spec.segments.size();
    std::vector<double> drift(n_seg), vol_step(n_seg);
    double rate_integral = 0.0;
    for (std::size_t k = 0; k < n_seg; ++k) {
        const PathSegment& s = spec.segments[k];
        drift[k] = (s.rate - 0.5 * s.sigma * s.sigma) * s.dt;
        vol_step[k] = s.sigma * std::sqrt(s.dt);
        rate_integral += s.rate * s.dt;
    }
    const double discount = std::exp(-rate_integral);

    constexpr std::int64_t block = 4096;
    detail::KahanSum sum, sum_sq;
    for (std::int64_t begin = 0; begin < n_paths; begin += block) {
        const std::int64_t end = std::min(begin + block, n_paths);
        double block_sum = 0.0, block_sum_sq = 0.0;
        for (std::int64_t path = begin; path < end; ++path) {
            double log_ret_pos = 0.0, log_ret_neg = 0.0;
            for (std::size_t k = 0; k < n_seg; ++k) {
                const double z =
                    counter_normal(seed, static_cast<std::uint64_t>(path), k);
                log_ret_pos += drift[k] + vol_step[k] * z;
                log_ret_neg += drift[k] - vol_step[k] * z;
            }
            double value =
                discount * payoff(kind, spec.spot * std::exp(log_ret_pos), strike);
            if (antithetic) {
                const double mirrored =
                    discount * payoff(kind, spec.spot * std::exp(log_ret_neg), strike);
                value = 0.5 * (value + mirrored);
            }
            block_sum += value;
            block_sum_sq += value * value;
        }
        sum.add(block_sum);
        sum_sq.add(block_sum_sq);
    }

    const double n = static_cast<double>(n_paths);
    const double mean = sum.sum / n;
    const double variance =
        std::max(0.0, (sum_sq.sum - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(variance / n), n_paths, seed};
}

struct Lemma1Report {
    McEstimate mc;
    double analytic;
    double z_score;
};

// The discounted Q-expectation of the payoff against the closed-form price
// at the averaged parameters (sqrt(v), rho). Agreement to within a few
// standard errors is the numerical content of the averaging lemma.
inline Lemma1Report lemma1_check(const PathSpec& spec, OptionKind kind, double strike,
                                 std::int64_t n_paths, std::uint64_t seed,
                                 bool antithetic = false) {
    const McEstimate mc =
        mc_discounted_payoff(spec, kind, strike, n_paths, seed, antithetic);
    const AveragedParams avg = averaged_params(spec);
    const double analytic = bs_price(
        kind, BsInputs{spec.spot, strike, spec.tau(), std::sqrt(avg.variance), avg.rate});
    double z;
    if (mc.std_error > 0.0) {
        z = (mc.mean - analytic) / mc.std_error;
    } else {
        // Degenerate (zero-variance) estimate: agreement is exact or absent.
        const double scale = std::max(1.0, std::abs(analytic));
        z = (std::abs(mc.mean - analytic) <= 1e-12 * scale)
                ? 0.0
                : std::numeric_limits<double>::infinity();
    }
    return {mc, analytic, z};
}

} // namespace jointvol
