#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "jointvol/quote.hpp"
#include "jointvol/rng.hpp"
#include "jointvol/root_find.hpp"

namespace jointvol {

// Discrete-time lattice: S(t+1) = rho_step * S(t) * zeta(t+1) with
// zeta in {1-eps, 1/(1-eps)}.
struct BinomialModel {
    double rho_step;  // gross per-period risk-free return, >= 1
    double eps;       // move-range parameter, in (0,1)
    int periods;      // N >= 1
    double spot;      // S0 > 0

    void validate() const {
        if (!(rho_step >= 1.0))
            throw std::invalid_argument("binomial: rho_step must be >= 1");
        if (!(eps > 0.0 && eps < 1.0))
            throw std::invalid_argument("binomial: eps must lie in (0,1)");
        if (periods < 1)
            throw std::invalid_argument("binomial: periods must be >= 1");
        if (!(spot > 0.0))
            throw std::invalid_argument("binomial: spot must be positive");
    }
};

// Up-move probability that makes E[zeta] = 1, i.e. the discounted stock a
// martingale: q/(1-eps) + (1-q)(1-eps) = 1  =>  q = (1-eps)/(2-eps).
inline double risk_neutral_prob(double eps) {
    if (!(eps > 0.0 && eps < 1.0))
        throw std::domain_error("risk_neutral_prob: eps must lie in (0,1)");
    return (1.0 - eps) / (2.0 - eps);
}

namespace detail {

// Recombining-lattice evaluation over the N+1 terminal nodes. With j up
// moves the terminal price is S0 rho^N (1-eps)^(N-2j). Coefficients are kept
// exact (integer recurrence) up to N=50; beyond that everything moves to log
// space, which holds to ~1e-11 relative at N=10^4 and never over/underflows
// because only discounted terms are exponentiated.
inline double lattice_price(const BinomialModel& m, OptionKind kind, double strike) {
    const int n = m.periods;
    const double q = risk_neutral_prob(m.eps);

    if (n <= 50) {
        const double growth = std::pow(m.rho_step, n);
        double coeff = 1.0;  // C(n, j), exact integers in this range
        double sum = 0.0;
        for (int j = 0; j <= n; ++j) {
            if (j > 0) coeff = coeff * (n - j + 1) / j;
            const double weight =
                coeff * std::pow(q, j) * std::pow(1.0 - q, n - j);
            const double terminal =
                m.spot * growth * std::pow(1.0 - m.eps, n - 2 * j);
            sum += weight * payoff(kind, terminal, strike);
        }
        return sum / growth;
    }

    const double log_q = std::log(q);
    const double log_1q = std::log1p(-q);
    const double log_down = std::log1p(-m.eps);
    const double log_rho_n = n * std::log(m.rho_step);
    const double log_spot = std::log(m.spot);
    const double log_strike = std::log(strike);
    const double lg_n1 = std::lgamma(n + 1.0);

    double sum = 0.0;
    for (int j = 0; j <= n; ++j) {
        const double log_w = lg_n1 - std::lgamma(j + 1.0) - std::lgamma(n - j + 1.0) +
                             j * log_q + (n - j) * log_1q;
        const double log_s = log_spot + log_rho_n + (n - 2.0 * j) * log_down;
        if (kind == OptionKind::Call) {
            if (log_s <= log_strike) continue;
            // discounted:  w * (S - K) / rho^N  =  e^{lw+ls-lrho} (1 - K/S)
            sum += std::exp(log_w + log_s - log_rho_n) *
                   (1.0 - std::exp(log_strike - log_s));
        } else {
            if (log_s >= log_strike) continue;
            sum += std::exp(log_w - log_rho_n) * (strike - std::exp(log_s));
        }
    }
    return sum;
}

} // namespace detail

// Replication value of the claim rho^{-N} F(S(N)) under the martingale
// up-probability q.
inline double binomial_price(const BinomialModel& model, OptionKind kind,
                             double strike) {
    model.validate();
    if (!(strike > 0.0))
        throw std::invalid_argument("binomial_price: strike must be positive");
    if (model.periods > 10000)
        throw std::overflow_error("binomial_price: periods exceed the overflow guard (10^4)");
    return detail::lattice_price(model, kind, strike);
}

struct DiscreteSolverConfig {
    Interval rho_bracket{1.0, 1.5};
    Interval eps_bracket{1e-6, 0.99};
    double price_tol = 1e-10;
    int max_iter = 200;
    int outer_scan_points = 64;

    void validate() const {
        if (rho_bracket.empty() || !(rho_bracket.lo >= 1.0))
            throw std::invalid_argument("binomial solver: rho bracket must start at >= 1");
        if (eps_bracket.empty() || !(eps_bracket.lo > 0.0) || !(eps_bracket.hi < 1.0))
            throw std::invalid_argument("binomial solver: eps bracket must lie inside (0,1)");
        if (!(price_tol > 0.0))
            throw std::invalid_argument("binomial solver: price_tol must be positive");
        if (max_iter < 1 || outer_scan_points < 2)
            throw std::invalid_argument("binomial solver: iteration/scan counts too small");
    }
};

struct RhoEpsCandidate {
    double rho;
    double eps;
    double residual1;
    double residual2;
};

struct ImpliedRhoEps {
    SolveStatus status = SolveStatus::NoRoot;
    double rho = std::numeric_limits<double>::quiet_NaN();
    double eps = std::numeric_limits<double>::quiet_NaN();
    std::array<double, 2> residuals{std::numeric_limits<double>::quiet_NaN(),
                                    std::numeric_limits<double>::quiet_NaN()};
    int iterations = 0;
    std::vector<RhoEpsCandidate> bracket_report;
};

namespace detail {

// Inner solve of the nested scheme: eps matching the first price at a fixed
// rho. The lattice price is strictly increasing in eps (widening the move
// range is a mean-preserving spread of the terminal law), so the bracketed
// solve is unique when it exists.
inline std::optional<RootResult> solve_eps(double price, OptionKind kind, double strike,
                                           double spot, int periods, double rho,
                                           const DiscreteSolverConfig& cfg,
                                           int* iterations) {
    const auto residual = [&](double eps) {
        return lattice_price(BinomialModel{rho, eps, periods, spot}, kind, strike) -
               price;
    };
    const double f_lo = residual(cfg.eps_bracket.lo);
    const double f_hi = residual(cfg.eps_bracket.hi);
    if (f_lo > 0.0 || f_hi < 0.0) return std::nullopt;  // price outside lattice bounds
    RootResult r = find_root_bracketed(residual, cfg.eps_bracket.lo, cfg.eps_bracket.hi,
                                       f_lo, f_hi, cfg.price_tol, cfg.max_iter);
    *iterations += r.iterations;
    if (!r.converged) return std::nullopt;
    return r;
}

} // namespace detail

// Implied (rho, eps) from two lattice prices at different strikes; the same
// nested scheme as the continuous calibration, with eps in the volatility
// role and rho in the rate role.
inline ImpliedRhoEps implied_rho_eps(double price1, double price2, double strike1,
                                     double strike2, double spot, int periods,
                                     const DiscreteSolverConfig& cfg = {},
                                     OptionKind kind1 = OptionKind::Call,
                                     OptionKind kind2 = OptionKind::Call) {
    cfg.validate();
    if (strike1 == strike2 && kind1 == kind2)
        throw IdenticalStrikes("implied_rho_eps: strikes must differ for same-kind prices");
    if (!(strike1 > 0.0 && strike2 > 0.0))
        throw std::invalid_argument("implied_rho_eps: strikes must be positive");
    if (!(price1 > 0.0 && price2 > 0.0))
        throw std::invalid_argument("implied_rho_eps: prices must be positive");
    if (!(spot > 0.0))
        throw std::invalid_argument("implied_rho_eps: spot must be positive");
    if (periods < 1 || periods > 10000)
        throw std::invalid_argument("implied_rho_eps: periods out of range");

    ImpliedRhoEps out;
    int inner_iterations = 0;
    const auto outer_residual = [&](double rho) -> std::optional<double> {
        const std::optional<RootResult> inner = detail::solve_eps(
            price1, kind1, strike1, spot, periods, rho, cfg, &inner_iterations);
        if (!inner) return std::nullopt;
        return detail::lattice_price(BinomialModel{rho, inner->root, periods, spot},
                                     kind2, strike2) -
               price2;
    };

    const ScanReport scan = scan_and_refine(outer_residual, cfg.rho_bracket,
                                            cfg.outer_scan_points, cfg.price_tol,
                                            cfg.max_iter);
    out.iterations = inner_iterations + scan.iterations;

    for (const RootResult& r : scan.roots) {
        const std::optional<RootResult> inner = detail::solve_eps(
            price1, kind1, strike1, spot, periods, r.root, cfg, &out.iterations);
        if (!inner) continue;
        out.bracket_report.push_back(
            RhoEpsCandidate{r.root, inner->root, inner->f_root, r.f_root});
    }

    if (out.bracket_report.empty()) {
        out.status = (scan.evaluated == 0) ? SolveStatus::InnerFailure
                                           : SolveStatus::NoRoot;
        return out;
    }
    if (out.bracket_report.size() > 1) {
        out.status = SolveStatus::MultipleRoots;
        return out;
    }
    const RhoEpsCandidate& c = out.bracket_report.front();
    out.status = SolveStatus::Converged;
    out.rho = c.rho;
    out.eps = c.eps;
    out.residuals = {c.residual1, c.residual2};
    return out;
}

// Terminal prices of the perturbed model S(t+1) = rho S(t) zeta(t+1) xi(t+1),
// where xi is uniform on [1-eps, 1/(1-eps)]. zeta is drawn with the
// martingale probability q unless an explicit up-probability is supplied.
// Counter-based draws make every path a fixed function of (seed, path index).
inline std::vector<double> perturbed_sample_paths(
    const BinomialModel& model, std::int64_t n_paths, std::uint64_t seed,
    std::optional<double> up_probability = std::nullopt) {
    model.validate();
    if (n_paths < 1)
        throw std::invalid_argument("perturbed_sample_paths: need at least one path");
    const double q = up_probability ? *up_probability : risk_neutral_prob(model.eps);
    if (!(q > 0.0 && q < 1.0))
        throw std::invalid_argument("perturbed_sample_paths: up probability must lie in (0,1)");

    const double down = 1.0 - model.eps;
    const double up = 1.0 / down;
    std::vector<double> terminal(static_cast<std::size_t>(n_paths));
    for (std::int64_t path = 0; path < n_paths; ++path) {
        double s = model.spot;
        for (int t = 0; t < model.periods; ++t) {
            const double u_move =
                counter_uniform(seed, static_cast<std::uint64_t>(path), 2 * t);
            const double u_xi =
                counter_uniform(seed, static_cast<std::uint64_t>(path), 2 * t + 1);
            const double zeta = (u_move < q) ? up : down;
            const double xi = down + u_xi * (up - down);
            s *= model.rho_step * zeta * xi;
        }
        terminal[static_cast<std::size_t>(path)] = s;
    }
    return terminal;
}

} // namespace jointvol
