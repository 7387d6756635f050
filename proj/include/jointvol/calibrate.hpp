#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "jointvol/black_scholes.hpp"
#include "jointvol/quote.hpp"
#include "jointvol/root_find.hpp"

namespace jointvol {

// Quote price sits on or outside its static no-arbitrage bounds at the
// requested rate.
struct PriceOutOfBounds : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The matching parameter lies outside the configured search bracket.
struct BracketExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SolverConfig {
    Interval sigma_bracket{1e-8, 10.0};
    Interval rho_bracket{-1.0, 2.0};
    double price_tol = 1e-10;   // absolute tolerance on price residuals
    int max_iter = 200;
    int outer_scan_points = 64;

    void validate() const {
        if (sigma_bracket.empty() || !(sigma_bracket.lo > 0.0))
            throw std::invalid_argument("solver: sigma bracket must be positive and nonempty");
        if (rho_bracket.empty())
            throw std::invalid_argument("solver: rho bracket must be nonempty");
        if (!(price_tol > 0.0))
            throw std::invalid_argument("solver: price_tol must be positive");
        if (max_iter < 1 || outer_scan_points < 2)
            throw std::invalid_argument("solver: iteration/scan counts too small");
    }
};

// One root of the outer scalar equation, with the re-priced residuals of
// both quotes at that candidate.
struct RootCandidate {
    double sigma;
    double rho;
    double residual1;
    double residual2;
};

struct ImpliedPair {
    SolveStatus status = SolveStatus::NoRoot;
    double sigma_imp = std::numeric_limits<double>::quiet_NaN();
    double rho_imp = std::numeric_limits<double>::quiet_NaN();
    std::array<double, 2> residuals{std::numeric_limits<double>::quiet_NaN(),
                                    std::numeric_limits<double>::quiet_NaN()};
    int iterations = 0;                        // inner + outer solver iterations
    std::vector<RootCandidate> bracket_report; // every root located by the outer scan
};

// Static no-arbitrage bounds for a quote at a fixed rate.
// Call: max(0, x - K e^{-rho tau}) < P < x.  Put: mirror image.
struct PriceBounds {
    double lower;
    double upper;
};

inline PriceBounds price_bounds(const OptionQuote& q, double spot, double rho) {
    const double bond = q.strike * std::exp(-rho * q.tau);
    if (q.kind == OptionKind::Call)
        return {std::max(0.0, spot - bond), spot};
    return {std::max(0.0, bond - spot), bond};
}

// Subset of rho_bracket on which the quote lies strictly inside its static
// bounds. Both cuts are closed-form: the bound crossing solves
// K e^{-rho tau} = c for the relevant constant c. Empty is a value here,
// not an error.
inline Interval check_arbitrage_box(const OptionQuote& q, double spot,
                                    Interval rho_bracket) {
    q.validate();
    if (!(spot > 0.0)) throw std::invalid_argument("check_arbitrage_box: spot must be positive");

    Interval box = rho_bracket;
    const auto shrink = [](double cut) { return 1e-12 * (1.0 + std::abs(cut)); };
    if (q.kind == OptionKind::Call) {
        if (q.price >= spot) return {0.0, 0.0};  // upper bound violated everywhere
        if (spot - q.price > 0.0) {
            // need K e^{-rho tau} > spot - P, i.e. rho below the cut
            const double cut = std::log(q.strike / (spot - q.price)) / q.tau;
            box.hi = std::min(box.hi, cut - shrink(cut));
        }
    } else {
        // upper bound: P < K e^{-rho tau}  =>  rho below the cut
        const double hi_cut = std::log(q.strike / q.price) / q.tau;
        box.hi = std::min(box.hi, hi_cut - shrink(hi_cut));
        // lower bound: K e^{-rho tau} - spot < P  =>  rho above the cut
        const double lo_cut = std::log(q.strike / (q.price + spot)) / q.tau;
        box.lo = std::max(box.lo, lo_cut + shrink(lo_cut));
    }
    if (box.empty()) return {box.lo, box.lo};
    return box;
}

namespace detail {

// Conditional implied volatility: solve bs_price(sigma) = P at a fixed rate.
// Vega-accelerated Newton inside the bisection bracket; convergence is on the
// price residual. Returns iteration count for the caller's accounting.
inline RootResult solve_sigma(const OptionQuote& q, double spot, double rho,
                              const SolverConfig& cfg) {
    const PriceBounds bounds = price_bounds(q, spot, rho);
    if (!(q.price > bounds.lower && q.price < bounds.upper))
        throw PriceOutOfBounds("quote price outside static bounds at rho=" +
                               std::to_string(rho));

    const auto residual = [&](double sigma) {
        return bs_price(q.kind, BsInputs{spot, q.strike, q.tau, sigma, rho}) - q.price;
    };
    const auto slope = [&](double sigma) {
        return vega(BsInputs{spot, q.strike, q.tau, sigma, rho});
    };

    const double f_lo = residual(cfg.sigma_bracket.lo);
    if (f_lo > 0.0)
        throw BracketExhausted("implied vol below sigma bracket");
    const double f_hi = residual(cfg.sigma_bracket.hi);
    if (f_hi < 0.0)
        throw BracketExhausted("implied vol above sigma bracket");

    // At-the-money-forward seed, clamped into the bracket.
    const double log_fwd_moneyness =
        std::log(spot / q.strike) + rho * q.tau;
    double seed = std::sqrt(2.0 * std::abs(log_fwd_moneyness) / q.tau);
    if (!(seed > cfg.sigma_bracket.lo)) seed = 0.2;

    RootResult r = find_root_newton(residual, slope, cfg.sigma_bracket.lo,
                                    cfg.sigma_bracket.hi, f_lo, f_hi, seed,
                                    cfg.price_tol, cfg.max_iter);
    if (!r.converged)
        throw BracketExhausted("implied vol iteration limit reached");
    return r;
}

} // namespace detail

// Standard (conditional) implied volatility under an assumed rate.
inline double implied_vol_given_rho(const OptionQuote& q, double spot, double rho,
                                    const SolverConfig& cfg = {}) {
    q.validate();
    cfg.validate();
    if (!(spot > 0.0)) throw std::invalid_argument("implied_vol_given_rho: spot must be positive");
    return detail::solve_sigma(q, spot, rho, cfg).root;
}

// Jointly implied (sigma, rho) from two quotes with a common expiry.
//
// Nested scheme: the inner solve produces the conditional implied volatility
// sigma_1(K1 | rho) of the first quote, the outer scan locates every zero of
//   g(rho) = bs_price(sigma_1(K1 | rho), rho, K2) - P2
// over the admissible rho interval. Exactly one refined root converges;
// several are reported as MultipleRoots with all candidates, none silently
// picked.
inline ImpliedPair implied_pair(const OptionQuote& q1, const OptionQuote& q2,
                                double spot, const SolverConfig& cfg = {}) {
    q1.validate();
    q2.validate();
    cfg.validate();
    if (!(spot > 0.0)) throw std::invalid_argument("implied_pair: spot must be positive");
    if (q1.tau != q2.tau)
        throw std::invalid_argument("implied_pair: quotes must share an expiry");
    if (q1.strike == q2.strike && q1.kind == q2.kind)
        throw IdenticalStrikes("implied_pair: strikes must differ for same-kind quotes");

    ImpliedPair out;
    const Interval box = intersect(check_arbitrage_box(q1, spot, cfg.rho_bracket),
                                   check_arbitrage_box(q2, spot, cfg.rho_bracket));
    if (box.empty()) return out;  // NoRoot: no admissible rho at all

    int inner_iterations = 0;
    int inner_failures = 0;
    const auto outer_residual = [&](double rho) -> std::optional<double> {
        try {
            const RootResult inner = detail::solve_sigma(q1, spot, rho, cfg);
            inner_iterations += inner.iterations;
            const double p2 =
                bs_price(q2.kind, BsInputs{spot, q2.strike, q2.tau, inner.root, rho});
            return p2 - q2.price;
        } catch (const PriceOutOfBounds&) {
            ++inner_failures;
            return std::nullopt;
        } catch (const BracketExhausted&) {
            ++inner_failures;
            return std::nullopt;
        }
    };

    const ScanReport scan = scan_and_refine(outer_residual, box, cfg.outer_scan_points,
                                            cfg.price_tol, cfg.max_iter);
    out.iterations = inner_iterations + scan.iterations;

    for (const RootResult& r : scan.roots) {
        const RootResult inner = detail::solve_sigma(q1, spot, r.root, cfg);
        out.iterations += inner.iterations;
        out.bracket_report.push_back(
            RootCandidate{inner.root, r.root, inner.f_root, r.f_root});
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
    const RootCandidate& c = out.bracket_report.front();
    out.status = SolveStatus::Converged;
    out.sigma_imp = c.sigma;
    out.rho_imp = c.rho;
    out.residuals = {c.residual1, c.residual2};
    return out;
}

// Spot-free variant: prices and strikes divided by the current stock price.
// By homogeneity, equivalent to implied_pair at any spot S with P_i = G_i*S,
// K_i = kappa_i*S.
inline ImpliedPair implied_pair_normalized(double g1, double g2, double kappa1,
                                           double kappa2, double tau,
                                           const SolverConfig& cfg = {},
                                           OptionKind kind1 = OptionKind::Call,
                                           OptionKind kind2 = OptionKind::Call) {
    return implied_pair(OptionQuote{kind1, kappa1, tau, g1},
                        OptionQuote{kind2, kappa2, tau, g2}, 1.0, cfg);
}

// Three-expiry system: (sigma2, rho) from the two quotes at the longer
// expiry, then sigma1 from the shorter quote at the already-implied rho.
// rho is one constant annualized rate discounting both horizons.
struct TermStructureTriple {
    SolveStatus status = SolveStatus::NoRoot;
    double sigma1 = std::numeric_limits<double>::quiet_NaN();
    double sigma2 = std::numeric_limits<double>::quiet_NaN();
    double rho = std::numeric_limits<double>::quiet_NaN();
    std::array<double, 3> residuals{std::numeric_limits<double>::quiet_NaN(),
                                    std::numeric_limits<double>::quiet_NaN(),
                                    std::numeric_limits<double>::quiet_NaN()};
    int iterations = 0;
    std::vector<RootCandidate> bracket_report;
};

inline TermStructureTriple term_structure_triple(const OptionQuote& q1,
                                                 const OptionQuote& q2,
                                                 const OptionQuote& q3, double spot,
                                                 const SolverConfig& cfg = {}) {
    q1.validate();
    if (!(q1.tau < q2.tau))
        throw std::invalid_argument("term_structure_triple: requires tau1 < tau2");

    TermStructureTriple out;
    const ImpliedPair far = implied_pair(q2, q3, spot, cfg);
    out.status = far.status;
    out.iterations = far.iterations;
    out.bracket_report = far.bracket_report;
    if (far.status != SolveStatus::Converged) return out;

    out.sigma2 = far.sigma_imp;
    out.rho = far.rho_imp;
    out.residuals[1] = far.residuals[0];
    out.residuals[2] = far.residuals[1];
    try {
        const RootResult near = detail::solve_sigma(q1, spot, far.rho_imp, cfg);
        out.iterations += near.iterations;
        out.sigma1 = near.root;
        out.residuals[0] = near.f_root;
    } catch (const PriceOutOfBounds&) {
        out.status = SolveStatus::InnerFailure;
    } catch (const BracketExhausted&) {
        out.status = SolveStatus::InnerFailure;
    }
    return out;
}

} // namespace jointvol
