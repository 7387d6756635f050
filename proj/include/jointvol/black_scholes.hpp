#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "jointvol/normal.hpp"

namespace jointvol {

enum class OptionKind { Call, Put };

inline const char* to_string(OptionKind kind) {
    return kind == OptionKind::Call ? "call" : "put";
}

// Vanilla payoff F(S,K).
inline double payoff(OptionKind kind, double terminal_spot, double strike) {
    return kind == OptionKind::Call ? std::max(terminal_spot - strike, 0.0)
                                    : std::max(strike - terminal_spot, 0.0);
}

// Inputs whose expiry or volatility make d+/d- undefined, or that violate
// the domain outright (non-positive spot/strike, negative sigma or tau).
struct DegenerateInputs : std::domain_error {
    using std::domain_error::domain_error;
};

struct BsInputs {
    double spot;    // current stock price, > 0
    double strike;  // > 0
    double tau;     // time to expiry in years, >= 0
    double sigma;   // volatility per sqrt(year)
    double rho;     // average forward risk-free rate over the option's life
};

struct DPair {
    double d_plus;
    double d_minus;
};

namespace detail {

inline void check_spot_strike(const BsInputs& in) {
    if (!(in.spot > 0.0)) throw DegenerateInputs("spot must be positive");
    if (!(in.strike > 0.0)) throw DegenerateInputs("strike must be positive");
    if (std::isnan(in.tau) || std::isnan(in.sigma) || std::isnan(in.rho))
        throw DegenerateInputs("NaN pricing input");
}

} // namespace detail

// d+/d- of the Black-Scholes formula. Requires tau > 0 and sigma > 0;
// boundary inputs belong to the intrinsic-value branch of bs_price.
inline DPair d_pair(const BsInputs& in) {
    detail::check_spot_strike(in);
    if (!(in.tau > 0.0) || !(in.sigma > 0.0))
        throw DegenerateInputs("d_pair: requires tau > 0 and sigma > 0");
    const double sqrt_tau = std::sqrt(in.tau);
    const double vol_sqrt_tau = in.sigma * sqrt_tau;
    const double d_plus =
        (std::log(in.spot / in.strike) + in.tau * in.rho) / vol_sqrt_tau +
        0.5 * vol_sqrt_tau;
    return {d_plus, d_plus - vol_sqrt_tau};
}

// Black-Scholes price of a vanilla option. tau = 0 returns intrinsic value;
// sigma = 0 returns the deterministic-forward limit. The put is the call
// shifted by the parity line, so parity holds by construction.
inline double bs_price(OptionKind kind, const BsInputs& in) {
    detail::check_spot_strike(in);
    if (in.tau < 0.0) throw DegenerateInputs("bs_price: negative tau");
    if (in.sigma < 0.0) throw DegenerateInputs("bs_price: negative sigma");

    if (in.tau == 0.0) return payoff(kind, in.spot, in.strike);

    const double bond = in.strike * std::exp(-in.rho * in.tau);
    double call;
    if (in.sigma == 0.0) {
        call = std::max(in.spot - bond, 0.0);
    } else {
        const auto [d_plus, d_minus] = d_pair(in);
        call = in.spot * norm_cdf(d_plus) - bond * norm_cdf(d_minus);
    }
    return kind == OptionKind::Call ? call : call - in.spot + bond;
}

// dPrice/dSigma; identical for calls and puts.
inline double vega(const BsInputs& in) {
    detail::check_spot_strike(in);
    if (!(in.tau > 0.0) || !(in.sigma > 0.0))
        throw DegenerateInputs("vega: requires tau > 0 and sigma > 0");
    const auto [d_plus, d_minus] = d_pair(in);
    (void)d_minus;
    return in.spot * std::sqrt(in.tau) * norm_pdf(d_plus);
}

// Price with the spot normalized to 1 and the strike replaced by moneyness
// kappa = K/S. By homogeneity, bs_price(S, kappa*S, ...) = S * this.
inline double normalized_price(OptionKind kind, double kappa, double tau,
                               double sigma, double rho) {
    return bs_price(kind, BsInputs{1.0, kappa, tau, sigma, rho});
}

} // namespace jointvol
