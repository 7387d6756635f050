#pragma once

#include <cmath>
#include <stdexcept>
#include <utility>
#include <vector>

#include "jointvol/black_scholes.hpp"
#include "jointvol/quote.hpp"

namespace jointvol {

// One (sigma, r) state of the discrete risk-neutral mixture.
struct MixtureState {
    double weight;  // >= 0, weights sum to 1
    double sigma;   // > 0
    double rate;
};

// Discrete risk-neutral law over (sigma, r), constant in time on [t, T] and
// independent of the driving noise. Prices are weight-averaged Black-Scholes
// prices, one term per state.
struct MixtureModel {
    std::vector<MixtureState> states;
    double spot = 1.0;
    double tau = 1.0;

    // Weights must already be normalized; misconfigured inputs fail loudly
    // instead of being renormalized.
    void validate() const {
        if (states.empty())
            throw std::invalid_argument("mixture: at least one state required");
        if (!(spot > 0.0)) throw std::invalid_argument("mixture: spot must be positive");
        if (!(tau > 0.0)) throw std::invalid_argument("mixture: tau must be positive");
        double total = 0.0;
        for (const MixtureState& s : states) {
            if (!(s.weight >= 0.0))
                throw std::invalid_argument("mixture: weights must be non-negative");
            if (!(s.sigma > 0.0))
                throw std::invalid_argument("mixture: sigmas must be positive");
            total += s.weight;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw std::invalid_argument("mixture: weights must sum to 1");
    }
};

// Two-state presets. Both share p=0.5, sigma=(0.3,0.7), r2=0.08, S0=1, tau=1
// and differ only in the first state's rate: 0.1 vs 0.01.
inline MixtureModel paper_text_preset() {
    return MixtureModel{{{0.5, 0.3, 0.1}, {0.5, 0.7, 0.08}}, 1.0, 1.0};
}

inline MixtureModel paper_figure_preset() {
    return MixtureModel{{{0.5, 0.3, 0.01}, {0.5, 0.7, 0.08}}, 1.0, 1.0};
}

// Price under the mixture rule: the weighted average of per-state
// Black-Scholes prices.
inline double mixture_price(const MixtureModel& model, OptionKind kind, double strike) {
    model.validate();
    if (!(strike > 0.0)) throw std::invalid_argument("mixture_price: strike must be positive");
    double price = 0.0;
    for (const MixtureState& s : model.states)
        price += s.weight *
                 bs_price(kind, BsInputs{model.spot, strike, model.tau, s.sigma, s.rate});
    return price;
}

// Two quotes at different strikes priced by the same model; the input of the
// joint calibration system.
inline std::pair<OptionQuote, OptionQuote> quote_pair(const MixtureModel& model,
                                                      OptionKind kind, double k1,
                                                      double k2) {
    if (k1 == k2) throw IdenticalStrikes("quote_pair: strikes must differ");
    return {OptionQuote{kind, k1, model.tau, mixture_price(model, kind, k1)},
            OptionQuote{kind, k2, model.tau, mixture_price(model, kind, k2)}};
}

} // namespace jointvol
