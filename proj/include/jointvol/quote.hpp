#pragma once

#include <stdexcept>

#include "jointvol/black_scholes.hpp"

namespace jointvol {

struct IdenticalStrikes : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// One observed option: what kind, at which strike and expiry, at what price.
struct OptionQuote {
    OptionKind kind;
    double strike;  // > 0
    double tau;     // time to expiry in years, > 0
    double price;   // > 0

    void validate() const {
        if (!(strike > 0.0)) throw std::invalid_argument("quote: strike must be positive");
        if (!(tau > 0.0)) throw std::invalid_argument("quote: tau must be positive");
        if (!(price > 0.0)) throw std::invalid_argument("quote: price must be positive");
    }
};

} // namespace jointvol
