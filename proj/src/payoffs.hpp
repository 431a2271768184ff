#pragma once

#include "market_model.hpp"

namespace qh {

enum class PayoffKind { Digital, QuantoDomestic, QuantoForeign, Outperformance, Spread };

struct Payoff {
    PayoffKind kind = PayoffKind::Digital;
    double strike = 100.0;
};

// Terminal payoff H at asset prices (s1, s2). Boundary events use >=.
double payoff_value(const Payoff& payoff, double s1, double s2);

// f(w) = Z~_T(w) * H(w): the composite whose upper level sets are the success sets.
double weighted_payoff(const MarketModel& model, const Payoff& payoff, double w1, double w2);

// Closed-form P(H = 0) under the physical measure (1D quadrature for the spread).
double prob_zero_payoff(const MarketModel& model, const Payoff& payoff,
                        const QuadratureSpec& spec = QuadratureSpec{});

// Arbitrage-free price p(H) = E~[exp(-rT) H]; identical to psi2 at c = 0.
double price(const MarketModel& model, const Payoff& payoff, const QuadratureSpec& spec = QuadratureSpec{});

}  // namespace qh
