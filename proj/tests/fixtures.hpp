#pragma once

#include "market_model.hpp"
#include "payoffs.hpp"

namespace fixtures {

inline qh::MarketParams baseline() {
    qh::MarketParams p;
    p.s0_1 = 100.0;
    p.s0_2 = 100.0;
    p.alpha_1 = 0.10;
    p.alpha_2 = 0.08;
    p.sigma_1 = 0.2;
    p.sigma_2 = 0.3;
    p.rho = 0.5;
    p.r = 0.05;
    p.maturity = 1.0;
    return p;
}

// Negative correlation, first asset's density coefficient below sigma_1.
inline qh::MarketParams neg_rho() {
    qh::MarketParams p = baseline();
    p.alpha_1 = 0.06;
    p.alpha_2 = 0.12;
    p.sigma_1 = 0.25;
    p.sigma_2 = 0.2;
    p.rho = -0.4;
    return p;
}

// Larger market price of risk on the first asset, mild on the second.
inline qh::MarketParams high_theta() {
    qh::MarketParams p = baseline();
    p.alpha_1 = 0.12;
    p.alpha_2 = 0.03;
    p.sigma_1 = 0.15;
    p.sigma_2 = 0.25;
    p.rho = 0.3;
    p.r = 0.04;
    return p;
}

// All drifts equal to the short rate: trivial density change.
inline qh::MarketParams degenerate() {
    qh::MarketParams p = baseline();
    p.alpha_1 = p.alpha_2 = p.r;
    return p;
}

// Strikes chosen so every claim has both a nonzero p(H) and a nonzero P(H=0)
// (except the deep quanto-foreign which is controlled by K/S2).
inline std::vector<qh::Payoff> all_payoffs() {
    return {{qh::PayoffKind::Digital, 100.0},
            {qh::PayoffKind::QuantoDomestic, 100.0},
            {qh::PayoffKind::QuantoForeign, 10000.0},
            {qh::PayoffKind::Outperformance, 100.0},
            {qh::PayoffKind::Spread, 1.0}};
}

}  // namespace fixtures
