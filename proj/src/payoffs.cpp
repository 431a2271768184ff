#include "payoffs.hpp"

#include <cmath>

#include "psi_engine.hpp"

namespace qh {

double payoff_value(const Payoff& payoff, double s1, double s2) {
    if (!(s1 > 0.0) || !(s2 > 0.0)) fail(ErrorCode::InvalidParameter, "payoff_value: prices must be positive");
    switch (payoff.kind) {
        case PayoffKind::Digital:
            return s1 >= s2 ? payoff.strike : 0.0;
        case PayoffKind::QuantoDomestic:
            return s1 > payoff.strike ? s2 * (s1 - payoff.strike) : 0.0;
        case PayoffKind::QuantoForeign: {
            double gap = s1 - payoff.strike / s2;
            return gap > 0.0 ? gap : 0.0;
        }
        case PayoffKind::Outperformance: {
            double gap = std::max(s1, s2) - payoff.strike;
            return gap > 0.0 ? gap : 0.0;
        }
        case PayoffKind::Spread: {
            double gap = s1 - s2 - payoff.strike;
            return gap > 0.0 ? gap : 0.0;
        }
    }
    fail(ErrorCode::InvalidParameter, "payoff_value: unknown payoff kind");
}

double weighted_payoff(const MarketModel& model, const Payoff& payoff, double w1, double w2) {
    auto [s1, s2] = model.terminal_assets(w1, w2, Measure::Physical);
    // Z~_T^{-1} H; success sets are the sets where this stays below the capital level.
    return payoff_value(payoff, s1, s2) / model.density_at(w1, w2);
}

double prob_zero_payoff(const MarketModel& model, const Payoff& payoff, const QuadratureSpec& spec) {
    const MarketParams& p = model.params();
    const double T = p.maturity;
    ThresholdSet thr = model.thresholds(payoff.strike);
    switch (payoff.kind) {
        case PayoffKind::Digital: {
            double var = model.marginal_law(p.sigma_1, -p.sigma_2).cov[0][0];
            return norm_cdf(thr.b / std::sqrt(var));
        }
        case PayoffKind::QuantoDomestic:
            return norm_cdf(thr.a1 / std::sqrt(T));
        case PayoffKind::QuantoForeign: {
            double var = model.marginal_law(p.sigma_1, p.sigma_2).cov[0][0];
            return norm_cdf(thr.d / std::sqrt(var));
        }
        case PayoffKind::Outperformance:
            return bivar_norm_cdf(thr.a1 / std::sqrt(T), thr.a2 / std::sqrt(T), p.rho);
        case PayoffKind::Spread: {
            // P(S1 < S2 + K) = E_y[ P(W1 < e(y) | W2 = y) ].
            const double nu = T * (1.0 - p.rho * p.rho);
            auto f = [&](double y) {
                double s2 = p.s0_2 * std::exp((p.alpha_2 - 0.5 * p.sigma_2 * p.sigma_2) * T + p.sigma_2 * y);
                double edge = (std::log((s2 + payoff.strike) / p.s0_1) -
                               (p.alpha_1 - 0.5 * p.sigma_1 * p.sigma_1) * T) /
                              p.sigma_1;
                return norm_cdf((edge - p.rho * y) / std::sqrt(nu));
            };
            return integrate_gauss_weighted(f, 0.0, T, spec).value;
        }
    }
    fail(ErrorCode::InvalidParameter, "prob_zero_payoff: unknown payoff kind");
}

double price(const MarketModel& model, const Payoff& payoff, const QuadratureSpec& spec) {
    return psi2(model, payoff, 0.0, spec).value;
}

}  // namespace qh
