#include "market_model.hpp"

#include <cmath>

namespace qh {

MarketModel::MarketModel(const MarketParams& p) : params_(p) {
    if (!(p.s0_1 > 0.0) || !(p.s0_2 > 0.0)) fail(ErrorCode::InvalidParameter, "initial prices must be positive");
    if (!(p.sigma_1 > 0.0) || !(p.sigma_2 > 0.0)) fail(ErrorCode::InvalidParameter, "volatilities must be positive");
    if (!(p.maturity > 0.0)) fail(ErrorCode::InvalidParameter, "maturity must be positive");
    if (!(std::abs(p.rho) < 1.0)) fail(ErrorCode::InvalidParameter, "correlation must lie in (-1, 1)");
    if (!std::isfinite(p.alpha_1) || !std::isfinite(p.alpha_2) || !std::isfinite(p.r))
        fail(ErrorCode::InvalidParameter, "drifts and rate must be finite");

    const double rho = p.rho;
    mc_.theta1 = (p.alpha_1 - p.r) / p.sigma_1;
    mc_.theta2 = (p.alpha_2 - p.r) / p.sigma_2;

    // Closed 2x2 inverse of the correlation matrix.
    const double den = rho * rho - 1.0;
    mc_.a1 = (-mc_.theta1 + rho * mc_.theta2) / den;
    mc_.a2 = (rho * mc_.theta1 - mc_.theta2) / den;

    // Expanded display for the exponent constant.
    const double pp = 1.0 / std::sqrt(1.0 + rho);
    const double qq = 1.0 / std::sqrt(1.0 - rho);
    const double u = (pp + qq) * mc_.theta1 + (pp - qq) * mc_.theta2;
    const double v = (pp - qq) * mc_.theta1 + (pp + qq) * mc_.theta2;
    mc_.b = (u * u + v * v) / 8.0;

    // Cross-check against the quadratic-form route.
    const double b_alt = 0.5 * (mc_.theta1 * mc_.theta1 - 2.0 * rho * mc_.theta1 * mc_.theta2 +
                                mc_.theta2 * mc_.theta2) /
                         (1.0 - rho * rho);
    const double scale = std::max(1.0, std::abs(mc_.b));
    if (std::abs(mc_.b - b_alt) > 1e-10 * scale)
        fail(ErrorCode::InvalidParameter, "measure-change constant disagreement between formulas");
}

double MarketModel::density_at(double w1, double w2) const {
    return std::exp(-mc_.a1 * w1 - mc_.a2 * w2 - mc_.b * params_.maturity);
}

ThresholdSet MarketModel::thresholds(double strike) const {
    if (!(strike > 0.0)) fail(ErrorCode::InvalidParameter, "thresholds: strike must be positive");
    const MarketParams& p = params_;
    const double T = p.maturity;
    ThresholdSet t;
    t.a1 = (std::log(strike / p.s0_1) - (p.alpha_1 - 0.5 * p.sigma_1 * p.sigma_1) * T) / p.sigma_1;
    t.a1_tilde = (std::log(strike / p.s0_1) - (p.r - 0.5 * p.sigma_1 * p.sigma_1) * T) / p.sigma_1;
    t.a2 = (std::log(strike / p.s0_2) - (p.alpha_2 - 0.5 * p.sigma_2 * p.sigma_2) * T) / p.sigma_2;
    t.a2_tilde = (std::log(strike / p.s0_2) - (p.r - 0.5 * p.sigma_2 * p.sigma_2) * T) / p.sigma_2;
    t.b = std::log(p.s0_2 / p.s0_1) +
          (p.alpha_2 - p.alpha_1 - 0.5 * (p.sigma_2 * p.sigma_2 - p.sigma_1 * p.sigma_1)) * T;
    t.b_tilde = std::log(p.s0_2 / p.s0_1) - 0.5 * (p.sigma_2 * p.sigma_2 - p.sigma_1 * p.sigma_1) * T;
    t.d = std::log(strike / (p.s0_1 * p.s0_2)) -
          (p.alpha_1 + p.alpha_2 - 0.5 * (p.sigma_1 * p.sigma_1 + p.sigma_2 * p.sigma_2)) * T;
    t.d_tilde = std::log(strike / (p.s0_1 * p.s0_2)) -
                (2.0 * p.r - 0.5 * (p.sigma_1 * p.sigma_1 + p.sigma_2 * p.sigma_2)) * T;
    return t;
}

std::pair<double, double> MarketModel::terminal_assets(double w1, double w2, Measure measure) const {
    const MarketParams& p = params_;
    const double mu1 = measure == Measure::Physical ? p.alpha_1 : p.r;
    const double mu2 = measure == Measure::Physical ? p.alpha_2 : p.r;
    const double T = p.maturity;
    double s1 = p.s0_1 * std::exp((mu1 - 0.5 * p.sigma_1 * p.sigma_1) * T + p.sigma_1 * w1);
    double s2 = p.s0_2 * std::exp((mu2 - 0.5 * p.sigma_2 * p.sigma_2) * T + p.sigma_2 * w2);
    return {s1, s2};
}

GaussianVec MarketModel::joint_law(double u1, double u2, double v1, double v2) const {
    const double T = params_.maturity;
    const double rho = params_.rho;
    GaussianVec w = make_gaussian2(0.0, 0.0, T, rho * T, T);
    const double matrix[4] = {u1, u2, v1, v2};
    return linear_law(matrix, 2, w);
}

GaussianVec MarketModel::marginal_law(double u1, double u2) const {
    const double T = params_.maturity;
    const double rho = params_.rho;
    GaussianVec w = make_gaussian2(0.0, 0.0, T, rho * T, T);
    const double matrix[2] = {u1, u2};
    return linear_law(matrix, 1, w);
}

double MarketModel::discount() const { return std::exp(-params_.r * params_.maturity); }

}  // namespace qh
