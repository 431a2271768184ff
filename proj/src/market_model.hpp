#pragma once

#include "errors.hpp"
#include "gaussian.hpp"

namespace qh {

struct MarketParams {
    double s0_1 = 100.0;
    double s0_2 = 100.0;
    double alpha_1 = 0.0;
    double alpha_2 = 0.0;
    double sigma_1 = 0.2;
    double sigma_2 = 0.2;
    double rho = 0.0;
    double r = 0.0;
    double maturity = 1.0;
};

// Constants of the martingale-measure density exp(-a1*W1 - a2*W2 - b*T).
struct MeasureChange {
    double a1 = 0.0;
    double a2 = 0.0;
    double b = 0.0;
    double theta1 = 0.0;  // (alpha_1 - r) / sigma_1
    double theta2 = 0.0;
};

// Brownian-coordinate thresholds for {S1 >= K}, {S2 >= K}, {S1 >= S2} and the
// quanto-foreign event {S1 >= K/S2}, under P (plain) and under P-tilde (tilde).
struct ThresholdSet {
    double a1 = 0.0, a1_tilde = 0.0;
    double a2 = 0.0, a2_tilde = 0.0;
    double b = 0.0, b_tilde = 0.0;
    double d = 0.0, d_tilde = 0.0;
};

enum class Measure { Physical, Martingale };

class MarketModel {
public:
    explicit MarketModel(const MarketParams& params);

    const MarketParams& params() const { return params_; }
    const MeasureChange& measure_constants() const { return mc_; }

    // dP-tilde/dP evaluated at terminal Brownian coordinates (w1, w2).
    double density_at(double w1, double w2) const;

    ThresholdSet thresholds(double strike) const;

    // Terminal asset prices; the coordinates are read as W under Physical and
    // as W-tilde under Martingale.
    std::pair<double, double> terminal_assets(double w1, double w2, Measure measure) const;

    // Joint law at maturity of (u . W, v . W); both Wiener coordinates are
    // centered with covariance T * [[1, rho], [rho, 1]] under either measure.
    GaussianVec joint_law(double u1, double u2, double v1, double v2) const;
    GaussianVec marginal_law(double u1, double u2) const;

    double discount() const;

private:
    MarketParams params_;
    MeasureChange mc_;
};

}  // namespace qh
