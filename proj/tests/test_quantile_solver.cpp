#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "quantile_solver.hpp"

using namespace qh;

TEST_CASE("boundary branches") {
    MarketModel model(fixtures::baseline());
    Payoff po{PayoffKind::Spread, 1.0};
    double pr = price(model, po);
    double floor_prob = prob_zero_payoff(model, po);

    QuantileResult full = phi1(model, po, pr);
    CHECK(full.branch == Branch::FullHedge);
    CHECK(full.value == 1.0);
    CHECK(phi1(model, po, 2.0 * pr).branch == Branch::FullHedge);

    QuantileResult zero = phi1(model, po, 0.0);
    CHECK(zero.branch == Branch::ZeroBudget);
    CHECK(zero.value == doctest::Approx(floor_prob).epsilon(1e-12));

    QuantileResult exact = phi2(model, po, 0.0);
    CHECK(exact.branch == Branch::FullHedge);
    CHECK(exact.value == doctest::Approx(pr).epsilon(1e-12));

    QuantileResult free_ride = phi2(model, po, 1.0 - 0.5 * floor_prob);
    CHECK(free_ride.branch == Branch::ZeroCost);
    CHECK(free_ride.value == 0.0);

    CHECK_THROWS_AS((void)phi1(model, po, -1.0), Error);
    CHECK_THROWS_AS((void)phi2(model, po, -0.1), Error);
    CHECK_THROWS_AS((void)phi2(model, po, 1.5), Error);
}

TEST_CASE("interior solutions are feasible and tight") {
    for (const MarketParams& params : {fixtures::baseline(), fixtures::high_theta()}) {
        MarketModel model(params);
        for (const Payoff& po : fixtures::all_payoffs()) {
            double pr = price(model, po);
            for (double frac : {0.25, 0.6, 0.9}) {
                QuantileResult res = phi1(model, po, frac * pr);
                CHECK(res.branch == Branch::Interior);
                CHECK(res.c > 0.0);
                // Budget feasibility and tightness of the bisection target.
                CHECK(res.psi2_at_c.value <= frac * pr * (1.0 + 1e-6) + 1e-12);
                CHECK(res.psi2_at_c.value == doctest::Approx(frac * pr).epsilon(1e-5));
                CHECK(res.value == doctest::Approx(res.psi1_at_c.value).epsilon(1e-12));
                CHECK(res.value > prob_zero_payoff(model, po));
                CHECK(res.value < 1.0);
            }
        }
    }
}

TEST_CASE("phi1 nondecreasing in budget, phi2 nonincreasing in alpha") {
    MarketModel model(fixtures::neg_rho());
    Payoff po{PayoffKind::QuantoDomestic, 100.0};
    double pr = price(model, po);
    double prev = -1.0;
    for (double frac : {0.05, 0.2, 0.4, 0.6, 0.8, 0.95}) {
        double v = phi1(model, po, frac * pr).value;
        CHECK(v >= prev - 1e-9);
        prev = v;
    }
    prev = pr + 1.0;
    for (double alpha : {0.01, 0.05, 0.1, 0.2, 0.4}) {
        double v = phi2(model, po, alpha).value;
        CHECK(v <= prev + 1e-9 * pr);
        prev = v;
    }
}

TEST_CASE("round trip phi1(phi2(alpha)) = 1 - alpha") {
    MarketModel model(fixtures::baseline());
    for (const Payoff& po : {Payoff{PayoffKind::Digital, 100.0}, Payoff{PayoffKind::Spread, 1.0}}) {
        for (double alpha : {0.02, 0.1, 0.3}) {
            DualityReport rep = duality_check(model, po, alpha);
            CHECK(std::abs(rep.gap) <= 1e-6);
            CHECK(rep.achieved == doctest::Approx(1.0 - alpha).epsilon(1e-5));
        }
    }
}

TEST_CASE("degenerate market rejected for the digital payoff") {
    MarketModel model(fixtures::degenerate());
    Payoff po{PayoffKind::Digital, 100.0};
    double pr = price(model, po);
    CHECK_THROWS_AS((void)phi1(model, po, 0.5 * pr), Error);
    CHECK_THROWS_AS((void)phi2(model, po, 0.2), Error);
    try {
        (void)phi1(model, po, 0.5 * pr);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::DegenerateMeasure);
    }
    // Boundary branches stay available: no root solve is involved.
    CHECK(phi1(model, po, 2.0 * pr).branch == Branch::FullHedge);
    CHECK(phi2(model, po, 0.0).branch == Branch::FullHedge);
}
