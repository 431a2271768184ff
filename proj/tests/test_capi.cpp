#include <cmath>
#include <cstring>
#include <string>

#include "doctest.h"
#include "qhedge.h"

namespace {

qh_market_params baseline() {
    return {100.0, 100.0, 0.10, 0.08, 0.2, 0.3, 0.5, 0.05, 1.0};
}

struct MarketGuard {
    qh_market* m = nullptr;
    ~MarketGuard() { qh_market_destroy(m); }
};

}  // namespace

TEST_CASE("market lifecycle and parameter validation") {
    qh_market_params p = baseline();
    MarketGuard g;
    CHECK(qh_market_create(&p, &g.m) == QH_OK);
    CHECK(g.m != nullptr);

    qh_market* bad = nullptr;
    qh_market_params invalid = baseline();
    invalid.sigma_1 = -0.2;
    CHECK(qh_market_create(&invalid, &bad) == QH_ERR_INVALID_PARAMETER);
    CHECK(bad == nullptr);
    CHECK(std::strlen(qh_last_error()) > 0);

    invalid = baseline();
    invalid.rho = 1.0;
    CHECK(qh_market_create(&invalid, &bad) != QH_OK);
    CHECK(qh_market_create(nullptr, &bad) == QH_ERR_INVALID_PARAMETER);
    CHECK(qh_market_create(&p, nullptr) == QH_ERR_INVALID_PARAMETER);
    qh_market_destroy(nullptr);  // must be a no-op
}

TEST_CASE("pricing and psi through the c interface") {
    qh_market_params p = baseline();
    MarketGuard g;
    REQUIRE(qh_market_create(&p, &g.m) == QH_OK);
    qh_payoff po{QH_PAYOFF_DIGITAL, 100.0};

    double pr = 0.0, pz = 0.0;
    CHECK(qh_price(g.m, &po, nullptr, &pr) == QH_OK);
    CHECK(pr > 0.0);
    CHECK(pr < 100.0 * std::exp(-0.05));
    CHECK(qh_prob_zero_payoff(g.m, &po, nullptr, &pz) == QH_OK);
    CHECK(pz > 0.0);
    CHECK(pz < 1.0);

    qh_psi_value v1{}, v2{};
    CHECK(qh_psi(g.m, &po, 1, 0.0, nullptr, &v1) == QH_OK);
    CHECK(v1.value == 1.0);
    CHECK(qh_psi(g.m, &po, 2, 0.0, nullptr, &v2) == QH_OK);
    CHECK(v2.value == doctest::Approx(pr).epsilon(1e-13));
    CHECK(v2.converged == 1);

    CHECK(qh_psi(g.m, &po, 3, 0.0, nullptr, &v1) == QH_ERR_INVALID_PARAMETER);
    CHECK(qh_psi(g.m, &po, 1, -0.5, nullptr, &v1) == QH_ERR_OUT_OF_RANGE);
    CHECK(qh_psi(g.m, &po, 1, 0.0, nullptr, nullptr) == QH_ERR_INVALID_PARAMETER);

    // Explicit spec with defaults selected by zeros behaves like nullptr.
    qh_quad_spec zeros{};
    qh_psi_value v1b{};
    CHECK(qh_psi(g.m, &po, 1, 0.01, &zeros, &v1b) == QH_OK);
    qh_psi_value v1c{};
    CHECK(qh_psi(g.m, &po, 1, 0.01, nullptr, &v1c) == QH_OK);
    CHECK(v1b.value == v1c.value);
}

TEST_CASE("quantile functions and branch reporting") {
    qh_market_params p = baseline();
    MarketGuard g;
    REQUIRE(qh_market_create(&p, &g.m) == QH_OK);
    qh_payoff po{QH_PAYOFF_SPREAD, 1.0};

    double pr = 0.0;
    REQUIRE(qh_price(g.m, &po, nullptr, &pr) == QH_OK);

    qh_quantile_result res{};
    CHECK(qh_phi1(g.m, &po, 0.5 * pr, nullptr, &res) == QH_OK);
    CHECK(res.branch == QH_BRANCH_INTERIOR);
    CHECK(res.value > 0.0);
    CHECK(res.value < 1.0);
    CHECK(res.psi2_at_c.value == doctest::Approx(0.5 * pr).epsilon(1e-5));

    CHECK(qh_phi2(g.m, &po, 0.0, nullptr, &res) == QH_OK);
    CHECK(res.branch == QH_BRANCH_FULL_HEDGE);
    CHECK(res.value == doctest::Approx(pr).epsilon(1e-12));

    qh_quantile_result round{};
    REQUIRE(qh_phi2(g.m, &po, 0.1, nullptr, &round) == QH_OK);
    qh_quantile_result back{};
    REQUIRE(qh_phi1(g.m, &po, round.value, nullptr, &back) == QH_OK);
    CHECK(back.value == doctest::Approx(0.9).epsilon(1e-5));

    CHECK(qh_phi2(g.m, &po, 1.5, nullptr, &res) == QH_ERR_OUT_OF_RANGE);
}

TEST_CASE("degenerate market surfaces the dedicated status") {
    qh_market_params p = baseline();
    p.alpha_1 = p.r;
    p.alpha_2 = p.r;
    MarketGuard g;
    REQUIRE(qh_market_create(&p, &g.m) == QH_OK);
    qh_payoff po{QH_PAYOFF_DIGITAL, 100.0};
    double pr = 0.0;
    REQUIRE(qh_price(g.m, &po, nullptr, &pr) == QH_OK);
    qh_quantile_result res{};
    CHECK(qh_phi1(g.m, &po, 0.5 * pr, nullptr, &res) == QH_ERR_DEGENERATE_MEASURE);
    CHECK(std::string(qh_last_error()).find("digital") != std::string::npos);
    CHECK(std::strlen(qh_status_message(QH_ERR_DEGENERATE_MEASURE)) > 0);
}

TEST_CASE("monte carlo and batch membership") {
    qh_market_params p = baseline();
    MarketGuard g;
    REQUIRE(qh_market_create(&p, &g.m) == QH_OK);
    qh_payoff po{QH_PAYOFF_OUTPERFORMANCE, 100.0};

    qh_mc_estimate a{}, b{};
    CHECK(qh_mc_psi(g.m, &po, 1, 0.01, 40000, 17, &a) == QH_OK);
    CHECK(qh_mc_psi(g.m, &po, 1, 0.01, 40000, 17, &b) == QH_OK);
    CHECK(a.mean == b.mean);
    CHECK(a.n == 40000);
    CHECK(a.seed == 17);

    qh_psi_value quad{};
    REQUIRE(qh_psi(g.m, &po, 1, 0.01, nullptr, &quad) == QH_OK);
    CHECK(std::abs(quad.value - a.mean) <= 4.0 * a.std_error + quad.est_error);

    qh_mc_estimate pr_mc{};
    double pr = 0.0;
    REQUIRE(qh_price(g.m, &po, nullptr, &pr) == QH_OK);
    CHECK(qh_mc_price(g.m, &po, 200000, 18, &pr_mc) == QH_OK);
    CHECK(std::abs(pr_mc.mean - pr) <= 4.0 * pr_mc.std_error);

    const double w1[3] = {3.0, 0.0, -3.0};
    const double w2[3] = {0.0, 0.0, -3.0};
    int in[3] = {-1, -1, -1};
    CHECK(qh_success_set_contains(g.m, &po, 0.0, w1, w2, 3, in) == QH_OK);
    CHECK(in[0] == 1);
    CHECK(in[1] == 1);
    CHECK(in[2] == 1);
    CHECK(qh_success_set_contains(g.m, &po, 1e9, w1, w2, 3, in) == QH_OK);
    // At an astronomical level only zero-payoff points stay in; with both assets
    // driven deep down the payoff vanishes, while the first point pays out big.
    CHECK(in[0] == 0);
    CHECK(in[2] == 1);
    CHECK(qh_success_set_contains(g.m, &po, 0.0, nullptr, w2, 3, in) == QH_ERR_INVALID_PARAMETER);
}
