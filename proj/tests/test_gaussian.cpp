#include <cmath>

#include "doctest.h"
#include "gaussian.hpp"

using namespace qh;

TEST_CASE("normal cdf and quantile") {
    CHECK(norm_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(norm_cdf(1.0) == doctest::Approx(0.8413447460685429).epsilon(1e-14));
    CHECK(norm_cdf(-1.0) == doctest::Approx(1.0 - 0.8413447460685429).epsilon(1e-14));
    for (double p : {1e-10, 1e-4, 0.02, 0.3, 0.5, 0.77, 0.999, 1.0 - 1e-12}) {
        double x = norm_quantile(p);
        CHECK(norm_cdf(x) == doctest::Approx(p).epsilon(1e-11));
    }
    CHECK_THROWS_AS((void)norm_quantile(0.0), Error);
    CHECK_THROWS_AS((void)norm_quantile(1.0), Error);
}

TEST_CASE("bivariate normal cdf identities") {
    // Orthant identity 1/4 + arcsin(rho)/(2 pi).
    CHECK(bivar_norm_cdf(0.0, 0.0, 0.5) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(bivar_norm_cdf(0.0, 0.0, 0.0) == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(bivar_norm_cdf(0.0, 0.0, -0.5) == doctest::Approx(0.25 - std::asin(0.5) / (2.0 * M_PI)).epsilon(1e-12));
    // Symmetry, marginal saturation, monotonicity in the arguments.
    for (double rho : {-0.9, -0.3, 0.2, 0.8}) {
        CHECK(bivar_norm_cdf(0.3, -1.1, rho) == doctest::Approx(bivar_norm_cdf(-1.1, 0.3, rho)).epsilon(1e-13));
        CHECK(bivar_norm_cdf(0.7, 40.0, rho) == doctest::Approx(norm_cdf(0.7)).epsilon(1e-13));
        CHECK(bivar_norm_cdf(-0.2, 1.0, rho) <= bivar_norm_cdf(0.2, 1.0, rho));
    }
    // Complementarity: P(X<=x) = P(X<=x,Y<=y) + P(X<=x,Y>y), via rho -> -rho reflection.
    double whole = bivar_norm_cdf(0.4, 1.2, 0.6) + bivar_norm_cdf(0.4, -1.2, -0.6);
    CHECK(whole == doctest::Approx(norm_cdf(0.4)).epsilon(1e-12));
    CHECK_THROWS_AS((void)bivar_norm_cdf(0.0, 0.0, 1.0), Error);
}

TEST_CASE("linear and conditional laws") {
    GaussianVec w = make_gaussian2(0.0, 0.0, 1.0, 0.5, 1.0);
    const double m[4] = {2.0, -1.0, 0.0, 3.0};
    GaussianVec out = linear_law(m, 2, w);
    CHECK(out.cov[0][0] == doctest::Approx(4.0 - 2.0 * 2.0 * 0.5 + 1.0));
    CHECK(out.cov[0][1] == doctest::Approx(2.0 * 0.5 * 3.0 - 3.0));
    CHECK(out.cov[1][1] == doctest::Approx(9.0));

    ConditionalLaw law = conditional_law(w, CondIndex::Second);
    CHECK(law.mean_slope == doctest::Approx(0.5));
    CHECK(law.var == doctest::Approx(0.75));
    ConditionalLaw ind = conditional_law(make_gaussian2(0.0, 0.0, 1.0, 0.0, 1.0), CondIndex::Second);
    CHECK(ind.mean_slope == doctest::Approx(0.0));
    CHECK(ind.var == doctest::Approx(1.0));
    CHECK_THROWS_AS((void)conditional_law(make_gaussian2(0.0, 0.0, 1.0, 0.0, 0.0), CondIndex::Second), Error);
}

TEST_CASE("gauss-weighted quadrature") {
    QuadratureSpec spec;
    auto one = [](double) { return 1.0; };
    QuadResult q = integrate_gauss_weighted(one, 0.0, 1.0, spec);
    CHECK(q.converged);
    CHECK(q.value == doctest::Approx(1.0).epsilon(1e-10));

    // Indicator with a breakpoint matches the closed-form tail.
    for (double a : {-2.0, -0.3, 0.0, 1.7}) {
        const double bp[] = {a};
        QuadResult t = integrate_gauss_weighted([&](double x) { return x >= a ? 1.0 : 0.0; }, 0.0, 1.0,
                                                spec, bp);
        CHECK(t.value == doctest::Approx(norm_cdf(-a)).epsilon(1e-9));
    }

    // Lognormal mean under a scaled weight.
    QuadResult e = integrate_gauss_weighted([](double x) { return std::exp(x); }, 0.1, 0.49, spec);
    CHECK(e.value == doctest::Approx(std::exp(0.1 + 0.245)).epsilon(1e-9));

    CHECK_THROWS_AS((void)integrate_gauss_weighted(one, 0.0, 0.0, spec), Error);
}
