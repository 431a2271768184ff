#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "errors.hpp"

namespace qh {

// Standard normal distribution function, density and quantile.
double norm_cdf(double x);
double norm_pdf(double x);
double norm_quantile(double p);

// P(Z1 <= x, Z2 <= y) for a standard bivariate normal with correlation rho.
double bivar_norm_cdf(double x, double y, double rho);

// Centered or general Gaussian vector of dimension 1 or 2.
struct GaussianVec {
    int dim = 1;
    std::array<double, 2> mean{0.0, 0.0};
    std::array<std::array<double, 2>, 2> cov{{{0.0, 0.0}, {0.0, 0.0}}};
};

GaussianVec make_gaussian1(double mean, double var);
GaussianVec make_gaussian2(double m1, double m2, double v11, double v12, double v22);

// Image of a Gaussian vector under a linear map given row-major as rows x in.dim.
GaussianVec linear_law(const double* matrix, int rows, const GaussianVec& input);

enum class CondIndex { First, Second };

// Law of one coordinate of a 2D Gaussian given the other: affine mean, constant variance.
struct ConditionalLaw {
    double mean_intercept = 0.0;
    double mean_slope = 0.0;
    double var = 0.0;

    double mean(double y) const { return mean_intercept + mean_slope * y; }
};

ConditionalLaw conditional_law(const GaussianVec& joint, CondIndex condition_on);

struct QuadratureSpec {
    double abs_tol = 1e-9;
    double trunc_sigmas = 8.5;
    int max_subdivisions = 1 << 14;
};

struct QuadResult {
    double value = 0.0;
    double est_error = 0.0;
    bool converged = true;
};

// Integral of f(x) * phi(x; mean, var) over [mean - k*sd, mean + k*sd], adaptive
// Gauss-Kronrod. Known jump points of f go in `breakpoints` so each subinterval
// sees a smooth integrand.
QuadResult integrate_gauss_weighted(const std::function<double(double)>& f, double mean, double var,
                                    const QuadratureSpec& spec, std::span<const double> breakpoints = {});

QuadResult integrate_gauss_weighted(const std::function<double(double)>& f, const GaussianVec& weight,
                                    const QuadratureSpec& spec, std::span<const double> breakpoints = {});

// Outer Gaussian quadrature of a per-point inner evaluation; the reported error
// combines outer and an assumed inner budget of abs_tol.
QuadResult integrate_nested(const GaussianVec& outer_weight, const std::function<double(double)>& inner,
                            const QuadratureSpec& spec);

}  // namespace qh
