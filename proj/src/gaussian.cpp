#include "gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace qh {

double norm_cdf(double x) { return 0.5 * std::erfc(-x * M_SQRT1_2); }

double norm_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

namespace {

// Acklam's rational approximation, then one Halley step against erfc.
double norm_quantile_approx(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
                               1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
                               6.680131188771972e+01, -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
                               -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
                               3.754408661907416e+00};
    const double p_low = 0.02425;

    if (p < p_low) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double norm_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) fail(ErrorCode::OutOfRange, "norm_quantile: p must be in (0,1)");
    double x = norm_quantile_approx(p);
    // Halley refinement.
    double e = norm_cdf(x) - p;
    double u = e / norm_pdf(x);
    x -= u / (1.0 + 0.5 * x * u);
    return x;
}

namespace {

// QUADPACK 15-point Kronrod / 7-point Gauss pair on [-1, 1].
constexpr double kXgk[8] = {0.9914553711208126, 0.9491079123427585, 0.8648644233597691, 0.7415311855993944,
                            0.5860872354676911, 0.4058451513773972, 0.2077849550078985, 0.0};
constexpr double kWgk[8] = {0.0229353220105292, 0.0630920926299786, 0.1047900103222502, 0.1406532597155259,
                            0.1690047266392679, 0.1903505780647854, 0.2044329400752989, 0.2094821410847278};
constexpr double kWg[4] = {0.1294849661688697, 0.2797053914892767, 0.3818300505051189, 0.4179591836734694};

struct Segment {
    double lo, hi, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double fc = f(center);
    double res_k = kWgk[7] * fc;
    double res_g = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        double abscissa = half * kXgk[j];
        double sum = f(center - abscissa) + f(center + abscissa);
        res_k += kWgk[j] * sum;
        if (j % 2 == 1) res_g += kWg[j / 2] * sum;
    }
    res_k *= half;
    res_g *= half;
    return {lo, hi, res_k, std::abs(res_k - res_g)};
}

}  // namespace

QuadResult integrate_gauss_weighted(const std::function<double(double)>& f, double mean, double var,
                                    const QuadratureSpec& spec, std::span<const double> breakpoints) {
    if (!(var > 0.0)) fail(ErrorCode::DegenerateConditioning, "integrate_gauss_weighted: zero-variance weight");
    const double sd = std::sqrt(var);
    const double lo = mean - spec.trunc_sigmas * sd;
    const double hi = mean + spec.trunc_sigmas * sd;

    auto integrand = [&](double x) { return f(x) * norm_pdf((x - mean) / sd) / sd; };

    std::vector<double> edges{lo, hi};
    // Integrands whose support shrinks with the level hang narrow bands off a
    // breakpoint; graded edges keep the initial rule from stepping over them.
    static constexpr double kGraded[] = {1e-4, 1e-3, 1e-2, 1e-1, 1.0, 3.0};
    for (double bp : breakpoints) {
        if (bp > lo && bp < hi) edges.push_back(bp);
        for (double g : kGraded) {
            for (double side : {-1.0, 1.0}) {
                double e = bp + side * g * sd;
                if (e > lo && e < hi) edges.push_back(e);
            }
        }
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [&](double a, double b) { return b - a < 1e-9 * sd; }),
                edges.end());

    std::priority_queue<Segment> queue;
    double total = 0.0, total_err = 0.0;
    int evals = 0;
    for (size_t i = 0; i + 1 < edges.size(); ++i) {
        Segment s = gk15(integrand, edges[i], edges[i + 1]);
        total += s.value;
        total_err += s.error;
        queue.push(s);
        ++evals;
    }

    while (total_err > spec.abs_tol && evals < spec.max_subdivisions) {
        Segment worst = queue.top();
        queue.pop();
        double mid = 0.5 * (worst.lo + worst.hi);
        Segment left = gk15(integrand, worst.lo, mid);
        Segment right = gk15(integrand, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        evals += 2;
    }
    return {total, total_err, total_err <= spec.abs_tol};
}

QuadResult integrate_gauss_weighted(const std::function<double(double)>& f, const GaussianVec& weight,
                                    const QuadratureSpec& spec, std::span<const double> breakpoints) {
    if (weight.dim != 1) fail(ErrorCode::DimensionMismatch, "integrate_gauss_weighted: weight must be 1D");
    return integrate_gauss_weighted(f, weight.mean[0], weight.cov[0][0], spec, breakpoints);
}

QuadResult integrate_nested(const GaussianVec& outer_weight, const std::function<double(double)>& inner,
                            const QuadratureSpec& spec) {
    QuadResult outer = integrate_gauss_weighted(inner, outer_weight, spec);
    outer.est_error += spec.abs_tol;  // inner evaluations carry their own abs_tol budget
    outer.converged = outer.est_error <= 2.0 * spec.abs_tol;
    return outer;
}

GaussianVec make_gaussian1(double mean, double var) {
    GaussianVec g;
    g.dim = 1;
    g.mean[0] = mean;
    g.cov[0][0] = var;
    return g;
}

GaussianVec make_gaussian2(double m1, double m2, double v11, double v12, double v22) {
    GaussianVec g;
    g.dim = 2;
    g.mean = {m1, m2};
    g.cov = {{{v11, v12}, {v12, v22}}};
    return g;
}

GaussianVec linear_law(const double* matrix, int rows, const GaussianVec& input) {
    if (rows < 1 || rows > 2) fail(ErrorCode::DimensionMismatch, "linear_law: rows must be 1 or 2");
    const int d = input.dim;
    GaussianVec out;
    out.dim = rows;
    for (int i = 0; i < rows; ++i) {
        out.mean[i] = 0.0;
        for (int k = 0; k < d; ++k) out.mean[i] += matrix[i * d + k] * input.mean[k];
    }
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < rows; ++j) {
            double s = 0.0;
            for (int k = 0; k < d; ++k)
                for (int l = 0; l < d; ++l) s += matrix[i * d + k] * input.cov[k][l] * matrix[j * d + l];
            out.cov[i][j] = s;
        }
    return out;
}

ConditionalLaw conditional_law(const GaussianVec& joint, CondIndex condition_on) {
    if (joint.dim != 2) fail(ErrorCode::DimensionMismatch, "conditional_law: joint must be 2D");
    const int t = condition_on == CondIndex::Second ? 0 : 1;  // target coordinate
    const int c = 1 - t;                                      // conditioning coordinate
    const double vcc = joint.cov[c][c];
    if (!(vcc > 0.0)) fail(ErrorCode::DegenerateConditioning, "conditional_law: conditioning variance is zero");
    ConditionalLaw law;
    law.mean_slope = joint.cov[t][c] / vcc;
    law.mean_intercept = joint.mean[t] - law.mean_slope * joint.mean[c];
    law.var = std::max(0.0, joint.cov[t][t] - joint.cov[t][c] * joint.cov[t][c] / vcc);
    return law;
}

double bivar_norm_cdf(double x, double y, double rho) {
    if (!(std::abs(rho) < 1.0)) fail(ErrorCode::InvalidCorrelation, "bivar_norm_cdf: |rho| must be < 1");
    if (rho == 0.0) return norm_cdf(x) * norm_cdf(y);
    // Saturated arguments: the finite-coordinate marginal.
    if (x > 38.0 && y > 38.0) return 1.0;
    if (x < -38.0 || y < -38.0) return 0.0;
    if (x > 38.0) return norm_cdf(y);
    if (y > 38.0) return norm_cdf(x);

    // Drezner-Wesolowsky single integral with r = sin(theta).
    auto integrand = [&](double theta) {
        double s = std::sin(theta);
        double c2 = std::cos(theta);
        c2 *= c2;
        return std::exp(-(x * x - 2.0 * s * x * y + y * y) / (2.0 * c2));
    };
    const double upper = std::asin(rho);
    QuadratureSpec spec;
    spec.abs_tol = 1e-13;

    std::priority_queue<Segment> queue;
    Segment s0 = gk15(integrand, std::min(0.0, upper), std::max(0.0, upper));
    double total = s0.value, total_err = s0.error;
    queue.push(s0);
    int evals = 1;
    while (total_err > spec.abs_tol && evals < 4096) {
        Segment worst = queue.top();
        queue.pop();
        double mid = 0.5 * (worst.lo + worst.hi);
        Segment left = gk15(integrand, worst.lo, mid);
        Segment right = gk15(integrand, mid, worst.hi);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        evals += 2;
    }
    double sign = upper >= 0.0 ? 1.0 : -1.0;
    double p = norm_cdf(x) * norm_cdf(y) + sign * total / (2.0 * M_PI);
    return std::clamp(p, 0.0, 1.0);
}

}  // namespace qh
