#include "psi_engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

namespace qh {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDegenerateSd = 1e-13;

// Phi((mean - threshold) / sd), read as an indicator when the variance collapses.
double phi_or_indicator(double mean, double threshold, double sd) {
    if (threshold == -kInf) return 1.0;
    if (threshold == kInf) return 0.0;
    if (sd > kDegenerateSd) return norm_cdf((mean - threshold) / sd);
    return mean >= threshold ? 1.0 : 0.0;
}

// N(mean, var) mass of an interval (lo, hi).
double gauss_interval_mass(double lo, double hi, double mean, double sd) {
    if (!(hi > lo)) return 0.0;
    double u = hi == kInf ? 1.0 : norm_cdf((hi - mean) / sd);
    double l = lo == -kInf ? 0.0 : norm_cdf((lo - mean) / sd);
    return std::max(0.0, u - l);
}

// E[exp(a X) 1{X in (lo, hi)}] for X ~ N(mean, var).
double tilted_interval_mass(double a, double lo, double hi, double mean, double var) {
    double shifted = mean + a * var;
    return std::exp(a * mean + 0.5 * a * a * var) * gauss_interval_mass(lo, hi, shifted, std::sqrt(var));
}

struct Cond {
    double slope = 0.0;  // E[U | V = v] = slope * v (centered joints)
    double var = 0.0;
    double sd = 0.0;
};

// Law of u.W_T given v.W_T, recomputed from first principles via the linear-map rule.
Cond cond_on(const MarketModel& model, double u1, double u2, double v1, double v2) {
    GaussianVec joint = model.joint_law(u1, u2, v1, v2);
    ConditionalLaw law = conditional_law(joint, CondIndex::Second);
    return {law.mean_slope, law.var, std::sqrt(std::max(0.0, law.var))};
}

double var_of(const MarketModel& model, double u1, double u2) {
    return model.marginal_law(u1, u2).cov[0][0];
}

// {h >= 0} within (lo, hi) as an interval union; dense scan plus bisection.
// Used only on degenerate branches where the smooth conditional collapses to an
// indicator of a nonlinear section.
IntervalUnion indicator_region(const std::function<double(double)>& h, double lo, double hi) {
    const int n = 4096;
    IntervalUnion out;
    double prev_x = lo;
    double prev_v = h(lo);
    double open_at = prev_v >= 0.0 ? lo : kInf;
    for (int i = 1; i <= n; ++i) {
        double x = lo + (hi - lo) * i / n;
        double v = h(x);
        if ((v >= 0.0) != (prev_v >= 0.0)) {
            double a = prev_x, b = x, va = prev_v;
            for (int it = 0; it < 80; ++it) {
                double m = 0.5 * (a + b);
                double vm = h(m);
                if ((vm >= 0.0) == (va >= 0.0)) {
                    a = m;
                    va = vm;
                } else {
                    b = m;
                }
            }
            double root = 0.5 * (a + b);
            if (v >= 0.0) {
                open_at = root;
            } else {
                out.parts.emplace_back(open_at, root);
                open_at = kInf;
            }
        }
        prev_x = x;
        prev_v = v;
    }
    if (open_at != kInf) out.parts.emplace_back(open_at, hi);
    return out;
}

struct PayoffContext {
    const MarketModel& model;
    const Payoff& payoff;
    const QuadratureSpec& spec;
    MeasureChange mc;
    ThresholdSet thr;
    double T;

    PayoffContext(const MarketModel& m, const Payoff& p, const QuadratureSpec& s)
        : model(m), payoff(p), spec(s), mc(m.measure_constants()), thr(m.thresholds(p.strike)),
          T(m.params().maturity) {}

    double s1_fwd(double w1, Measure meas) const {
        const MarketParams& p = model.params();
        double mu = meas == Measure::Physical ? p.alpha_1 : p.r;
        return p.s0_1 * std::exp((mu - 0.5 * p.sigma_1 * p.sigma_1) * T + p.sigma_1 * w1);
    }
    double s2_fwd(double w2, Measure meas) const {
        const MarketParams& p = model.params();
        double mu = meas == Measure::Physical ? p.alpha_2 : p.r;
        return p.s0_2 * std::exp((mu - 0.5 * p.sigma_2 * p.sigma_2) * T + p.sigma_2 * w2);
    }
};

// ---------------------------------------------------------------- digital ----

// Psi1 via the conditional form P(X >= L | Y = y) integrated over {y >= b},
// X = A1 W1 + A2 W2, Y = sigma1 W1 - sigma2 W2.
PsiValue digital_psi(const PayoffContext& ctx, double c, Measure meas) {
    const MarketParams& p = ctx.model.params();
    const MeasureChange& mc = ctx.mc;
    const double K = ctx.payoff.strike;
    const double lower = meas == Measure::Physical ? ctx.thr.b : ctx.thr.b_tilde;
    // Event {Z~^{-1} >= cK} reads X >= log(cK) - BT in W-coordinates and
    // X~ >= log(cK) + BT in W~-coordinates.
    const double L = std::log(c * K) + (meas == Measure::Physical ? -1.0 : 1.0) * mc.b * ctx.T;

    Cond cl = cond_on(ctx.model, mc.a1, mc.a2, p.sigma_1, -p.sigma_2);
    const double var_y = var_of(ctx.model, p.sigma_1, -p.sigma_2);
    const double sd_y = std::sqrt(var_y);
    const double below = norm_cdf(lower / sd_y);

    PsiValue out;
    if (cl.sd <= kDegenerateSd) {
        // X is a.s. the affine image slope * Y; the event is a half-line in y.
        IntervalUnion region;
        if (cl.slope > kDegenerateSd)
            region = IntervalUnion::half_line_above(L / cl.slope);
        else if (cl.slope < -kDegenerateSd)
            region = IntervalUnion::half_line_below(L / cl.slope);
        else
            region = 0.0 >= L ? IntervalUnion::full_line() : IntervalUnion::empty();
        out.value = region.intersect_above(lower).gauss_mass(0.0, var_y);
        out.est_error = 0.0;
    } else {
        auto f = [&](double y) {
            return y >= lower ? phi_or_indicator(cl.slope * y, L, cl.sd) : 0.0;
        };
        const double bp[] = {lower};
        QuadResult q = integrate_gauss_weighted(f, 0.0, var_y, ctx.spec, bp);
        out.value = q.value;
        out.est_error = q.est_error;
        out.converged = q.converged;
    }
    if (meas == Measure::Physical) {
        out.value += below;
    } else {
        out.value *= ctx.model.discount() * K;
        out.est_error *= ctx.model.discount() * K;
    }
    return out;
}

// --------------------------------------------------------- quanto domestic ---

PsiValue quanto_domestic_psi1(const PayoffContext& ctx, double c) {
    const MarketParams& p = ctx.model.params();
    const MeasureChange& mc = ctx.mc;
    const double K = ctx.payoff.strike;
    const double a1 = ctx.thr.a1;
    const double coef = mc.a2 - p.sigma_2;

    auto v = [&](double x) {
        double inner = ctx.s1_fwd(x, Measure::Physical) - K;
        if (inner <= 0.0) return -kInf;
        return std::log(c * p.s0_2) + (p.alpha_2 - 0.5 * p.sigma_2 * p.sigma_2 - mc.b) * ctx.T -
               mc.a1 * x + std::log(inner);
    };

    PsiValue out;
    const double base = norm_cdf(a1 / std::sqrt(ctx.T));
    if (std::abs(coef) <= 1e-12) {
        // Degenerate inner variable: evaluate the indicator {0 >= v(c, x)} directly.
        const double sd = std::sqrt(ctx.T);
        const double lo = std::max(a1, -ctx.spec.trunc_sigmas * sd);
        const double hi = ctx.spec.trunc_sigmas * sd;
        double mass = 0.0;
        if (hi > lo) {
            IntervalUnion region = indicator_region([&](double x) { return -v(x); }, lo, hi);
            mass = region.gauss_mass(0.0, ctx.T);
        }
        out.value = mass + base;
        out.est_error = 1e-12;
        return out;
    }

    Cond cl = cond_on(ctx.model, 0.0, coef, 1.0, 0.0);  // (A2 - sigma2) W2 given W1
    auto f = [&](double x) {
        return x >= a1 ? phi_or_indicator(cl.slope * x, v(x), cl.sd) : 0.0;
    };
    const double bp[] = {a1};
    QuadResult q = integrate_gauss_weighted(f, 0.0, ctx.T, ctx.spec, bp);
    out.value = q.value + base;
    out.est_error = q.est_error;
    out.converged = q.converged;
    return out;
}

PsiValue quanto_domestic_psi2(const PayoffContext& ctx, double c) {
    const MarketParams& p = ctx.model.params();
    const MeasureChange& mc = ctx.mc;
    const double K = ctx.payoff.strike;
    const double a1t = ctx.thr.a1_tilde;
    const double coef = mc.a2 - p.sigma_2;
    const double nu = ctx.T * (1.0 - p.rho * p.rho);  // Var(W2 | W1)
    const double s2_base = p.s0_2 * std::exp((p.r - 0.5 * p.sigma_2 * p.sigma_2) * ctx.T);

    auto w_thresh = [&](double x) {
        if (c == 0.0) return -kInf;
        double inner = ctx.s1_fwd(x, Measure::Martingale) - K;
        if (inner <= 0.0) return -kInf;
        return std::log(c * p.s0_2) + (p.r - 0.5 * p.sigma_2 * p.sigma_2 + mc.b) * ctx.T - mc.a1 * x +
               std::log(inner);
    };

    // Inner expectation E[S2 1{(A2 - sigma2) W2 >= w} | W1 = x] in closed form.
    auto f = [&](double x) {
        double gain = ctx.s1_fwd(x, Measure::Martingale) - K;
        if (gain <= 0.0) return 0.0;
        double w = w_thresh(x);
        double lo = -kInf, hi = kInf;
        if (w == -kInf) {
            // full line
        } else if (coef > 1e-12) {
            lo = w / coef;
        } else if (coef < -1e-12) {
            hi = w / coef;
        } else if (w > 0.0) {
            return 0.0;
        }
        return gain * s2_base * tilted_interval_mass(p.sigma_2, lo, hi, p.rho * x, nu);
    };
    const double bp[] = {a1t};
    QuadResult q = integrate_gauss_weighted([&](double x) { return x >= a1t ? f(x) : 0.0; }, 0.0, ctx.T,
                                            ctx.spec, bp);
    return {ctx.model.discount() * q.value, ctx.model.discount() * q.est_error, PsiMethod::Quadrature,
            q.converged};
}

// ---------------------------------------------------------- quanto foreign ---

PsiValue quanto_foreign_psi1(const PayoffContext& ctx, double c) {
    const MarketParams& p = ctx.model.params();
    const MeasureChange& mc = ctx.mc;
    const double K = ctx.payoff.strike;
    const double d = ctx.thr.d;
    const double var_z = var_of(ctx.model, p.sigma_1, p.sigma_2);
    const double sd_z = std::sqrt(var_z);

    auto v = [&](double z) {
        double inner = p.s0_1 * p.s0_2 *
                           std::exp((p.alpha_1 + p.alpha_2 -
                                     0.5 * (p.sigma_1 * p.sigma_1 + p.sigma_2 * p.sigma_2)) *
                                        ctx.T +
                                    z) -
                       K;
        if (inner <= 0.0) return -kInf;
        return std::log(c / p.s0_2) + (0.5 * p.sigma_2 * p.sigma_2 - p.alpha_2 - mc.b) * ctx.T +
               std::log(inner);
    };

    Cond cl = cond_on(ctx.model, mc.a1, mc.a2 + p.sigma_2, p.sigma_1, p.sigma_2);
    const double base = norm_cdf(d / sd_z);
    PsiValue out;
    if (cl.sd <= kDegenerateSd) {
        const double lo = std::max(d, -ctx.spec.trunc_sigmas * sd_z);
        const double hi = ctx.spec.trunc_sigmas * sd_z;
        double mass = 0.0;
        if (hi > lo) {
            IntervalUnion region =
                indicator_region([&](double z) { return cl.slope * z - v(z); }, lo, hi);
            mass = region.gauss_mass(0.0, var_z);
        }
        out.value = mass + base;
        out.est_error = 1e-12;
        return out;
    }
    auto f = [&](double z) { return z >= d ? phi_or_indicator(cl.slope * z, v(z), cl.sd) : 0.0; };
    const double bp[] = {d};
    QuadResult q = integrate_gauss_weighted(f, 0.0, var_z, ctx.spec, bp);
    out.value = q.value + base;
    out.est_error = q.est_error;
    out.converged = q.converged;
    return out;
}

PsiValue quanto_foreign_psi2(const PayoffContext& ctx, double c) {
    const MarketParams& p = ctx.model.params();
    const MeasureChange& mc = ctx.mc;
    const double K = ctx.payoff.strike;
    const double dt = ctx.thr.d_tilde;
    const double var_z = var_of(ctx.model, p.sigma_1, p.sigma_2);

    // Joint of (W1, V) and (W2, V) with V = A1 W1 + (A2 + sigma2) W2, all given Z = z.
    GaussianVec jw1v = ctx.model.joint_law(1.0, 0.0, mc.a1, mc.a2 + p.sigma_2);
    GaussianVec jw2v = ctx.model.joint_law(0.0, 1.0, mc.a1, mc.a2 + p.sigma_2);
    const double cov_w1z = ctx.model.joint_law(1.0, 0.0, p.sigma_1, p.sigma_2).cov[0][1];
    const double cov_w2z = ctx.model.joint_law(0.0, 1.0, p.sigma_1, p.sigma_2).cov[0][1];
    const double cov_vz = ctx.model.joint_law(mc.a1, mc.a2 + p.sigma_2, p.sigma_1, p.sigma_2).cov[0][1];
    const double var_v = var_of(ctx.model, mc.a1, mc.a2 + p.sigma_2);
    const double var_w = ctx.T;

    // Conditional (on Z = z) moments; slopes in z, constants independent of z.
    const double k_v = cov_vz / var_z;
    const double c_vv = std::max(0.0, var_v - cov_vz * cov_vz / var_z);
    const double sd_v = std::sqrt(c_vv);
    const double k_w1 = cov_w1z / var_z, k_w2 = cov_w2z / var_z;
    const double c_w1 = std::max(0.0, var_w - cov_w1z * cov_w1z / var_z);
    const double c_w2 = std::max(0.0, var_w - cov_w2z * cov_w2z / var_z);
    const double c_w1v = jw1v.cov[0][1] - cov_w1z * cov_vz / var_z;
    const double c_w2v = jw2v.cov[0][1] - cov_w2z * cov_vz / var_z;

    const double lead1 = p.s0_1 * std::exp((p.r - 0.5 * p.sigma_1 * p.sigma_1) * ctx.T);
    const double lead2 = (K / p.s0_2) * std::exp(-(p.r - 0.5 * p.sigma_2 * p.sigma_2) * ctx.T);

    auto w_thresh = [&](double z) {
        if (c == 0.0) return -kInf;
        double inner = p.s0_1 * p.s0_2 *
                           std::exp((2.0 * p.r - 0.5 * (p.sigma_1 * p.sigma_1 + p.sigma_2 * p.sigma_2)) *
                                        ctx.T +
                                    z) -
                       K;
        if (inner <= 0.0) return -kInf;
        return std::log(c / p.s0_2) + (0.5 * p.sigma_2 * p.sigma_2 - p.r + mc.b) * ctx.T + std::log(inner);
    };

    auto f = [&](double z) {
        if (z < dt) return 0.0;
        double w = w_thresh(z);
        // E[e^{a X} 1{V >= w} | Z = z] = e^{a mu_X + a^2 c_XX / 2} Phi-or-ind(mu_V + a c_XV - w).
        double t1 = std::exp(p.sigma_1 * k_w1 * z + 0.5 * p.sigma_1 * p.sigma_1 * c_w1) *
                    phi_or_indicator(k_v * z + p.sigma_1 * c_w1v, w, sd_v);
        double t2 = std::exp(-p.sigma_2 * k_w2 * z + 0.5 * p.sigma_2 * p.sigma_2 * c_w2) *
                    phi_or_indicator(k_v * z - p.sigma_2 * c_w2v, w, sd_v);
        return lead1 * t1 - lead2 * t2;
    };
    const double bp[] = {dt};
    QuadResult q = integrate_gauss_weighted(f, 0.0, var_z, ctx.spec, bp);
    return {ctx.model.discount() * q.value, ctx.model.discount() * q.est_error, PsiMethod::Quadrature,
            q.converged};
}

// ----------------------------------------------------------- outperformance --

PsiValue outperformance_psi(const PayoffContext& ctx, double c, Measure meas) {
    const MarketParams& p = ctx.model.params();
    const MeasureChange& mc = ctx.mc;
    const double K = ctx.payoff.strike;
    const bool mtg = meas == Measure::Martingale;
    const double a1 = mtg ? ctx.thr.a1_tilde : ctx.thr.a1;
    const double a2 = mtg ? ctx.thr.a2_tilde : ctx.thr.a2;
    const double b = mtg ? ctx.thr.b_tilde : ctx.thr.b;
    const double var_z = var_of(ctx.model, p.sigma_1, -p.sigma_2);
    const double sd_z = std::sqrt(var_z);
    const double sd_w = std::sqrt(ctx.T);
    const double bterm = (mtg ? 1.0 : -1.0) * mc.b * ctx.T;

    // Z | W1 = x and Z | W2 = y, Z = sigma1 W1 - sigma2 W2.
    const double mz1 = p.sigma_1 - p.rho * p.sigma_2;  // slope in x
    const double vz1 = ctx.T * p.sigma_2 * p.sigma_2 * (1.0 - p.rho * p.rho);
    const double mz2 = p.rho * p.sigma_1 - p.sigma_2;  // slope in y
    const double vz2 = ctx.T * p.sigma_1 * p.sigma_1 * (1.0 - p.rho * p.rho);

    // Branch 1: payoff from asset 1 on {W1 >= a1, Z >= b}.
    auto f1 = [&](double x) {
        if (x < a1) return 0.0;
        double gain = ctx.s1_fwd(x, meas) - K;
        if (gain <= 0.0) return 0.0;
        double thresh = c > 0.0 ? std::log(c * gain) - mc.a1 * x + bterm : -kInf;
        // {A2 * (sigma1 x - z) / sigma2 >= thresh}
        IntervalUnion zset;
        if (thresh == -kInf || std::abs(mc.a2) <= 1e-12) {
            zset = (thresh == -kInf || 0.0 >= thresh) ? IntervalUnion::full_line() : IntervalUnion::empty();
        } else {
            double zstar = p.sigma_1 * x - p.sigma_2 * thresh / mc.a2;
            zset = mc.a2 > 0.0 ? IntervalUnion::half_line_below(zstar) : IntervalUnion::half_line_above(zstar);
        }
        double mass = zset.intersect_above(b).gauss_mass(mz1 * x, vz1);
        return mtg ? gain * mass : mass;
    };
    // Branch 2: payoff from asset 2 on {W2 >= a2, Z < b}.
    auto f2 = [&](double y) {
        if (y < a2) return 0.0;
        double gain = ctx.s2_fwd(y, meas) - K;
        if (gain <= 0.0) return 0.0;
        double thresh = c > 0.0 ? std::log(c * gain) - mc.a2 * y + bterm : -kInf;
        // {A1 * (z + sigma2 y) / sigma1 >= thresh}
        IntervalUnion zset;
        if (thresh == -kInf || std::abs(mc.a1) <= 1e-12) {
            zset = (thresh == -kInf || 0.0 >= thresh) ? IntervalUnion::full_line() : IntervalUnion::empty();
        } else {
            double zstar = p.sigma_1 * thresh / mc.a1 - p.sigma_2 * y;
            zset = mc.a1 > 0.0 ? IntervalUnion::half_line_above(zstar) : IntervalUnion::half_line_below(zstar);
        }
        double mass = 0.0;
        for (const auto& [lo, hi] : zset.parts)
            mass += gauss_interval_mass(std::max(lo, -kInf), std::min(hi, b), mz2 * y, std::sqrt(vz2));
        return mtg ? gain * mass : mass;
    };

    const double bp1[] = {a1};
    const double bp2[] = {a2};
    QuadResult q1 = integrate_gauss_weighted(f1, 0.0, ctx.T, ctx.spec, bp1);
    QuadResult q2 = integrate_gauss_weighted(f2, 0.0, ctx.T, ctx.spec, bp2);

    PsiValue out;
    out.est_error = q1.est_error + q2.est_error;
    out.converged = q1.converged && q2.converged;
    if (mtg) {
        out.value = ctx.model.discount() * (q1.value + q2.value);
        out.est_error *= ctx.model.discount();
    } else {
        // No-payoff regions enter Psi1 with probability one.
        double corr1 = (p.sigma_1 - p.rho * p.sigma_2) * sd_w / sd_z;
        double corr2 = (p.rho * p.sigma_1 - p.sigma_2) * sd_w / sd_z;
        double p_lo1_hiZ = norm_cdf(a1 / sd_w) - bivar_norm_cdf(a1 / sd_w, b / sd_z, corr1);
        double p_lo2_loZ = bivar_norm_cdf(a2 / sd_w, b / sd_z, corr2);
        out.value = q1.value + q2.value + p_lo1_hiZ + p_lo2_loZ;
    }
    return out;
}

// ------------------------------------------------------------------ spread ---

struct SpreadCoeffs {
    double log_p;  // log of the coefficient on exp(A1 x)
    double log_q;  // log of the coefficient on exp(sigma1 x)
    double rhs;    // right-hand side, -c (S2(y) + K)
};

// g(x) - rhs with overflow-safe sign in the far tails.
double spread_gap(const SpreadCoeffs& sc, double a1c, double sigma1, double x) {
    double t1 = sc.log_p + a1c * x;
    double t2 = sc.log_q == -kInf ? -kInf : sc.log_q + sigma1 * x;
    if (t1 < 700.0 && t2 < 700.0) {
        double g = std::exp(t1) - (t2 == -kInf ? 0.0 : std::exp(t2));
        return g - sc.rhs;
    }
    // One of the exponentials has overflowed; the larger exponent decides.
    return t1 >= t2 ? kInf : -kInf;
}

double bisect_spread(const SpreadCoeffs& sc, double a1c, double sigma1, double lo, double hi) {
    // Invariant: gap changes sign between lo and hi.
    double flo = spread_gap(sc, a1c, sigma1, lo);
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = spread_gap(sc, a1c, sigma1, mid);
        if ((fm >= 0.0) == (flo >= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

PsiValue psi1(const MarketModel& model, const Payoff& payoff, double c, const QuadratureSpec& spec) {
    if (!(c >= 0.0)) fail(ErrorCode::OutOfRange, "psi1: c must be nonnegative");
    if (c == 0.0) return {1.0, 0.0, PsiMethod::Quadrature, true};
    PayoffContext ctx(model, payoff, spec);
    PsiValue out;
    switch (payoff.kind) {
        case PayoffKind::Digital:
            out = digital_psi(ctx, c, Measure::Physical);
            break;
        case PayoffKind::QuantoDomestic:
            out = quanto_domestic_psi1(ctx, c);
            break;
        case PayoffKind::QuantoForeign:
            out = quanto_foreign_psi1(ctx, c);
            break;
        case PayoffKind::Outperformance:
            out = outperformance_psi(ctx, c, Measure::Physical);
            break;
        case PayoffKind::Spread: {
            const MarketParams& p = model.params();
            const double nu = ctx.T * (1.0 - p.rho * p.rho);
            const double sd_c = std::sqrt(nu);
            auto f = [&](double y) {
                double s2 = ctx.s2_fwd(y, Measure::Physical);
                double edge = (std::log((s2 + payoff.strike) / p.s0_1) -
                               (p.alpha_1 - 0.5 * p.sigma_1 * p.sigma_1) * ctx.T) /
                              p.sigma_1;
                IntervalUnion set = spread_upper_set(model, payoff.strike, c, y, Measure::Physical);
                double mass = set.intersect_above(edge).gauss_mass(p.rho * y, nu);
                return mass + norm_cdf((edge - p.rho * y) / sd_c);
            };
            QuadResult q = integrate_gauss_weighted(f, 0.0, ctx.T, spec);
            out = {q.value, q.est_error, PsiMethod::Quadrature, q.converged};
            break;
        }
    }
    out.value = std::clamp(out.value, 0.0, 1.0);
    return out;
}

PsiValue psi2(const MarketModel& model, const Payoff& payoff, double c, const QuadratureSpec& spec) {
    if (!(c >= 0.0)) fail(ErrorCode::OutOfRange, "psi2: c must be nonnegative");
    PayoffContext ctx(model, payoff, spec);
    PsiValue out;
    switch (payoff.kind) {
        case PayoffKind::Digital:
            if (c == 0.0) {
                const double sd_y = std::sqrt(var_of(model, model.params().sigma_1, -model.params().sigma_2));
                out = {model.discount() * payoff.strike * norm_cdf(-ctx.thr.b_tilde / sd_y), 0.0,
                       PsiMethod::Quadrature, true};
            } else {
                out = digital_psi(ctx, c, Measure::Martingale);
            }
            break;
        case PayoffKind::QuantoDomestic:
            out = quanto_domestic_psi2(ctx, c);
            break;
        case PayoffKind::QuantoForeign:
            out = quanto_foreign_psi2(ctx, c);
            break;
        case PayoffKind::Outperformance:
            out = outperformance_psi(ctx, c, Measure::Martingale);
            break;
        case PayoffKind::Spread: {
            const MarketParams& p = model.params();
            const double nu = ctx.T * (1.0 - p.rho * p.rho);
            const double s1_lead = p.s0_1 * std::exp((p.r - 0.5 * p.sigma_1 * p.sigma_1) * ctx.T);
            auto f = [&](double y) {
                double s2 = ctx.s2_fwd(y, Measure::Martingale);
                double edge = (std::log((s2 + payoff.strike) / p.s0_1) -
                               (p.r - 0.5 * p.sigma_1 * p.sigma_1) * ctx.T) /
                              p.sigma_1;
                IntervalUnion set =
                    spread_upper_set(model, payoff.strike, c, y, Measure::Martingale)
                        .intersect_above(edge);
                double acc = 0.0;
                for (const auto& [lo, hi] : set.parts) {
                    acc += s1_lead * tilted_interval_mass(p.sigma_1, lo, hi, p.rho * y, nu) -
                           (s2 + payoff.strike) * gauss_interval_mass(lo, hi, p.rho * y, std::sqrt(nu));
                }
                return acc;
            };
            QuadResult q = integrate_gauss_weighted(f, 0.0, ctx.T, spec);
            out = {model.discount() * q.value, model.discount() * q.est_error, PsiMethod::Quadrature,
                   q.converged};
            break;
        }
    }
    out.value = std::max(out.value, 0.0);
    return out;
}

IntervalUnion spread_upper_set(const MarketModel& model, double strike, double c, double y,
                               Measure measure) {
    if (c == 0.0) return IntervalUnion::full_line();
    const MarketParams& p = model.params();
    const MeasureChange& mc = model.measure_constants();
    const double T = p.maturity;
    const double mu1 = measure == Measure::Physical ? p.alpha_1 : p.r;
    const double mu2 = measure == Measure::Physical ? p.alpha_2 : p.r;

    SpreadCoeffs sc;
    sc.log_p = mc.a2 * y + (measure == Measure::Physical ? 1.0 : -1.0) * mc.b * T;
    sc.log_q = std::log(c * p.s0_1) + (mu1 - 0.5 * p.sigma_1 * p.sigma_1) * T;
    double s2 = p.s0_2 * std::exp((mu2 - 0.5 * p.sigma_2 * p.sigma_2) * T + p.sigma_2 * y);
    sc.rhs = -c * (s2 + strike);

    const double a1c = mc.a1;
    const double sig1 = p.sigma_1;
    const double tol = 1e-12;

    if (a1c > sig1 + tol) {
        // Interior minimum at x_hat; full line or two-sided complement of a bounded interval.
        double x_hat = (std::log(a1c) + sc.log_p - std::log(sig1) - sc.log_q) / (sig1 - a1c);
        if (spread_gap(sc, a1c, sig1, x_hat) >= 0.0) return IntervalUnion::full_line();
        double step = 1.0;
        int tries = 0;
        while (spread_gap(sc, a1c, sig1, x_hat - step) < 0.0 && ++tries < 64) step *= 2.0;
        if (tries >= 64) fail(ErrorCode::RootBracketFailure, "spread set: left bracket not found");
        double x1 = bisect_spread(sc, a1c, sig1, x_hat - step, x_hat);
        step = 1.0;
        tries = 0;
        while (spread_gap(sc, a1c, sig1, x_hat + step) < 0.0 && ++tries < 64) step *= 2.0;
        if (tries >= 64) fail(ErrorCode::RootBracketFailure, "spread set: right bracket not found");
        double x2 = bisect_spread(sc, a1c, sig1, x_hat, x_hat + step);
        IntervalUnion u;
        u.parts = {{-kInf, x1}, {x2, kInf}};
        return u;
    }
    if (std::abs(a1c - sig1) <= tol) {
        // g collapses to (P - Q) exp(A1 x).
        if (sc.log_p >= sc.log_q) return IntervalUnion::full_line();
        double diff = std::exp(sc.log_p) - std::exp(sc.log_q);  // negative
        double x0 = std::log(sc.rhs / diff) / a1c;
        return IntervalUnion::half_line_below(x0);
    }
    // a1c < sig1: g is decreasing where negative; single left half-line.
    double x_c = (sc.log_p - sc.log_q) / (sig1 - a1c);  // g(x_c) = 0
    double step = 1.0;
    int tries = 0;
    while (spread_gap(sc, a1c, sig1, x_c + step) >= 0.0 && ++tries < 64) step *= 2.0;
    if (tries >= 64) fail(ErrorCode::RootBracketFailure, "spread set: descent bracket not found");
    double x0 = bisect_spread(sc, a1c, sig1, x_c, x_c + step);
    return IntervalUnion::half_line_below(x0);
}

// ------------------------------------------------------------- SuccessSet ----

SuccessSet::SuccessSet(const MarketModel& model, const Payoff& payoff, double c)
    : model_(&model), payoff_(payoff), c_(c) {
    if (!(c >= 0.0)) fail(ErrorCode::OutOfRange, "success_set: c must be nonnegative");
}

bool SuccessSet::contains(double w1, double w2) const {
    if (c_ == 0.0) return true;
    const MeasureChange& mc = model_->measure_constants();
    auto [s1, s2] = model_->terminal_assets(w1, w2, Measure::Physical);
    double h = payoff_value(payoff_, s1, s2);
    if (h == 0.0) return true;
    double lhs = mc.a1 * w1 + mc.a2 * w2 + mc.b * model_->params().maturity;
    return lhs >= std::log(c_ * h);
}

bool SuccessSet::contains_martingale(double w1, double w2) const {
    if (c_ == 0.0) return true;
    const MeasureChange& mc = model_->measure_constants();
    auto [s1, s2] = model_->terminal_assets(w1, w2, Measure::Martingale);
    double h = payoff_value(payoff_, s1, s2);
    if (h == 0.0) return true;
    double lhs = mc.a1 * w1 + mc.a2 * w2 - mc.b * model_->params().maturity;
    return lhs >= std::log(c_ * h);
}

SuccessSet success_set(const MarketModel& model, const Payoff& payoff, double c) {
    return SuccessSet(model, payoff, c);
}

// ------------------------------------------------------------ IntervalUnion --

IntervalUnion IntervalUnion::full_line() { return IntervalUnion{{{-kInf, kInf}}}; }
IntervalUnion IntervalUnion::empty() { return IntervalUnion{}; }
IntervalUnion IntervalUnion::half_line_below(double x) { return IntervalUnion{{{-kInf, x}}}; }
IntervalUnion IntervalUnion::half_line_above(double x) { return IntervalUnion{{{x, kInf}}}; }

bool IntervalUnion::contains(double x) const {
    for (const auto& [lo, hi] : parts)
        if (x > lo && x < hi) return true;
    return false;
}

IntervalUnion IntervalUnion::intersect_above(double lo) const {
    IntervalUnion out;
    for (const auto& [a, b] : parts) {
        double na = std::max(a, lo);
        if (b > na) out.parts.emplace_back(na, b);
    }
    return out;
}

double IntervalUnion::gauss_mass(double mean, double var) const {
    double sd = std::sqrt(var);
    double acc = 0.0;
    for (const auto& [lo, hi] : parts) acc += gauss_interval_mass(lo, hi, mean, sd);
    return acc;
}

// --------------------------------------------------------------- psi_curve ---

PsiCurve psi_curve(const MarketModel& model, const Payoff& payoff, const std::vector<double>& c_grid,
                   const QuadratureSpec& spec) {
    for (size_t i = 0; i < c_grid.size(); ++i) {
        if (!(c_grid[i] >= 0.0)) fail(ErrorCode::OutOfRange, "psi_curve: grid must be nonnegative");
        if (i > 0 && !(c_grid[i] > c_grid[i - 1]))
            fail(ErrorCode::OutOfRange, "psi_curve: grid must be strictly increasing");
    }
    PsiCurve curve;
    curve.c = c_grid;
    curve.psi1.resize(c_grid.size());
    curve.psi2.resize(c_grid.size());
    for (size_t i = 0; i < c_grid.size(); ++i) {
        curve.psi1[i] = psi1(model, payoff, c_grid[i], spec);
        curve.psi2[i] = psi2(model, payoff, c_grid[i], spec);
    }
    auto check = [&](const std::vector<PsiValue>& col, const char* name) {
        for (size_t i = 0; i + 1 < col.size(); ++i) {
            double slack = 2.0 * (col[i].est_error + col[i + 1].est_error) + 1e-12;
            if (col[i + 1].value > col[i].value + slack)
                fail(ErrorCode::MonotonicityViolation,
                     std::string("psi_curve: ") + name + " increases between grid points " +
                         std::to_string(c_grid[i]) + " and " + std::to_string(c_grid[i + 1]));
        }
    };
    check(curve.psi1, "psi1");
    check(curve.psi2, "psi2");
    return curve;
}

}  // namespace qh
