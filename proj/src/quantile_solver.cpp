#include "quantile_solver.hpp"

#include <cmath>
#include <limits>

#include "payoffs.hpp"

namespace qh {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool degenerate_density(const MarketModel& model) {
    const MeasureChange& mc = model.measure_constants();
    return std::abs(mc.a1) <= 1e-12 && std::abs(mc.a2) <= 1e-12;
}

// The digital claim under a trivial density change has a two-valued psi2; interior
// targets are unattainable and the optimal-set family collapses to a step.
void guard_degenerate(const MarketModel& model, const Payoff& payoff) {
    if (payoff.kind == PayoffKind::Digital && degenerate_density(model))
        fail(ErrorCode::DegenerateMeasure,
             "digital claim with alpha_1 = alpha_2 = r: psi2 is a step function, "
             "interior budgets are unattainable");
}

// Solve target = f(c) for a nonincreasing f, smallest root preferred.
// Returns c with f(c) within tol of target, or the left edge of the matching flat.
template <typename F>
double solve_decreasing(F&& f, double target, double tol, const SolverSpec& spec, double c_scale) {
    double c_lo = 0.0;                    // f(c_lo) >= target
    double c_hi = 1.0 / c_scale;
    int tries = 0;
    while (f(c_hi) > target + tol) {
        c_lo = c_hi;
        c_hi *= 2.0;
        if (++tries > spec.max_doublings)
            fail(ErrorCode::RootBracketFailure, "quantile solver: level not reached while expanding c");
    }
    // Bisect on the predicate f(c) > target + tol to land at the smallest c whose
    // value is within tolerance of the target.
    for (int it = 0; it < 200 && c_hi - c_lo > spec.c_rel_tol * std::max(1.0, c_hi); ++it) {
        double mid = 0.5 * (c_lo + c_hi);
        if (f(mid) > target + tol)
            c_lo = mid;
        else
            c_hi = mid;
    }
    return c_hi;
}

}  // namespace

QuantileResult phi1(const MarketModel& model, const Payoff& payoff, double budget,
                    const SolverSpec& spec) {
    if (!(budget >= 0.0)) fail(ErrorCode::OutOfRange, "phi1: budget must be nonnegative");
    const double p0 = price(model, payoff, spec.quad);
    QuantileResult out;
    if (budget >= p0 * (1.0 - spec.target_rel_tol)) {
        out.branch = Branch::FullHedge;
        out.c = 0.0;
        out.value = 1.0;
        out.psi1_at_c = {1.0, 0.0, PsiMethod::Quadrature, true};
        out.psi2_at_c = {p0, 0.0, PsiMethod::Quadrature, true};
        return out;
    }
    if (budget <= p0 * spec.target_rel_tol) {
        out.branch = Branch::ZeroBudget;
        out.c = kInf;
        out.value = prob_zero_payoff(model, payoff, spec.quad);
        out.psi1_at_c = {out.value, 0.0, PsiMethod::Quadrature, true};
        out.psi2_at_c = {0.0, 0.0, PsiMethod::Quadrature, true};
        return out;
    }
    guard_degenerate(model, payoff);
    const double tol = spec.target_rel_tol * p0;
    auto f = [&](double c) { return psi2(model, payoff, c, spec.quad).value; };
    out.c = solve_decreasing(f, budget, tol, spec, p0);
    out.psi1_at_c = psi1(model, payoff, out.c, spec.quad);
    out.psi2_at_c = psi2(model, payoff, out.c, spec.quad);
    out.value = out.psi1_at_c.value;
    out.branch = Branch::Interior;
    return out;
}

QuantileResult phi2(const MarketModel& model, const Payoff& payoff, double alpha,
                    const SolverSpec& spec) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) fail(ErrorCode::OutOfRange, "phi2: alpha must lie in [0, 1]");
    const double p0 = price(model, payoff, spec.quad);
    QuantileResult out;
    if (alpha <= spec.target_rel_tol) {
        out.branch = Branch::FullHedge;
        out.c = 0.0;
        out.value = p0;
        out.psi1_at_c = {1.0, 0.0, PsiMethod::Quadrature, true};
        out.psi2_at_c = {p0, 0.0, PsiMethod::Quadrature, true};
        return out;
    }
    const double floor_prob = prob_zero_payoff(model, payoff, spec.quad);
    const double target = 1.0 - alpha;
    if (target <= floor_prob + spec.target_rel_tol) {
        out.branch = Branch::ZeroCost;
        out.c = kInf;
        out.value = 0.0;
        out.psi1_at_c = {floor_prob, 0.0, PsiMethod::Quadrature, true};
        out.psi2_at_c = {0.0, 0.0, PsiMethod::Quadrature, true};
        return out;
    }
    guard_degenerate(model, payoff);
    auto f = [&](double c) { return psi1(model, payoff, c, spec.quad).value; };
    out.c = solve_decreasing(f, target, spec.target_rel_tol, spec, p0);
    out.psi1_at_c = psi1(model, payoff, out.c, spec.quad);
    out.psi2_at_c = psi2(model, payoff, out.c, spec.quad);
    out.value = out.psi2_at_c.value;
    out.branch = Branch::Interior;
    return out;
}

DualityReport duality_check(const MarketModel& model, const Payoff& payoff, double alpha,
                            const SolverSpec& spec) {
    DualityReport rep;
    rep.alpha = alpha;
    QuantileResult cost = phi2(model, payoff, alpha, spec);
    rep.capital = cost.value;
    QuantileResult back = phi1(model, payoff, rep.capital, spec);
    rep.achieved = back.value;
    rep.gap = rep.achieved - (1.0 - alpha);
    return rep;
}

}  // namespace qh
