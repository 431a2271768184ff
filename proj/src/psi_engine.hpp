#pragma once

#include <vector>

#include "payoffs.hpp"

namespace qh {

// A_c = {Z~_T^{-1} >= c H}, evaluable on simulated terminal points.
class SuccessSet {
public:
    SuccessSet(const MarketModel& model, const Payoff& payoff, double c);

    double level() const { return c_; }
    const Payoff& payoff() const { return payoff_; }

    // Membership with (w1, w2) read as physical-measure Brownian coordinates.
    bool contains(double w1, double w2) const;
    // Membership with (w1, w2) read as P-tilde coordinates.
    bool contains_martingale(double w1, double w2) const;

private:
    const MarketModel* model_;
    Payoff payoff_;
    double c_;
};

// Ordered disjoint union of extended-real open intervals.
struct IntervalUnion {
    std::vector<std::pair<double, double>> parts;  // (lo, hi), lo < hi, sorted

    static IntervalUnion full_line();
    static IntervalUnion empty();
    static IntervalUnion half_line_below(double x);
    static IntervalUnion half_line_above(double x);

    bool contains(double x) const;
    IntervalUnion intersect_above(double lo) const;  // intersection with (lo, +inf)
    // Mass of the union under N(mean, var).
    double gauss_mass(double mean, double var) const;
};

enum class PsiMethod { Quadrature, MonteCarlo };

struct PsiValue {
    double value = 0.0;
    double est_error = 0.0;
    PsiMethod method = PsiMethod::Quadrature;
    bool converged = true;
};

struct PsiCurve {
    std::vector<double> c;
    std::vector<PsiValue> psi1;
    std::vector<PsiValue> psi2;
};

SuccessSet success_set(const MarketModel& model, const Payoff& payoff, double c);

// P(A_c) via the payoff-specific conditional-Gaussian quadrature; exactly 1 at c = 0.
PsiValue psi1(const MarketModel& model, const Payoff& payoff, double c,
              const QuadratureSpec& spec = QuadratureSpec{});

// E~[exp(-rT) H 1_{A_c}]; equals price(model, payoff) at c = 0.
PsiValue psi2(const MarketModel& model, const Payoff& payoff, double c,
              const QuadratureSpec& spec = QuadratureSpec{});

// Spread-option section set S(c, y) (Physical) or S~(c, y) (Martingale) in the
// first Brownian coordinate, as an interval union.
IntervalUnion spread_upper_set(const MarketModel& model, double strike, double c, double y,
                               Measure measure);

// Tabulated psi values over a strictly increasing grid; throws MonotonicityViolation
// if a column increases beyond combined error estimates.
PsiCurve psi_curve(const MarketModel& model, const Payoff& payoff, const std::vector<double>& c_grid,
                   const QuadratureSpec& spec = QuadratureSpec{});

}  // namespace qh
