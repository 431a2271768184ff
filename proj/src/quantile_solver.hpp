#pragma once

#include "psi_engine.hpp"

namespace qh {

// Which part of the hedging frontier a query landed on.
enum class Branch {
    Interior,   // solved psi2(c) = budget or psi1(c) = 1 - alpha for finite c > 0
    FullHedge,  // budget >= price, or alpha = 0: replicate, success probability 1
    ZeroBudget, // budget = 0: only the zero-payoff event succeeds
    ZeroCost    // requested success probability already covered by {H = 0}
};

struct QuantileResult {
    double value = 0.0;      // phi1: success probability; phi2: required capital
    double c = 0.0;          // level of the optimal set A_c (0 on FullHedge, inf-like on ZeroBudget)
    Branch branch = Branch::Interior;
    PsiValue psi1_at_c;
    PsiValue psi2_at_c;
};

struct SolverSpec {
    QuadratureSpec quad;
    double target_rel_tol = 1e-8;  // on psi2 relative to price, absolute on psi1
    double c_rel_tol = 1e-12;
    int max_doublings = 64;
};

// Maximal probability of a successful hedge from initial capital `budget`.
QuantileResult phi1(const MarketModel& model, const Payoff& payoff, double budget,
                    const SolverSpec& spec = SolverSpec{});

// Minimal capital whose best hedge fails with probability at most `alpha`.
QuantileResult phi2(const MarketModel& model, const Payoff& payoff, double alpha,
                    const SolverSpec& spec = SolverSpec{});

struct DualityReport {
    double alpha = 0.0;
    double capital = 0.0;    // phi2(alpha)
    double achieved = 0.0;   // phi1(capital)
    double gap = 0.0;        // achieved - (1 - alpha)
};

// Round-trip consistency phi1(phi2(alpha)) vs 1 - alpha.
DualityReport duality_check(const MarketModel& model, const Payoff& payoff, double alpha,
                            const SolverSpec& spec = SolverSpec{});

}  // namespace qh
