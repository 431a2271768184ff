#pragma once

#include <cstdint>
#include <vector>

#include "psi_engine.hpp"
#include "rng.hpp"

namespace qh {

struct McSpec {
    std::uint64_t n = 1'000'000;
    std::uint64_t seed = 20260826;
};

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n = 0;
    std::uint64_t seed = 0;
};

// Correlated terminal Brownian pair for sample `index`; identical construction
// under either measure, only the interpretation of the coordinates differs.
std::pair<double, double> sample_terminal_brownian(const MarketModel& model, const CounterRng& rng,
                                                   std::uint64_t index);

// P(A_c) by direct simulation of the unconditional success predicate.
McEstimate mc_psi1(const MarketModel& model, const Payoff& payoff, double c, const McSpec& spec);

// E~[exp(-rT) H 1_{A_c}] by simulation under the martingale measure.
McEstimate mc_psi2(const MarketModel& model, const Payoff& payoff, double c, const McSpec& spec);

McEstimate mc_price(const MarketModel& model, const Payoff& payoff, const McSpec& spec);
McEstimate mc_prob_zero(const MarketModel& model, const Payoff& payoff, const McSpec& spec);

// E[Z~_T] and E[Z~_T^{-1}]-style identities used to validate the density change.
McEstimate mc_density_mean(const MarketModel& model, const McSpec& spec);

// Two equivalent probability measures on finitely many atoms, for cross-checking
// the threshold-set construction against exhaustive search.
struct DiscreteMarket {
    std::vector<double> p1;  // sums to 1, all entries positive
    std::vector<double> p2;  // sums to 1, all entries positive
};

struct NpResult {
    std::uint32_t best_mask = 0;       // exhaustive optimum
    std::uint32_t threshold_mask = 0;  // likelihood-ratio set at the chosen c
    double best_p1 = 0.0, best_p2 = 0.0;
    double thr_p1 = 0.0, thr_p2 = 0.0;
    double c = 0.0;
    bool exact = false;  // threshold set attains the constraint exactly
};

// Maximize P1(A) over subsets with P2(A) <= budget; the threshold set is
// {dP1/dP2 >= c} with equal-ratio atoms taken as a block.
NpResult np_bruteforce(const DiscreteMarket& market, double budget);

// Minimize P2(A) over subsets with P1(A) >= confidence; the threshold set is
// {dP2/dP1 <= c}.
NpResult np_bruteforce_min(const DiscreteMarket& market, double confidence);

}  // namespace qh
