#include "mc.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "payoffs.hpp"

namespace qh {

namespace {

McEstimate finalize(double sum, double sum_sq, std::uint64_t n, std::uint64_t seed) {
    McEstimate est;
    est.n = n;
    est.seed = seed;
    est.mean = sum / static_cast<double>(n);
    double var = std::max(0.0, sum_sq / static_cast<double>(n) - est.mean * est.mean);
    est.std_error = std::sqrt(var / static_cast<double>(n));
    return est;
}

template <typename F>
McEstimate mc_mean(const F& draw, const McSpec& spec) {
    if (spec.n == 0) fail(ErrorCode::InvalidParameter, "monte carlo: sample count must be positive");
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t i = 0; i < spec.n; ++i) {
        double v = draw(i);
        sum += v;
        sum_sq += v * v;
    }
    return finalize(sum, sum_sq, spec.n, spec.seed);
}

}  // namespace

std::pair<double, double> sample_terminal_brownian(const MarketModel& model, const CounterRng& rng,
                                                   std::uint64_t index) {
    const MarketParams& p = model.params();
    double z1 = rng.normal(index, 0);
    double z2 = rng.normal(index, 1);
    double rt = std::sqrt(p.maturity);
    return {rt * z1, rt * (p.rho * z1 + std::sqrt(1.0 - p.rho * p.rho) * z2)};
}

McEstimate mc_psi1(const MarketModel& model, const Payoff& payoff, double c, const McSpec& spec) {
    SuccessSet set = success_set(model, payoff, c);
    CounterRng rng(spec.seed);
    return mc_mean(
        [&](std::uint64_t i) {
            auto [w1, w2] = sample_terminal_brownian(model, rng, i);
            return set.contains(w1, w2) ? 1.0 : 0.0;
        },
        spec);
}

McEstimate mc_psi2(const MarketModel& model, const Payoff& payoff, double c, const McSpec& spec) {
    SuccessSet set = success_set(model, payoff, c);
    CounterRng rng(spec.seed);
    const double disc = model.discount();
    return mc_mean(
        [&](std::uint64_t i) {
            auto [w1, w2] = sample_terminal_brownian(model, rng, i);
            if (!set.contains_martingale(w1, w2)) return 0.0;
            auto [s1, s2] = model.terminal_assets(w1, w2, Measure::Martingale);
            return disc * payoff_value(payoff, s1, s2);
        },
        spec);
}

McEstimate mc_price(const MarketModel& model, const Payoff& payoff, const McSpec& spec) {
    return mc_psi2(model, payoff, 0.0, spec);
}

McEstimate mc_prob_zero(const MarketModel& model, const Payoff& payoff, const McSpec& spec) {
    CounterRng rng(spec.seed);
    return mc_mean(
        [&](std::uint64_t i) {
            auto [w1, w2] = sample_terminal_brownian(model, rng, i);
            auto [s1, s2] = model.terminal_assets(w1, w2, Measure::Physical);
            return payoff_value(payoff, s1, s2) == 0.0 ? 1.0 : 0.0;
        },
        spec);
}

McEstimate mc_density_mean(const MarketModel& model, const McSpec& spec) {
    CounterRng rng(spec.seed);
    return mc_mean(
        [&](std::uint64_t i) {
            auto [w1, w2] = sample_terminal_brownian(model, rng, i);
            return model.density_at(w1, w2);
        },
        spec);
}

// ------------------------------------------------------------ finite market --

namespace {

constexpr double kAtomTol = 1e-12;

void validate_market(const DiscreteMarket& market) {
    size_t n = market.p1.size();
    if (n == 0 || n > 20 || market.p2.size() != n)
        fail(ErrorCode::DimensionMismatch, "finite market: need 1..20 atoms in both measures");
    double t1 = 0.0, t2 = 0.0;
    for (size_t i = 0; i < n; ++i) {
        if (!(market.p1[i] > 0.0) || !(market.p2[i] > 0.0))
            fail(ErrorCode::InvalidParameter, "finite market: both measures must be strictly positive");
        t1 += market.p1[i];
        t2 += market.p2[i];
    }
    if (std::abs(t1 - 1.0) > 1e-9 || std::abs(t2 - 1.0) > 1e-9)
        fail(ErrorCode::InvalidParameter, "finite market: each measure must sum to one");
}

std::pair<double, double> mask_weights(const DiscreteMarket& market, std::uint32_t mask) {
    double w1 = 0.0, w2 = 0.0;
    for (size_t i = 0; i < market.p1.size(); ++i)
        if (mask & (1u << i)) {
            w1 += market.p1[i];
            w2 += market.p2[i];
        }
    return {w1, w2};
}

}  // namespace

NpResult np_bruteforce(const DiscreteMarket& market, double budget) {
    validate_market(market);
    if (!(budget > 0.0 && budget < 1.0)) fail(ErrorCode::OutOfRange, "np_bruteforce: budget must be in (0,1)");
    const size_t n = market.p1.size();

    NpResult out;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        auto [w1, w2] = mask_weights(market, mask);
        if (w2 <= budget + kAtomTol && w1 > out.best_p1) {
            out.best_p1 = w1;
            out.best_p2 = w2;
            out.best_mask = mask;
        }
    }

    // Threshold family: descending likelihood ratio dP1/dP2, ties as a block.
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return market.p1[a] / market.p2[a] > market.p1[b] / market.p2[b];
    });
    std::uint32_t mask = 0;
    double w1 = 0.0, w2 = 0.0;
    out.c = market.p1[order[0]] / market.p2[order[0]] + 1.0;
    for (size_t k = 0; k < n;) {
        double ratio = market.p1[order[k]] / market.p2[order[k]];
        std::uint32_t block = 0;
        double b1 = 0.0, b2 = 0.0;
        while (k < n && market.p1[order[k]] / market.p2[order[k]] >= ratio - kAtomTol) {
            block |= 1u << order[k];
            b1 += market.p1[order[k]];
            b2 += market.p2[order[k]];
            ++k;
        }
        if (w2 + b2 > budget + kAtomTol) break;
        mask |= block;
        w1 += b1;
        w2 += b2;
        out.c = ratio;
    }
    out.threshold_mask = mask;
    out.thr_p1 = w1;
    out.thr_p2 = w2;
    out.exact = std::abs(w2 - budget) <= 1e-9;
    return out;
}

NpResult np_bruteforce_min(const DiscreteMarket& market, double confidence) {
    validate_market(market);
    if (!(confidence >= 0.0 && confidence <= 1.0))
        fail(ErrorCode::OutOfRange, "np_bruteforce_min: confidence must be in [0,1]");
    const size_t n = market.p1.size();

    NpResult out;
    out.best_p2 = 2.0;
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        auto [w1, w2] = mask_weights(market, mask);
        if (w1 >= confidence - kAtomTol && w2 < out.best_p2) {
            out.best_p1 = w1;
            out.best_p2 = w2;
            out.best_mask = mask;
        }
    }

    // Threshold family: ascending dP2/dP1, stop once the confidence is covered.
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return market.p2[a] / market.p1[a] < market.p2[b] / market.p1[b];
    });
    std::uint32_t mask = 0;
    double w1 = 0.0, w2 = 0.0;
    out.c = 0.0;
    for (size_t k = 0; k < n && w1 < confidence - kAtomTol;) {
        double ratio = market.p2[order[k]] / market.p1[order[k]];
        while (k < n && market.p2[order[k]] / market.p1[order[k]] <= ratio + kAtomTol) {
            mask |= 1u << order[k];
            w1 += market.p1[order[k]];
            w2 += market.p2[order[k]];
            ++k;
        }
        out.c = ratio;
    }
    out.threshold_mask = mask;
    out.thr_p1 = w1;
    out.thr_p2 = w2;
    out.exact = std::abs(w1 - confidence) <= 1e-9;
    return out;
}

}  // namespace qh
