#include "qhedge.h"

#include <cstring>
#include <new>
#include <string>

#include "mc.hpp"
#include "payoffs.hpp"
#include "quantile_solver.hpp"

namespace {

thread_local std::string g_last_error;

qh_status map_code(qh::ErrorCode code) {
    switch (code) {
        case qh::ErrorCode::InvalidParameter:
        case qh::ErrorCode::DimensionMismatch:
        case qh::ErrorCode::InvalidCorrelation:
            return QH_ERR_INVALID_PARAMETER;
        case qh::ErrorCode::OutOfRange:
            return QH_ERR_OUT_OF_RANGE;
        case qh::ErrorCode::DegenerateConditioning:
            return QH_ERR_INVALID_PARAMETER;
        case qh::ErrorCode::DegenerateMeasure:
            return QH_ERR_DEGENERATE_MEASURE;
        case qh::ErrorCode::MonotonicityViolation:
            return QH_ERR_MONOTONICITY;
        case qh::ErrorCode::RootBracketFailure:
            return QH_ERR_ROOT_BRACKET;
    }
    return QH_ERR_INTERNAL;
}

template <typename F>
qh_status guarded(F&& body) {
    try {
        g_last_error.clear();
        return body();
    } catch (const qh::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return QH_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return QH_ERR_INTERNAL;
    }
}

qh::MarketParams to_params(const qh_market_params& p) {
    qh::MarketParams out;
    out.s0_1 = p.s0_1;
    out.s0_2 = p.s0_2;
    out.alpha_1 = p.alpha_1;
    out.alpha_2 = p.alpha_2;
    out.sigma_1 = p.sigma_1;
    out.sigma_2 = p.sigma_2;
    out.rho = p.rho;
    out.r = p.r;
    out.maturity = p.maturity;
    return out;
}

qh::Payoff to_payoff(const qh_payoff& p) {
    if (p.kind < QH_PAYOFF_DIGITAL || p.kind > QH_PAYOFF_SPREAD)
        qh::fail(qh::ErrorCode::InvalidParameter, "unknown payoff kind");
    return {static_cast<qh::PayoffKind>(p.kind), p.strike};
}

qh::QuadratureSpec to_spec(const qh_quad_spec* spec) {
    qh::QuadratureSpec out;
    if (spec) {
        if (spec->abs_tol > 0.0) out.abs_tol = spec->abs_tol;
        if (spec->trunc_sigmas > 0.0) out.trunc_sigmas = spec->trunc_sigmas;
        if (spec->max_subdivisions > 0) out.max_subdivisions = spec->max_subdivisions;
    }
    return out;
}

qh_psi_value to_c(const qh::PsiValue& v) {
    return {v.value, v.est_error, v.converged ? 1 : 0};
}

qh_quantile_result to_c(const qh::QuantileResult& r) {
    qh_quantile_result out;
    out.value = r.value;
    out.c = r.c;
    out.branch = static_cast<qh_branch>(r.branch);
    out.psi1_at_c = to_c(r.psi1_at_c);
    out.psi2_at_c = to_c(r.psi2_at_c);
    return out;
}

qh_mc_estimate to_c(const qh::McEstimate& e) { return {e.mean, e.std_error, e.n, e.seed}; }

const qh::MarketModel& deref(const qh_market* market) {
    if (!market) qh::fail(qh::ErrorCode::InvalidParameter, "null market handle");
    return *reinterpret_cast<const qh::MarketModel*>(market);
}

}  // namespace

extern "C" {

const char* qh_status_message(qh_status status) {
    switch (status) {
        case QH_OK: return "ok";
        case QH_ERR_INVALID_PARAMETER: return "invalid parameter";
        case QH_ERR_OUT_OF_RANGE: return "argument out of range";
        case QH_ERR_TOLERANCE_NOT_MET: return "requested tolerance not met";
        case QH_ERR_ROOT_BRACKET: return "root bracketing failed";
        case QH_ERR_DEGENERATE_MEASURE: return "degenerate measure change";
        case QH_ERR_MONOTONICITY: return "monotonicity violation";
        case QH_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* qh_last_error(void) { return g_last_error.c_str(); }

qh_status qh_market_create(const qh_market_params* params, qh_market** out) {
    return guarded([&]() -> qh_status {
        if (!params || !out) qh::fail(qh::ErrorCode::InvalidParameter, "null argument");
        auto* model = new qh::MarketModel(to_params(*params));
        *out = reinterpret_cast<qh_market*>(model);
        return QH_OK;
    });
}

void qh_market_destroy(qh_market* market) {
    delete reinterpret_cast<qh::MarketModel*>(market);
}

qh_status qh_price(const qh_market* market, const qh_payoff* payoff, const qh_quad_spec* spec,
                   double* out) {
    return guarded([&]() -> qh_status {
        if (!payoff || !out) qh::fail(qh::ErrorCode::InvalidParameter, "null argument");
        *out = qh::price(deref(market), to_payoff(*payoff), to_spec(spec));
        return QH_OK;
    });
}

qh_status qh_prob_zero_payoff(const qh_market* market, const qh_payoff* payoff,
                              const qh_quad_spec* spec, double* out) {
    return guarded([&]() -> qh_status {
        if (!payoff || !out) qh::fail(qh::ErrorCode::InvalidParameter, "null argument");
        *out = qh::prob_zero_payoff(deref(market), to_payoff(*payoff), to_spec(spec));
        return QH_OK;
    });
}

qh_status qh_psi(const qh_market* market, const qh_payoff* payoff, int which, double c,
                 const qh_quad_spec* spec, qh_psi_value* out) {
    return guarded([&]() -> qh_status {
        if (!payoff || !out) qh::fail(qh::ErrorCode::InvalidParameter, "null argument");
        if (which != 1 && which != 2) qh::fail(qh::ErrorCode::InvalidParameter, "which must be 1 or 2");
        qh::PsiValue v = which == 1 ? qh::psi1(deref(market), to_payoff(*payoff), c, to_spec(spec))
                                    : qh::psi2(deref(market), to_payoff(*payoff), c, to_spec(spec));
        *out = to_c(v);
        return v.converged ? QH_OK : QH_ERR_TOLERANCE_NOT_MET;
    });
}

qh_status qh_phi1(const qh_market* market, const qh_payoff* payoff, double budget,
                  const qh_quad_spec* spec, qh_quantile_result* out) {
    return guarded([&]() -> qh_status {
        if (!payoff || !out) qh::fail(qh::ErrorCode::InvalidParameter, "null argument");
        qh::SolverSpec solver;
        solver.quad = to_spec(spec);
        *out = to_c(qh::phi1(deref(market), to_payoff(*payoff), budget, solver));
        return QH_OK;
    });
}

qh_status qh_phi2(const qh_market* market, const qh_payoff* payoff, double alpha,
                  const qh_quad_spec* spec, qh_quantile_result* out) {
    return guarded([&]() -> qh_status {
        if (!payoff || !out) qh::fail(qh::ErrorCode::InvalidParameter, "null argument");
        qh::SolverSpec solver;
        solver.quad = to_spec(spec);
        *out = to_c(qh::phi2(deref(market), to_payoff(*payoff), alpha, solver));
        return QH_OK;
    });
}

qh_status qh_mc_psi(const qh_market* market, const qh_payoff* payoff, int which, double c,
                    uint64_t n, uint64_t seed, qh_mc_estimate* out) {
    return guarded([&]() -> qh_status {
        if (!payoff || !out) qh::fail(qh::ErrorCode::InvalidParameter, "null argument");
        if (which != 1 && which != 2) qh::fail(qh::ErrorCode::InvalidParameter, "which must be 1 or 2");
        qh::McSpec spec{n, seed};
        qh::McEstimate e = which == 1 ? qh::mc_psi1(deref(market), to_payoff(*payoff), c, spec)
                                      : qh::mc_psi2(deref(market), to_payoff(*payoff), c, spec);
        *out = to_c(e);
        return QH_OK;
    });
}

qh_status qh_mc_price(const qh_market* market, const qh_payoff* payoff, uint64_t n, uint64_t seed,
                      qh_mc_estimate* out) {
    return guarded([&]() -> qh_status {
        if (!payoff || !out) qh::fail(qh::ErrorCode::InvalidParameter, "null argument");
        *out = to_c(qh::mc_price(deref(market), to_payoff(*payoff), qh::McSpec{n, seed}));
        return QH_OK;
    });
}

qh_status qh_mc_prob_zero(const qh_market* market, const qh_payoff* payoff, uint64_t n,
                          uint64_t seed, qh_mc_estimate* out) {
    return guarded([&]() -> qh_status {
        if (!payoff || !out) qh::fail(qh::ErrorCode::InvalidParameter, "null argument");
        *out = to_c(qh::mc_prob_zero(deref(market), to_payoff(*payoff), qh::McSpec{n, seed}));
        return QH_OK;
    });
}

qh_status qh_success_set_contains(const qh_market* market, const qh_payoff* payoff, double c,
                                  const double* w1, const double* w2, size_t count, int* out) {
    return guarded([&]() -> qh_status {
        if (!payoff || !w1 || !w2 || !out) qh::fail(qh::ErrorCode::InvalidParameter, "null argument");
        qh::SuccessSet set = qh::success_set(deref(market), to_payoff(*payoff), c);
        for (size_t i = 0; i < count; ++i) out[i] = set.contains(w1[i], w2[i]) ? 1 : 0;
        return QH_OK;
    });
}

}  // extern "C"
