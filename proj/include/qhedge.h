/* C interface for the two-asset quantile-hedging library. */

#ifndef QHEDGE_H
#define QHEDGE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qh_status {
    QH_OK = 0,
    QH_ERR_INVALID_PARAMETER = 1,
    QH_ERR_OUT_OF_RANGE = 2,
    QH_ERR_TOLERANCE_NOT_MET = 3,
    QH_ERR_ROOT_BRACKET = 4,
    QH_ERR_DEGENERATE_MEASURE = 5,
    QH_ERR_MONOTONICITY = 6,
    QH_ERR_INTERNAL = 7
} qh_status;

typedef enum qh_payoff_kind {
    QH_PAYOFF_DIGITAL = 0,
    QH_PAYOFF_QUANTO_DOMESTIC = 1,
    QH_PAYOFF_QUANTO_FOREIGN = 2,
    QH_PAYOFF_OUTPERFORMANCE = 3,
    QH_PAYOFF_SPREAD = 4
} qh_payoff_kind;

typedef enum qh_branch {
    QH_BRANCH_INTERIOR = 0,
    QH_BRANCH_FULL_HEDGE = 1,
    QH_BRANCH_ZERO_BUDGET = 2,
    QH_BRANCH_ZERO_COST = 3
} qh_branch;

typedef struct qh_market_params {
    double s0_1, s0_2;
    double alpha_1, alpha_2;
    double sigma_1, sigma_2;
    double rho;
    double r;
    double maturity;
} qh_market_params;

typedef struct qh_payoff {
    qh_payoff_kind kind;
    double strike;
} qh_payoff;

/* Zero fields select the library defaults. */
typedef struct qh_quad_spec {
    double abs_tol;
    double trunc_sigmas;
    int max_subdivisions;
} qh_quad_spec;

typedef struct qh_psi_value {
    double value;
    double est_error;
    int converged;
} qh_psi_value;

typedef struct qh_quantile_result {
    double value;
    double c;
    qh_branch branch;
    qh_psi_value psi1_at_c;
    qh_psi_value psi2_at_c;
} qh_quantile_result;

typedef struct qh_mc_estimate {
    double mean;
    double std_error;
    uint64_t n;
    uint64_t seed;
} qh_mc_estimate;

typedef struct qh_market qh_market;

/* Static description of a status code. */
const char* qh_status_message(qh_status status);

/* Message of the most recent failure on this thread; empty string if none. */
const char* qh_last_error(void);

qh_status qh_market_create(const qh_market_params* params, qh_market** out);
void qh_market_destroy(qh_market* market);

qh_status qh_price(const qh_market* market, const qh_payoff* payoff, const qh_quad_spec* spec,
                   double* out);
qh_status qh_prob_zero_payoff(const qh_market* market, const qh_payoff* payoff,
                              const qh_quad_spec* spec, double* out);

/* psi1 (which = 1) or psi2 (which = 2) at level c >= 0. */
qh_status qh_psi(const qh_market* market, const qh_payoff* payoff, int which, double c,
                 const qh_quad_spec* spec, qh_psi_value* out);

qh_status qh_phi1(const qh_market* market, const qh_payoff* payoff, double budget,
                  const qh_quad_spec* spec, qh_quantile_result* out);
qh_status qh_phi2(const qh_market* market, const qh_payoff* payoff, double alpha,
                  const qh_quad_spec* spec, qh_quantile_result* out);

qh_status qh_mc_psi(const qh_market* market, const qh_payoff* payoff, int which, double c,
                    uint64_t n, uint64_t seed, qh_mc_estimate* out);
qh_status qh_mc_price(const qh_market* market, const qh_payoff* payoff, uint64_t n, uint64_t seed,
                      qh_mc_estimate* out);
qh_status qh_mc_prob_zero(const qh_market* market, const qh_payoff* payoff, uint64_t n,
                          uint64_t seed, qh_mc_estimate* out);

/* Success-set membership for a batch of physical-measure Brownian coordinates.
 * out[i] is set to 1 if (w1[i], w2[i]) lies in A_c, else 0. */
qh_status qh_success_set_contains(const qh_market* market, const qh_payoff* payoff, double c,
                                  const double* w1, const double* w2, size_t count, int* out);

#ifdef __cplusplus
}
#endif

#endif /* QHEDGE_H */
