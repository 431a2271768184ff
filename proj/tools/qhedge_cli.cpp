// Command-line surface over the shared-library C interface: pricing, psi and
// phi curves, and a self-verification run. Output is CSV with one header row;
// every value column is accompanied by its error estimate.

#include <cinttypes>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qhedge.h"

namespace {

constexpr int kExitBadInput = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitVerifyFailed = 3;

struct RunConfig {
    qh_market_params market{100.0, 100.0, 0.10, 0.08, 0.2, 0.3, 0.5, 0.05, 1.0};
    qh_payoff payoff{QH_PAYOFF_DIGITAL, 100.0};
    qh_quad_spec quad{0.0, 0.0, 0};
    std::uint64_t mc_n = 1000000;
    std::uint64_t mc_seed = 20260826;
    std::vector<double> c_grid;
    std::vector<double> alpha_grid;
    std::vector<double> x_grid;
};

int fail_input(const std::string& msg) {
    std::fprintf(stderr, "error: %s\n", msg.c_str());
    return kExitBadInput;
}

int classify_status(qh_status s) {
    switch (s) {
        case QH_OK:
            return 0;
        case QH_ERR_INVALID_PARAMETER:
        case QH_ERR_OUT_OF_RANGE:
        case QH_ERR_DEGENERATE_MEASURE:
            return kExitBadInput;
        default:
            return kExitNumerical;
    }
}

int report_status(qh_status s, const char* context) {
    std::fprintf(stderr, "error: %s: %s", context, qh_status_message(s));
    const char* detail = qh_last_error();
    if (detail && detail[0]) std::fprintf(stderr, " (%s)", detail);
    std::fprintf(stderr, "\n");
    return classify_status(s);
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool parse_real_list(const std::string& text, std::vector<double>& out) {
    out.clear();
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) return false;
        } catch (...) {
            return false;
        }
    }
    return !out.empty();
}

bool payoff_from_name(const std::string& name, qh_payoff_kind& kind) {
    static const std::map<std::string, qh_payoff_kind> table = {
        {"digital", QH_PAYOFF_DIGITAL},         {"quanto-dom", QH_PAYOFF_QUANTO_DOMESTIC},
        {"quanto-for", QH_PAYOFF_QUANTO_FOREIGN}, {"outperf", QH_PAYOFF_OUTPERFORMANCE},
        {"spread", QH_PAYOFF_SPREAD}};
    auto it = table.find(name);
    if (it == table.end()) return false;
    kind = it->second;
    return true;
}

const char* payoff_name(qh_payoff_kind kind) {
    switch (kind) {
        case QH_PAYOFF_DIGITAL: return "digital";
        case QH_PAYOFF_QUANTO_DOMESTIC: return "quanto-dom";
        case QH_PAYOFF_QUANTO_FOREIGN: return "quanto-for";
        case QH_PAYOFF_OUTPERFORMANCE: return "outperf";
        case QH_PAYOFF_SPREAD: return "spread";
    }
    return "unknown";
}

const char* branch_name(qh_branch b) {
    switch (b) {
        case QH_BRANCH_INTERIOR: return "interior";
        case QH_BRANCH_FULL_HEDGE: return "full-hedge";
        case QH_BRANCH_ZERO_BUDGET: return "zero-budget";
        case QH_BRANCH_ZERO_COST: return "zero-cost";
    }
    return "unknown";
}

// Plain key-value config: [section] headers, key = value lines, # comments.
bool load_config(const std::string& path, RunConfig& cfg, std::string& err) {
    std::ifstream in(path);
    if (!in) {
        err = "cannot open config file: " + path;
        return false;
    }
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto trim = [](std::string s) {
            size_t a = s.find_first_not_of(" \t\r");
            size_t b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        size_t eq = line.find('=');
        if (eq == std::string::npos) {
            err = "line " + std::to_string(lineno) + ": expected key = value";
            return false;
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        auto num = [&](double& slot) {
            try {
                size_t pos = 0;
                slot = std::stod(value, &pos);
                return pos == value.size();
            } catch (...) {
                return false;
            }
        };
        auto integer = [&](std::uint64_t& slot) {
            try {
                size_t pos = 0;
                slot = std::stoull(value, &pos);
                return pos == value.size();
            } catch (...) {
                return false;
            }
        };
        bool ok = false;
        if (section == "market") {
            if (key == "s0_1") ok = num(cfg.market.s0_1);
            else if (key == "s0_2") ok = num(cfg.market.s0_2);
            else if (key == "alpha_1") ok = num(cfg.market.alpha_1);
            else if (key == "alpha_2") ok = num(cfg.market.alpha_2);
            else if (key == "sigma_1") ok = num(cfg.market.sigma_1);
            else if (key == "sigma_2") ok = num(cfg.market.sigma_2);
            else if (key == "rho") ok = num(cfg.market.rho);
            else if (key == "r") ok = num(cfg.market.r);
            else if (key == "maturity") ok = num(cfg.market.maturity);
        } else if (section == "payoff") {
            if (key == "kind") ok = payoff_from_name(value, cfg.payoff.kind);
            else if (key == "strike") ok = num(cfg.payoff.strike);
        } else if (section == "quadrature") {
            if (key == "abs_tol") ok = num(cfg.quad.abs_tol);
            else if (key == "trunc_sigmas") ok = num(cfg.quad.trunc_sigmas);
            else if (key == "max_subdivisions") {
                std::uint64_t v = 0;
                ok = integer(v);
                cfg.quad.max_subdivisions = static_cast<int>(v);
            }
        } else if (section == "mc") {
            if (key == "n") ok = integer(cfg.mc_n);
            else if (key == "seed") ok = integer(cfg.mc_seed);
        } else if (section == "grids") {
            if (key == "c_grid") ok = parse_real_list(value, cfg.c_grid);
            else if (key == "alpha_grid") ok = parse_real_list(value, cfg.alpha_grid);
            else if (key == "x_grid") ok = parse_real_list(value, cfg.x_grid);
        }
        if (!ok) {
            err = "line " + std::to_string(lineno) + ": bad entry '" + key + "' in section [" + section + "]";
            return false;
        }
    }
    return true;
}

struct Output {
    std::FILE* stream = stdout;
    std::FILE* owned = nullptr;
    ~Output() {
        if (owned) std::fclose(owned);
    }
    bool open(const std::string& path) {
        if (path.empty()) return true;
        owned = std::fopen(path.c_str(), "w");
        if (!owned) return false;
        stream = owned;
        return true;
    }
    void row(const std::vector<std::string>& cells) {
        for (size_t i = 0; i < cells.size(); ++i)
            std::fprintf(stream, "%s%s", i ? "," : "", cells[i].c_str());
        std::fprintf(stream, "\n");
    }
};

struct Market {
    qh_market* handle = nullptr;
    ~Market() { qh_market_destroy(handle); }
};

bool grids_strictly_increasing(const std::vector<double>& g) {
    for (size_t i = 0; i + 1 < g.size(); ++i)
        if (!(g[i] < g[i + 1])) return false;
    return true;
}

int cmd_price(const RunConfig& cfg, Output& out) {
    Market m;
    qh_status s = qh_market_create(&cfg.market, &m.handle);
    if (s != QH_OK) return report_status(s, "market");
    double p = 0.0;
    s = qh_price(m.handle, &cfg.payoff, &cfg.quad, &p);
    if (s != QH_OK) return report_status(s, "price");
    qh_mc_estimate mc;
    s = qh_mc_price(m.handle, &cfg.payoff, cfg.mc_n, cfg.mc_seed, &mc);
    if (s != QH_OK) return report_status(s, "mc price");
    out.row({"payoff", "strike", "price", "price_method", "mc_price", "mc_std_error", "mc_n", "mc_seed"});
    out.row({payoff_name(cfg.payoff.kind), fmt(cfg.payoff.strike), fmt(p), "quadrature", fmt(mc.mean),
             fmt(mc.std_error), std::to_string(mc.n), std::to_string(mc.seed)});
    return 0;
}

int cmd_psi(const RunConfig& cfg, Output& out) {
    if (cfg.c_grid.empty()) return fail_input("psi requires --c-grid (or [grids] c_grid)");
    if (!grids_strictly_increasing(cfg.c_grid)) return fail_input("c grid must be strictly increasing");
    Market m;
    qh_status s = qh_market_create(&cfg.market, &m.handle);
    if (s != QH_OK) return report_status(s, "market");
    out.row({"c", "psi1", "psi1_est_error", "psi1_method", "psi2", "psi2_est_error", "psi2_method"});
    for (double c : cfg.c_grid) {
        qh_psi_value v1, v2;
        s = qh_psi(m.handle, &cfg.payoff, 1, c, &cfg.quad, &v1);
        if (s != QH_OK) return report_status(s, "psi1");
        s = qh_psi(m.handle, &cfg.payoff, 2, c, &cfg.quad, &v2);
        if (s != QH_OK) return report_status(s, "psi2");
        out.row({fmt(c), fmt(v1.value), fmt(v1.est_error), "quadrature", fmt(v2.value), fmt(v2.est_error),
                 "quadrature"});
    }
    return 0;
}

int cmd_phi(const RunConfig& cfg, Output& out, bool phi1_mode) {
    const std::vector<double>& grid = phi1_mode ? cfg.x_grid : cfg.alpha_grid;
    if (grid.empty())
        return fail_input(phi1_mode ? "phi1 requires --x-grid (or [grids] x_grid)"
                                    : "phi2 requires --alpha-grid (or [grids] alpha_grid)");
    if (!grids_strictly_increasing(grid)) return fail_input("grid must be strictly increasing");
    Market m;
    qh_status s = qh_market_create(&cfg.market, &m.handle);
    if (s != QH_OK) return report_status(s, "market");
    out.row({phi1_mode ? "x" : "alpha", phi1_mode ? "phi1" : "phi2", "branch", "c", "psi1_at_c",
             "psi1_est_error", "psi2_at_c", "psi2_est_error", "method"});
    for (double q : grid) {
        qh_quantile_result res;
        s = phi1_mode ? qh_phi1(m.handle, &cfg.payoff, q, &cfg.quad, &res)
                      : qh_phi2(m.handle, &cfg.payoff, q, &cfg.quad, &res);
        if (s != QH_OK) return report_status(s, phi1_mode ? "phi1" : "phi2");
        out.row({fmt(q), fmt(res.value), branch_name(res.branch), fmt(res.c), fmt(res.psi1_at_c.value),
                 fmt(res.psi1_at_c.est_error), fmt(res.psi2_at_c.value), fmt(res.psi2_at_c.est_error),
                 "quadrature"});
    }
    return 0;
}

int cmd_verify(const RunConfig& cfg, Output& out) {
    Market m;
    qh_status s = qh_market_create(&cfg.market, &m.handle);
    if (s != QH_OK) return report_status(s, "market");

    int failures = 0;
    out.row({"check", "payoff", "c", "quadrature", "mc_mean", "mc_std_error", "tolerance", "status"});
    auto emit = [&](const char* check, double c, double quad, double mc_mean, double mc_se, double tol,
                    bool ok) {
        if (!ok) ++failures;
        out.row({check, payoff_name(cfg.payoff.kind), fmt(c), fmt(quad), fmt(mc_mean), fmt(mc_se),
                 fmt(tol), ok ? "ok" : "FAIL"});
    };

    double p = 0.0;
    s = qh_price(m.handle, &cfg.payoff, &cfg.quad, &p);
    if (s != QH_OK) return report_status(s, "price");
    qh_mc_estimate mc;
    s = qh_mc_price(m.handle, &cfg.payoff, cfg.mc_n, cfg.mc_seed, &mc);
    if (s != QH_OK) return report_status(s, "mc price");
    emit("price-vs-mc", 0.0, p, mc.mean, mc.std_error, 3.0 * mc.std_error,
         std::abs(p - mc.mean) <= 3.0 * mc.std_error + 1e-9);

    std::vector<double> factors = cfg.c_grid;
    if (factors.empty()) factors = {0.1, 0.3, 1.0, 3.0};
    double prev1 = 2.0, prev2 = p * 2.0;
    for (double f : factors) {
        double c = cfg.c_grid.empty() ? f / p : f;
        qh_psi_value v1, v2;
        s = qh_psi(m.handle, &cfg.payoff, 1, c, &cfg.quad, &v1);
        if (s != QH_OK) return report_status(s, "psi1");
        s = qh_psi(m.handle, &cfg.payoff, 2, c, &cfg.quad, &v2);
        if (s != QH_OK) return report_status(s, "psi2");
        qh_mc_estimate e1, e2;
        s = qh_mc_psi(m.handle, &cfg.payoff, 1, c, cfg.mc_n, cfg.mc_seed, &e1);
        if (s != QH_OK) return report_status(s, "mc psi1");
        s = qh_mc_psi(m.handle, &cfg.payoff, 2, c, cfg.mc_n, cfg.mc_seed + 1, &e2);
        if (s != QH_OK) return report_status(s, "mc psi2");
        emit("psi1-vs-mc", c, v1.value, e1.mean, e1.std_error, 3.0 * e1.std_error + v1.est_error,
             std::abs(v1.value - e1.mean) <= 3.0 * e1.std_error + v1.est_error + 1e-9);
        emit("psi2-vs-mc", c, v2.value, e2.mean, e2.std_error, 3.0 * e2.std_error + v2.est_error,
             std::abs(v2.value - e2.mean) <= 3.0 * e2.std_error + v2.est_error + 1e-9 * (1.0 + p));
        emit("psi1-monotone", c, v1.value, prev1, 0.0, 1e-9, v1.value <= prev1 + 1e-9);
        emit("psi2-monotone", c, v2.value, prev2, 0.0, 1e-9 * (1.0 + p), v2.value <= prev2 + 1e-9 * (1.0 + p));
        prev1 = v1.value;
        prev2 = v2.value;
    }

    // Round trip through the solvers; a degenerate measure change is reported, not failed.
    qh_quantile_result cost;
    s = qh_phi2(m.handle, &cfg.payoff, 0.05, &cfg.quad, &cost);
    if (s == QH_ERR_DEGENERATE_MEASURE) {
        out.row({"phi-round-trip", payoff_name(cfg.payoff.kind), "0", "0", "0", "0", "0",
                 "skipped: degenerate measure change (all drifts equal r)"});
    } else if (s != QH_OK) {
        return report_status(s, "phi2");
    } else if (cost.branch == QH_BRANCH_INTERIOR) {
        qh_quantile_result back;
        s = qh_phi1(m.handle, &cfg.payoff, cost.value, &cfg.quad, &back);
        if (s != QH_OK) return report_status(s, "phi1");
        emit("phi-round-trip", cost.c, back.value, 0.95, 0.0, 1e-6, std::abs(back.value - 0.95) <= 1e-6);
    }

    if (failures) {
        std::fprintf(stderr, "verify: %d check(s) failed\n", failures);
        return kExitVerifyFailed;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Quantile hedging for two-asset claims: prices, psi curves (success probability and "
        "restricted-claim cost as functions of the threshold level c), and the phi frontiers "
        "(max success probability for a budget; min budget for a success probability).\n"
        "CSV columns: see each subcommand; floats carry 17 significant digits and every value "
        "column is paired with an error estimate or method tag."};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string config_path, payoff_name_arg, out_path, grid_arg;

    app.add_option("--config", config_path, "key-value config file ([market]/[payoff]/[quadrature]/[mc]/[grids])");
    app.add_option("--payoff", payoff_name_arg, "digital|quanto-dom|quanto-for|outperf|spread");
    app.add_option("--strike", cfg.payoff.strike, "payoff strike K");
    app.add_option("--out", out_path, "output CSV path (default: stdout)");
    app.add_option("--seed", cfg.mc_seed, "Monte Carlo seed");
    app.add_option("--mc-n", cfg.mc_n, "Monte Carlo sample count");

    auto* price_cmd = app.add_subcommand("price", "arbitrage price p(H) with MC cross-check");
    auto* psi_cmd = app.add_subcommand("psi", "psi1/psi2 over a c grid");
    std::string c_grid_arg;
    psi_cmd->add_option("--c-grid", c_grid_arg, "comma-separated c values, strictly increasing");
    auto* phi1_cmd = app.add_subcommand("phi1", "max success probability over a budget grid");
    std::string x_grid_arg;
    phi1_cmd->add_option("--x-grid", x_grid_arg, "comma-separated budgets, strictly increasing");
    auto* phi2_cmd = app.add_subcommand("phi2", "min budget over a shortfall-probability grid");
    std::string alpha_grid_arg;
    phi2_cmd->add_option("--alpha-grid", alpha_grid_arg, "comma-separated alphas, strictly increasing");
    auto* verify_cmd = app.add_subcommand("verify", "MC-vs-quadrature and invariant checks (exit 3 on failure)");
    verify_cmd->add_option("--c-grid", c_grid_arg, "explicit c values for the checks");

    bool strike_set = false, seed_set = false, n_set = false;
    app.callback([&] {
        strike_set = app.count("--strike") > 0;
        seed_set = app.count("--seed") > 0;
        n_set = app.count("--mc-n") > 0;
    });

    CLI11_PARSE(app, argc, argv);

    double strike_flag = cfg.payoff.strike;
    std::uint64_t seed_flag = cfg.mc_seed, n_flag = cfg.mc_n;
    if (!config_path.empty()) {
        std::string err;
        if (!load_config(config_path, cfg, err)) return fail_input(err);
        if (strike_set) cfg.payoff.strike = strike_flag;
        if (seed_set) cfg.mc_seed = seed_flag;
        if (n_set) cfg.mc_n = n_flag;
    }
    if (!payoff_name_arg.empty() && !payoff_from_name(payoff_name_arg, cfg.payoff.kind))
        return fail_input("unknown payoff: " + payoff_name_arg);
    if (!c_grid_arg.empty() && !parse_real_list(c_grid_arg, cfg.c_grid))
        return fail_input("bad --c-grid");
    if (!x_grid_arg.empty() && !parse_real_list(x_grid_arg, cfg.x_grid))
        return fail_input("bad --x-grid");
    if (!alpha_grid_arg.empty() && !parse_real_list(alpha_grid_arg, cfg.alpha_grid))
        return fail_input("bad --alpha-grid");
    if (cfg.mc_n == 0) return fail_input("--mc-n must be positive");

    Output out;
    if (!out.open(out_path)) return fail_input("cannot open output file: " + out_path);

    if (price_cmd->parsed()) return cmd_price(cfg, out);
    if (psi_cmd->parsed()) return cmd_psi(cfg, out);
    if (phi1_cmd->parsed()) return cmd_phi(cfg, out, true);
    if (phi2_cmd->parsed()) return cmd_phi(cfg, out, false);
    if (verify_cmd->parsed()) return cmd_verify(cfg, out);
    return fail_input("no subcommand");
}
