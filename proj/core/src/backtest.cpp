#include "volhedge/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "volhedge/analytics.hpp"
#include "volhedge/errors.hpp"
#include "volhedge/hedge.hpp"
#include "volhedge/math.hpp"
#include "volhedge/parallel.hpp"
#include "volhedge/volswap.hpp"

namespace volhedge {

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Unhedged: return "unhedged";
        case Strategy::Strip: return "strip";
        case Strategy::Varswap1: return "varswap1";
        case Strategy::Varswap2: return "varswap2";
    }
    return "unknown";
}

Strategy strategy_from_name(const std::string& name) {
    if (name == "unhedged") return Strategy::Unhedged;
    if (name == "strip") return Strategy::Strip;
    if (name == "varswap1") return Strategy::Varswap1;
    if (name == "varswap2") return Strategy::Varswap2;
    throw ConfigError("unknown strategy '" + name + "'");
}

std::vector<double> daily_rebalance_dates(double T, int dates_per_year) {
    if (!(T > 0.0) || dates_per_year < 1) {
        throw ConfigError("daily_rebalance_dates: bad inputs");
    }
    std::vector<double> dates;
    const double step = 1.0 / dates_per_year;
    for (double t = 0.0; t < T - 0.5 * step; t += step) {
        dates.push_back(t);
    }
    return dates;
}

namespace {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    auto eng = make_engine(seed, a, b);
    return eng();
}

double floored_sigma(const VolDynamics& dyn, double state) {
    return std::max(dyn.sigma(state), 1e-8);
}

std::vector<double> log_spaced_strikes(double center, double halfwidth, int n) {
    std::vector<double> strikes(n);
    for (int i = 0; i < n; ++i) {
        const double u = (n == 1) ? 0.0 : -1.0 + 2.0 * i / (n - 1.0);
        strikes[i] = std::exp(center + halfwidth * u);
    }
    return strikes;
}

// Everything the hedging strategies need at one rebalance date.
struct DateQuotes {
    std::optional<MarketSmile> smile;
    double zv_total_vol = 0.0;
    double dminus_convexity = 0.0;
    double meta_qty = 0.0;  // option units per unit volswap, N / T
    double delta = 0.0;
    std::vector<StripNode> strip;
    double volswap = 0.0;
    double mean_remaining_var = 0.0;
    double expected_remaining_var = 0.0;  // conditional varswap leg
};

DateQuotes date_pipeline(const SvModelSpec& spec, const VolDynamics& dyn,
                         double state, double spot, double t, double T,
                         double accrued, int inner_paths,
                         std::uint64_t inner_seed, const BacktestConfig& cfg,
                         bool need_hedge) {
    const double tau = T - t;
    const SvModelSpec cond =
        with_initial_state(spec, floored_sigma(dyn, state), spot);
    const PathSet inner = simulate(cond, t, T, cfg.inner_steps_per_year,
                                   inner_paths, inner_seed);
    DateQuotes out;
    out.mean_remaining_var = mean_var(inner.integrated_var).mean;
    out.expected_remaining_var =
        dyn.expected_remaining_variance(state, tau).value_or(
            out.mean_remaining_var);
    if (!need_hedge) return out;

    const double c2 = accrued / tau;
    const double vol_hat = std::sqrt(out.mean_remaining_var / tau);
    const double vh2_tau = (c2 + vol_hat * vol_hat) * tau;
    const double center = std::log(spot) - 0.5 * vh2_tau;
    const auto strikes = log_spaced_strikes(
        center, cfg.smile_width_sds * std::sqrt(vh2_tau), cfg.smile_strikes);
    McSmileResult sm = mc_smile(inner, strikes);
    const RealizedState realized(t, T, accrued);
    const AdjustedSmile adj =
        build_adjusted_smile(sm.smile, realized, cfg.adjusted);
    const ZeroVannaQuote zv = zero_vanna_point(adj);

    out.zv_total_vol = zv.total_vol();
    out.dminus_convexity = zv.dminus_convexity;
    out.volswap = zv.vol * std::sqrt(tau / T);
    const BsGreeks greeks = bs_greeks({spot, zv.strike, zv.vol, tau, true});
    if (greeks.vega < 1e-12) {
        throw DegenerateInputError("date_pipeline: vega below 1e-12");
    }
    const double skew_factor = 1.0 + zv.total_vol() * zv.slope;
    if (!(skew_factor > 0.0)) {
        throw NumericalError("date_pipeline: non-positive skew factor");
    }
    out.delta = greeks.delta - greeks.vega * zv.slope / (std::sqrt(tau) * spot);
    out.meta_qty = std::sqrt(tau) / greeks.vega / skew_factor / T;
    out.strip =
        option_strip_weights(sm.smile, realized, zv, cfg.adjusted.quad_nodes);
    out.smile = std::move(sm.smile);
    return out;
}

// Open positions and ledgers for one strategy along one path.
struct PositionState {
    Strategy strategy = Strategy::Unhedged;
    bool open = false;
    // strip legs (vanillas plus the delta-hedge spot leg)
    std::vector<double> strikes;
    std::vector<double> qty;
    std::vector<double> basis;
    double spot_qty = 0.0;
    double spot_basis = 0.0;
    // variance-swap leg
    double var_qty = 0.0;
    double var_basis = 0.0;
    // ledgers
    double gains = 0.0;  // sum of position * mark change
    double cash = 0.0;   // self-financing cash account
};

}  // namespace

std::vector<BacktestReport> run_backtests(const SvModelSpec& spec,
                                          std::span<const Strategy> strategies,
                                          double T,
                                          std::span<const double> rebalance_dates,
                                          int n_paths, std::uint64_t seed,
                                          const BacktestConfig& config) {
    if (!(T > 0.0) || !std::isfinite(T)) {
        throw DomainError("run_backtests: T must be positive");
    }
    if (strategies.empty()) throw ConfigError("run_backtests: no strategies");
    if (n_paths < 100) throw ConfigError("run_backtests: n_paths must be >= 100");
    if (rebalance_dates.empty() || rebalance_dates.front() != 0.0) {
        throw ConfigError("run_backtests: rebalance dates must start at 0");
    }
    for (std::size_t i = 0; i < rebalance_dates.size(); ++i) {
        const double d = rebalance_dates[i];
        if (!(d >= 0.0 && d < T)) {
            throw ConfigError("run_backtests: rebalance dates must lie in [0, T)");
        }
        if (i > 0 && !(rebalance_dates[i - 1] < d)) {
            throw ConfigError("run_backtests: rebalance dates must increase");
        }
    }

    const VolDynamics dyn(spec);
    const double rho = spec.rho();
    const double rho_bar = std::sqrt(1.0 - rho * rho);
    const std::size_t n_dates = rebalance_dates.size();
    const std::size_t n_strat = strategies.size();
    bool need_hedge = false;
    for (Strategy s : strategies) {
        if (s != Strategy::Unhedged) need_hedge = true;
    }

    // Date-0 state is common to every path: one shared pipeline with a
    // larger budget prices the swap everyone hedges.
    const DateQuotes q0 = date_pipeline(
        spec, dyn, dyn.initial_state(), spec.spot0(), 0.0, T, 0.0,
        config.initial_inner_paths, derive_seed(seed, 0x0FFFFFFFULL, 1), config,
        true);
    const double initial_price = q0.volswap;

    const std::size_t n = static_cast<std::size_t>(n_paths);
    std::vector<std::uint8_t> failed(n, 0);
    std::vector<double> unhedged(n, 0.0);
    std::vector<std::vector<double>> hedged(n_strat, std::vector<double>(n, 0.0));
    std::vector<double> sf_residual(n, 0.0);

    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            try {
                auto eng = make_engine(seed, p, 1);
                double state = dyn.initial_state();
                double spot = spec.spot0();
                double accrued = 0.0;

                std::vector<PositionState> pos(n_strat);
                for (std::size_t s = 0; s < n_strat; ++s) {
                    pos[s].strategy = strategies[s];
                }

                DateQuotes q_local;
                const DateQuotes* q = &q0;
                for (std::size_t k = 0; k < n_dates; ++k) {
                    const double t_k = rebalance_dates[k];
                    const double tau_k = T - t_k;
                    if (k > 0) {
                        q_local = date_pipeline(
                            spec, dyn, state, spot, t_k, T, accrued,
                            config.inner_paths,
                            derive_seed(seed, p, 0x200000ULL + k), config,
                            need_hedge);
                        q = &q_local;
                    }
                    const double var_mark =
                        (accrued + q->expected_remaining_var) / T;
                    const auto vanilla_mark = [&](double strike) {
                        return bs_price(
                            {spot, strike, q->smile->vol(strike), tau_k, true});
                    };

                    for (auto& ps : pos) {
                        switch (ps.strategy) {
                            case Strategy::Unhedged:
                                break;
                            case Strategy::Strip: {
                                double value = ps.cash;
                                if (ps.open) {
                                    for (std::size_t i = 0; i < ps.strikes.size();
                                         ++i) {
                                        const double mark =
                                            vanilla_mark(ps.strikes[i]);
                                        ps.gains +=
                                            ps.qty[i] * (mark - ps.basis[i]);
                                        value += ps.qty[i] * mark;
                                    }
                                    ps.gains +=
                                        ps.spot_qty * (spot - ps.spot_basis);
                                    value += ps.spot_qty * spot;
                                }
                                ps.strikes.resize(q->strip.size());
                                ps.qty.resize(q->strip.size());
                                ps.basis.resize(q->strip.size());
                                double new_position_value = 0.0;
                                for (std::size_t i = 0; i < q->strip.size(); ++i) {
                                    ps.strikes[i] = q->strip[i].strike;
                                    ps.qty[i] =
                                        q->meta_qty * q->strip[i].weight;
                                    ps.basis[i] = vanilla_mark(ps.strikes[i]);
                                    new_position_value +=
                                        ps.qty[i] * ps.basis[i];
                                }
                                ps.spot_qty = -q->meta_qty * q->delta;
                                ps.spot_basis = spot;
                                new_position_value += ps.spot_qty * spot;
                                ps.cash = value - new_position_value;
                                ps.open = true;
                                break;
                            }
                            case Strategy::Varswap1:
                            case Strategy::Varswap2: {
                                double value = ps.cash;
                                if (ps.open) {
                                    ps.gains +=
                                        ps.var_qty * (var_mark - ps.var_basis);
                                    value += ps.var_qty * var_mark;
                                }
                                const double denom =
                                    ps.strategy == Strategy::Varswap1
                                        ? 2.0 * q->zv_total_vol
                                        : 2.0 * q->zv_total_vol +
                                              q->dminus_convexity;
                                if (!(denom > 0.0)) {
                                    throw NumericalError(
                                        "backtest: non-positive hedge "
                                        "denominator");
                                }
                                ps.var_qty = 1.0 / denom;
                                ps.var_basis = var_mark;
                                ps.cash = value - ps.var_qty * var_mark;
                                ps.open = true;
                                break;
                            }
                        }
                    }

                    // Evolve the state to the next rebalance date (or expiry).
                    const double t_next =
                        (k + 1 < n_dates) ? rebalance_dates[k + 1] : T;
                    const double gap = t_next - t_k;
                    const int steps = std::max(
                        1, static_cast<int>(
                               std::ceil(gap * config.outer_steps_per_year)));
                    const double dt = gap / steps;
                    const double sqrt_dt = std::sqrt(dt);
                    for (int i = 0; i < steps; ++i) {
                        const double z1 = normal_draw(eng);
                        const double z2 = normal_draw(eng);
                        const double dw = sqrt_dt * z1;
                        const double sig = dyn.sigma(state);
                        spot *= std::exp(
                            -0.5 * sig * sig * dt +
                            sig * (rho * dw + rho_bar * sqrt_dt * z2));
                        const double next = dyn.step(state, dt, dw);
                        const double sig_next = dyn.sigma(next);
                        accrued += 0.5 * (sig * sig + sig_next * sig_next) * dt;
                        state = next;
                    }
                }

                // Terminal settlement: vanillas at intrinsic, variance swap
                // at the realized total.
                const double realized_vol = std::sqrt(accrued / T);
                const double var_final = accrued / T;
                unhedged[p] = realized_vol - initial_price;
                for (std::size_t s = 0; s < n_strat; ++s) {
                    auto& ps = pos[s];
                    double hedge_gain = 0.0;
                    double residual = 0.0;
                    if (ps.strategy == Strategy::Strip && ps.open) {
                        double value = ps.cash;
                        for (std::size_t i = 0; i < ps.strikes.size(); ++i) {
                            const double mark =
                                std::max(spot - ps.strikes[i], 0.0);
                            ps.gains += ps.qty[i] * (mark - ps.basis[i]);
                            value += ps.qty[i] * mark;
                        }
                        ps.gains += ps.spot_qty * (spot - ps.spot_basis);
                        value += ps.spot_qty * spot;
                        residual = std::fabs(value - ps.gains);
                        hedge_gain = ps.gains;
                    } else if ((ps.strategy == Strategy::Varswap1 ||
                                ps.strategy == Strategy::Varswap2) &&
                               ps.open) {
                        ps.gains += ps.var_qty * (var_final - ps.var_basis);
                        const double value = ps.cash + ps.var_qty * var_final;
                        residual = std::fabs(value - ps.gains);
                        hedge_gain = ps.gains;
                    }
                    sf_residual[p] = std::max(sf_residual[p], residual);
                    hedged[s][p] = (ps.strategy == Strategy::Unhedged)
                                       ? unhedged[p]
                                       : unhedged[p] - hedge_gain;
                }
            } catch (const std::exception&) {
                failed[p] = 1;
            }
        }
    });

    std::size_t excluded = 0;
    for (auto f : failed) excluded += f;
    if (static_cast<double>(excluded) >
        config.max_failed_fraction * static_cast<double>(n)) {
        throw NumericalError("run_backtests: more than " +
                             std::to_string(100.0 * config.max_failed_fraction) +
                             "% of paths failed pricing");
    }

    std::vector<double> unhedged_ok;
    unhedged_ok.reserve(n - excluded);
    for (std::size_t p = 0; p < n; ++p) {
        if (!failed[p]) unhedged_ok.push_back(unhedged[p]);
    }
    const MeanVar unhedged_mv = mean_var(unhedged_ok);
    const double std_unhedged = std::sqrt(unhedged_mv.variance);

    double max_residual = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
        if (!failed[p]) max_residual = std::max(max_residual, sf_residual[p]);
    }

    std::vector<BacktestReport> reports(n_strat);
    for (std::size_t s = 0; s < n_strat; ++s) {
        BacktestReport& r = reports[s];
        r.strategy = strategies[s];
        r.per_path_pnl.reserve(n - excluded);
        for (std::size_t p = 0; p < n; ++p) {
            if (!failed[p]) r.per_path_pnl.push_back(hedged[s][p]);
        }
        const MeanVar mv = mean_var(r.per_path_pnl);
        r.mean_pnl = mv.mean;
        r.std_pnl = std::sqrt(mv.variance);
        r.variance_reduction =
            (r.std_pnl > 0.0) ? std_unhedged / r.std_pnl
                              : (std_unhedged > 0.0 ? 1e9 : 1.0);
        r.rebalance_count = static_cast<int>(n_dates);
        r.excluded_paths = static_cast<int>(excluded);
        r.initial_price = initial_price;
        r.max_self_financing_residual = max_residual;
        r.seed = seed;
    }
    return reports;
}

BacktestReport run_backtest(const SvModelSpec& spec, Strategy strategy, double T,
                            std::span<const double> rebalance_dates, int n_paths,
                            std::uint64_t seed, const BacktestConfig& config) {
    const Strategy strategies[] = {strategy};
    return run_backtests(spec, strategies, T, rebalance_dates, n_paths, seed,
                         config)
        .front();
}

std::string BacktestReport::to_json_string(int indent) const {
    nlohmann::json j;
    j["strategy"] = strategy_name(strategy);
    j["mean_pnl"] = mean_pnl;
    j["std_pnl"] = std_pnl;
    j["variance_reduction"] = variance_reduction;
    j["rebalance_count"] = rebalance_count;
    j["excluded_paths"] = excluded_paths;
    j["initial_price"] = initial_price;
    j["max_self_financing_residual"] = max_self_financing_residual;
    j["seed"] = seed;
    j["n_paths"] = per_path_pnl.size();
    return j.dump(indent);
}

std::string BacktestReport::pnl_csv() const {
    std::ostringstream out;
    out.precision(17);
    out << "path,pnl\n";
    for (std::size_t i = 0; i < per_path_pnl.size(); ++i) {
        out << i << "," << per_path_pnl[i] << "\n";
    }
    return out.str();
}

namespace {

// Polynomial interpolation through the anchor states (Neville's scheme).
double neville(std::span<const double> xs, std::span<const double> ys, double x) {
    const std::size_t n = xs.size();
    if (n == 1) return ys[0];
    std::vector<double> p(ys.begin(), ys.end());
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = 0; i + level < n; ++i) {
            p[i] = ((x - xs[i + level]) * p[i] + (xs[i] - x) * p[i + 1]) /
                   (xs[i] - xs[i + level]);
        }
    }
    return p[0];
}

}  // namespace

DriftDiagnostic drift_diagnostic(const SvModelSpec& spec, int n_paths, double dt,
                                 std::uint64_t seed, const DriftConfig& config) {
    if (n_paths < 100) throw ConfigError("drift_diagnostic: n_paths >= 100");
    if (!(dt > 0.0) || dt > 1.0 / 250.0 + 1e-12) {
        throw ConfigError("drift_diagnostic: requires 0 < dt <= 1/250");
    }
    const double T = config.T;
    const double t0 = config.t;
    const RealizedState realized0(t0, T, config.accrued_var);
    const double tau0 = realized0.tau();
    if (!(dt < tau0)) throw ConfigError("drift_diagnostic: dt >= tau");
    const double tau1 = tau0 - dt;

    const VolDynamics dyn(spec);
    const double state0 = dyn.initial_state();
    const double sigma0 = dyn.sigma(state0);
    const double spot = spec.spot0();
    const double rho = spec.rho();
    const double rho_bar_sq = 1.0 - rho * rho;

    // Outer one-step draws.
    const std::size_t n = static_cast<std::size_t>(n_paths);
    std::vector<double> state1(n);
    std::vector<double> spot1(n);
    const double sqrt_dt = std::sqrt(dt);
    for (std::size_t j = 0; j < n; ++j) {
        auto eng = make_engine(seed, j, 7);
        const double z1 = normal_draw(eng);
        const double z2 = normal_draw(eng);
        const double dw = sqrt_dt * z1;
        spot1[j] = spot * std::exp(-0.5 * sigma0 * sigma0 * dt +
                                   sigma0 * (rho * dw +
                                             std::sqrt(rho_bar_sq) * sqrt_dt * z2));
        state1[j] = dyn.step(state0, dt, dw);
    }

    // Anchor states span the one-step range; each anchor smile reuses the
    // same inner streams as the time-t smile so the common noise cancels in
    // the measured change.
    const double v_lo = *std::min_element(state1.begin(), state1.end());
    const double v_hi = *std::max_element(state1.begin(), state1.end());
    const int n_anchors = (v_hi - v_lo < 1e-14) ? 1 : config.anchors;
    std::vector<double> anchor_state(n_anchors);
    for (int a = 0; a < n_anchors; ++a) {
        anchor_state[a] =
            (n_anchors == 1)
                ? v_lo
                : v_lo + (v_hi - v_lo) * a / (n_anchors - 1.0);
    }

    const int P = config.anchor_paths;
    const int steps1 = std::max(
        1, static_cast<int>(std::ceil(tau1 * config.inner_steps_per_year)));
    const double dt1 = tau1 / steps1;
    const double sqrt_dt1 = std::sqrt(dt1);

    const auto run_inner = [&](double start_state, bool with_first_step,
                               PathSet* out) {
        out->t = with_first_step ? t0 : t0 + dt;
        out->T = T;
        out->steps_per_year = config.inner_steps_per_year;
        out->seed = seed;
        const std::size_t np = static_cast<std::size_t>(P);
        out->integrated_var.resize(np);
        out->mixing_m.resize(np);
        out->mixing_vol.resize(np);
        out->final_sigma.resize(np);
        const double tau = with_first_step ? tau0 : tau1;
        parallel_for(np, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) {
                double state = start_state;
                double sig = dyn.sigma(state);
                double ivar = 0.0;
                double log_m = 0.0;
                if (with_first_step) {
                    auto eng_first = make_engine(seed, i, 9);
                    const double dw0 = sqrt_dt * normal_draw(eng_first);
                    log_m += rho * sig * dw0 - 0.5 * rho * rho * sig * sig * dt;
                    const double next = dyn.step(state, dt, dw0);
                    const double sig_next = dyn.sigma(next);
                    ivar += 0.5 * (sig * sig + sig_next * sig_next) * dt;
                    state = next;
                    sig = sig_next;
                }
                auto eng = make_engine(seed, i, 8);
                for (int k = 0; k < steps1; ++k) {
                    const double dw = sqrt_dt1 * normal_draw(eng);
                    log_m += rho * sig * dw - 0.5 * rho * rho * sig * sig * dt1;
                    state = dyn.step(state, dt1, dw);
                    const double sig_next = dyn.sigma(state);
                    ivar += 0.5 * (sig * sig + sig_next * sig_next) * dt1;
                    sig = sig_next;
                }
                out->integrated_var[i] = ivar;
                out->mixing_m[i] = std::exp(log_m);
                out->mixing_vol[i] = std::sqrt(rho_bar_sq * ivar / tau);
                out->final_sigma[i] = sig;
            }
        });
    };

    // Time-t smile, strip and zero-vanna point.
    PathSet base;
    base.spec = with_initial_state(spec, std::max(sigma0, 1e-8), spot);
    run_inner(state0, true, &base);
    const double vol_hat0 =
        std::sqrt(mean_var(base.integrated_var).mean / tau0);
    const double vh2_tau0 = (realized0.c2() + vol_hat0 * vol_hat0) * tau0;
    const auto base_strikes = log_spaced_strikes(
        std::log(spot) - 0.5 * vh2_tau0,
        config.smile_width_sds * std::sqrt(vh2_tau0), config.smile_strikes);
    const McSmileResult base_sm = mc_smile(base, base_strikes);
    const AdjustedSmile adj0 =
        build_adjusted_smile(base_sm.smile, realized0, config.adjusted);
    const ZeroVannaQuote zv0 = zero_vanna_point(adj0);
    const double y0 = zv0.total_vol();
    const auto strip =
        option_strip_weights(base_sm.smile, realized0, zv0,
                             config.adjusted.quad_nodes);

    // Anchor smiles at t+dt, spot normalized to 1 (model smiles are
    // functions of moneyness).
    std::vector<MarketSmile> anchor_smiles;
    anchor_smiles.reserve(n_anchors);
    {
        // Moneyness grid covering both the near-the-money band and the strip.
        const double vol_hat1 = std::sqrt(
            (dyn.expected_remaining_variance(anchor_state[n_anchors / 2], tau1)
                 .value_or(vol_hat0 * vol_hat0 * tau1)) /
            tau1);
        double lo = -0.5 * vol_hat1 * vol_hat1 * tau1 -
                    config.smile_width_sds * vol_hat1 * std::sqrt(tau1);
        double hi = -0.5 * vol_hat1 * vol_hat1 * tau1 +
                    config.smile_width_sds * vol_hat1 * std::sqrt(tau1);
        for (const auto& node : strip) {
            const double x = std::log(node.strike / spot);
            if (node.weight > 1e-9) {
                lo = std::min(lo, x - 0.1 * vol_hat1);
                hi = std::max(hi, x + 0.1 * vol_hat1);
            }
        }
        std::vector<double> m_grid(config.smile_strikes);
        for (int i = 0; i < config.smile_strikes; ++i) {
            m_grid[i] =
                std::exp(lo + (hi - lo) * i / (config.smile_strikes - 1.0));
        }
        for (int a = 0; a < n_anchors; ++a) {
            PathSet ps;
            ps.spec = with_initial_state(
                spec, floored_sigma(dyn, anchor_state[a]), 1.0);
            run_inner(anchor_state[a], false, &ps);
            anchor_smiles.push_back(mc_smile(ps, m_grid).smile);
        }
    }

    // Reprice the frozen strip on every outer draw and back out the
    // zero-vanna implied vol at the fixed strike.
    std::vector<double> x_sample(n);
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
        std::vector<double> vols(n_anchors);
        for (std::size_t j = begin; j < end; ++j) {
            double strip_value = 0.0;
            for (const auto& node : strip) {
                const double moneyness = node.strike / spot1[j];
                for (int a = 0; a < n_anchors; ++a) {
                    vols[a] = anchor_smiles[a].vol(moneyness);
                }
                const double vol =
                    neville(anchor_state, vols, state1[j]);
                strip_value +=
                    node.weight *
                    bs_price({spot1[j], node.strike, vol, tau1, true});
            }
            const double iv =
                implied_vol(strip_value, spot1[j], zv0.strike, tau1, true);
            x_sample[j] = iv * std::sqrt(tau1);
        }
    });

    const MeanVar mv = mean_var(x_sample);
    DriftDiagnostic out;
    out.measured = mv.mean - y0;
    out.predicted = -0.5 * sigma0 * sigma0 * dt / y0;
    out.std_error = mv.std_error;
    out.residual = out.measured - out.predicted;
    out.normalized = (out.std_error > 0.0) ? out.residual / out.std_error : 0.0;
    return out;
}

}  // namespace volhedge
