#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "volhedge/adjusted.hpp"
#include "volhedge/models.hpp"

namespace volhedge {

enum class Strategy { Unhedged, Strip, Varswap1, Varswap2 };

const char* strategy_name(Strategy s);
Strategy strategy_from_name(const std::string& name);

struct BacktestConfig {
    int outer_steps_per_year = 500;  // substeps for the state evolution
    int inner_paths = 2000;          // mixing paths per rebalance smile
    int inner_steps_per_year = 120;
    int initial_inner_paths = 20000;  // shared date-0 smile budget
    int smile_strikes = 13;
    double smile_width_sds = 4.0;
    AdjustedConfig adjusted;
    double max_failed_fraction = 0.01;  // abort beyond this excluded share
};

struct BacktestReport {
    Strategy strategy = Strategy::Unhedged;
    std::vector<double> per_path_pnl;  // annualized vol units
    double mean_pnl = 0.0;
    double std_pnl = 0.0;
    double variance_reduction = 0.0;  // std(unhedged) / std(this strategy)
    int rebalance_count = 0;
    int excluded_paths = 0;
    double initial_price = 0.0;  // fair volswap strike at inception
    double max_self_financing_residual = 0.0;
    std::uint64_t seed = 0;

    std::string to_json_string(int indent = 2) const;
    std::string pnl_csv() const;  // histogram-ready per-path P&L
};

// Hedges a long volatility swap along simulated paths. At every rebalance
// date the model smile is rebuilt by mixing pricing conditional on the
// path's state, the swap is repriced, hedge positions are refreshed and
// self-financing P&L accrues. Terminal P&L is the realized swap payoff
// minus the initial fair strike minus the hedge-leg gains. Deterministic
// for a fixed seed. Paths whose pricing fails are excluded and counted;
// the run aborts if more than max_failed_fraction of paths fail.
//
// Requires rebalance_dates sorted in [0, T) starting at 0, n_paths >= 100.
BacktestReport run_backtest(const SvModelSpec& spec, Strategy strategy, double T,
                            std::span<const double> rebalance_dates, int n_paths,
                            std::uint64_t seed, const BacktestConfig& config = {});

// Shared-pass variant: all strategies reuse the same paths and per-date
// smiles, which is also what makes their P&L distributions comparable.
std::vector<BacktestReport> run_backtests(const SvModelSpec& spec,
                                          std::span<const Strategy> strategies,
                                          double T,
                                          std::span<const double> rebalance_dates,
                                          int n_paths, std::uint64_t seed,
                                          const BacktestConfig& config = {});

std::vector<double> daily_rebalance_dates(double T, int dates_per_year = 250);

struct DriftConfig {
    double T = 1.0;
    double t = 0.0;
    double accrued_var = 0.0;
    int anchors = 5;             // conditional-smile anchor states
    int anchor_paths = 100000;   // mixing paths per anchor smile
    int inner_steps_per_year = 500;
    int smile_strikes = 15;
    double smile_width_sds = 4.0;
    AdjustedConfig adjusted;
};

struct DriftDiagnostic {
    double measured = 0.0;   // MC estimate of E[d(I^H_- sqrt(tau))]
    double predicted = 0.0;  // -0.5 sigma^2 dt / (I^H_- sqrt(tau))
    double std_error = 0.0;
    double residual = 0.0;    // measured - predicted
    double normalized = 0.0;  // residual / std_error
};

// One-step Monte Carlo check of the risk-neutral drift of the zero-vanna
// implied vol: the time-t strip is frozen, repriced after one step of size
// dt on every outer draw (conditional smiles are interpolated across a few
// anchor states sharing common random numbers with the time-t smile), and
// the mean change of I^H_- sqrt(tau) is compared with the predicted drift.
DriftDiagnostic drift_diagnostic(const SvModelSpec& spec, int n_paths, double dt,
                                 std::uint64_t seed,
                                 const DriftConfig& config = {});

}  // namespace volhedge
