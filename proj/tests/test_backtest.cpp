#include <cmath>
#include <vector>

#include "doctest.h"
#include "volhedge/backtest.hpp"
#include "volhedge/errors.hpp"
#include "volhedge/models.hpp"

using namespace volhedge;

namespace {

BacktestConfig cheap_config() {
    BacktestConfig cfg;
    cfg.inner_paths = 400;
    cfg.inner_steps_per_year = 60;
    cfg.initial_inner_paths = 2000;
    cfg.outer_steps_per_year = 120;
    return cfg;
}

}  // namespace

TEST_CASE("strategy names round trip") {
    for (Strategy s : {Strategy::Unhedged, Strategy::Strip, Strategy::Varswap1,
                       Strategy::Varswap2}) {
        CHECK(strategy_from_name(strategy_name(s)) == s);
    }
    CHECK_THROWS_AS(strategy_from_name("delta"), ConfigError);
}

TEST_CASE("rebalance date grid") {
    const auto dates = daily_rebalance_dates(1.0, 250);
    REQUIRE(dates.size() == 250);
    CHECK(dates.front() == 0.0);
    CHECK(dates.back() < 1.0);
}

TEST_CASE("deterministic vol: every strategy has (near) zero P&L") {
    const auto spec = SvModelSpec::heston({2.0, 0.04, 0.0, 0.04}, -0.6, 100.0);
    const std::vector<Strategy> all = {Strategy::Unhedged, Strategy::Strip,
                                       Strategy::Varswap1, Strategy::Varswap2};
    const auto dates = daily_rebalance_dates(1.0, 12);
    const auto reports =
        run_backtests(spec, all, 1.0, dates, 100, 5, cheap_config());
    REQUIRE(reports.size() == 4);
    for (const auto& r : reports) {
        CHECK(r.excluded_paths == 0);
        CHECK(r.rebalance_count == 12);
        for (double pnl : r.per_path_pnl) {
            CHECK(std::fabs(pnl) < 1e-8);
        }
        CHECK(r.max_self_financing_residual < 1e-10);
        CHECK(r.initial_price == doctest::Approx(0.2).epsilon(1e-6));
    }
}

TEST_CASE("stochastic smoke run: hedging reduces variance") {
    const auto spec = SvModelSpec::heston({2.0, 0.04, 0.5, 0.04}, -0.7, 100.0);
    const std::vector<Strategy> strategies = {Strategy::Unhedged,
                                              Strategy::Varswap1};
    const auto dates = daily_rebalance_dates(1.0, 12);
    const auto reports =
        run_backtests(spec, strategies, 1.0, dates, 120, 9, cheap_config());
    const auto& unhedged = reports[0];
    const auto& varswap = reports[1];
    CHECK(unhedged.std_pnl > 0.0);
    CHECK(unhedged.variance_reduction == 1.0);
    CHECK(varswap.std_pnl < unhedged.std_pnl);
    CHECK(varswap.variance_reduction > 1.0);
    // unhedged P&L is exactly the payoff spread around the initial strike
    CHECK(std::fabs(unhedged.mean_pnl) < 5.0 * unhedged.std_pnl /
                                             std::sqrt(double(
                                                 unhedged.per_path_pnl.size())) +
                                             0.005);
}

TEST_CASE("reports are deterministic per seed") {
    const auto spec = SvModelSpec::heston({2.0, 0.04, 0.5, 0.04}, -0.7, 100.0);
    const std::vector<Strategy> strategies = {Strategy::Varswap2};
    const auto dates = daily_rebalance_dates(0.5, 12);
    const auto a =
        run_backtests(spec, strategies, 0.5, dates, 100, 77, cheap_config());
    const auto b =
        run_backtests(spec, strategies, 0.5, dates, 100, 77, cheap_config());
    REQUIRE(a[0].per_path_pnl.size() == b[0].per_path_pnl.size());
    for (std::size_t i = 0; i < a[0].per_path_pnl.size(); ++i) {
        CHECK(a[0].per_path_pnl[i] == b[0].per_path_pnl[i]);
    }
    CHECK(a[0].to_json_string() == b[0].to_json_string());
}

TEST_CASE("input validation") {
    const auto spec = SvModelSpec::heston({2.0, 0.04, 0.5, 0.04}, -0.7, 100.0);
    const std::vector<Strategy> s = {Strategy::Unhedged};
    const std::vector<double> no_zero = {0.1, 0.2};
    CHECK_THROWS_AS(run_backtests(spec, s, 1.0, no_zero, 100, 1, cheap_config()),
                    ConfigError);
    const std::vector<double> dates = {0.0, 0.5};
    CHECK_THROWS_AS(run_backtests(spec, s, 1.0, dates, 50, 1, cheap_config()),
                    ConfigError);
    const std::vector<double> beyond = {0.0, 1.5};
    CHECK_THROWS_AS(run_backtests(spec, s, 1.0, beyond, 100, 1, cheap_config()),
                    ConfigError);
}

TEST_CASE("drift diagnostic: deterministic case matches the formula") {
    const auto spec = SvModelSpec::heston({2.0, 0.04, 0.0, 0.04}, -0.6, 100.0);
    DriftConfig cfg;
    cfg.anchor_paths = 500;
    cfg.inner_steps_per_year = 250;
    const DriftDiagnostic d = drift_diagnostic(spec, 200, 1.0 / 500.0, 3, cfg);
    // everything is deterministic: measured change equals the predicted
    // drift up to O(dt^2)
    CHECK(std::fabs(d.residual) < 1e-6);
    CHECK(d.predicted < 0.0);
}
