// Command-line front end: pricing, hedging, simulation and backtesting of
// seasoned volatility swaps from single-expiry market smiles.
//
// Exit codes: 0 ok, 2 input validation, 3 numerical failure.

#include <cmath>
#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "volhedge/adjusted.hpp"
#include "volhedge/analytics.hpp"
#include "volhedge/backtest.hpp"
#include "volhedge/errors.hpp"
#include "volhedge/hedge.hpp"
#include "volhedge/io.hpp"
#include "volhedge/math.hpp"
#include "volhedge/models.hpp"
#include "volhedge/parallel.hpp"
#include "volhedge/volswap.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

void emit(const json& payload, const std::string& out_path) {
    const std::string text = payload.dump(2) + "\n";
    if (out_path.empty()) {
        std::cout << text;
    } else {
        volhedge::write_text_file(out_path, text);
    }
}

json config_echo(const volhedge::AdjustedConfig& cfg) {
    return {{"quad_nodes", cfg.quad_nodes},
            {"grid_strikes", cfg.grid_strikes},
            {"grid_halfwidth_sds", cfg.grid_halfwidth_sds},
            {"threads", volhedge::thread_count()}};
}

struct SmileArgs {
    std::string csv;
    std::string meta;
    double accrued_var = 0.0;
    volhedge::AdjustedConfig adjusted;
    std::string out;
};

void add_smile_options(CLI::App* cmd, SmileArgs* args) {
    cmd->add_option("--smile", args->csv, "Smile CSV (strike,implied_vol)")
        ->required();
    cmd->add_option("--meta", args->meta, "Sidecar JSON with spot, t, T")
        ->required();
    cmd->add_option("--accrued-var", args->accrued_var,
                    "Accrued realized variance int_0^t sigma^2 du")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--quad-nodes", args->adjusted.quad_nodes,
                    "Gauss-Hermite nodes for the adjustment integral")
        ->capture_default_str();
    cmd->add_option("--grid-strikes", args->adjusted.grid_strikes,
                    "Adjusted-smile grid size")
        ->capture_default_str();
    cmd->add_option("--grid-width", args->adjusted.grid_halfwidth_sds,
                    "Adjusted-smile grid half-width in sds")
        ->capture_default_str();
    cmd->add_option("--out", args->out, "Write JSON here instead of stdout");
}

int run_price(const SmileArgs& args, bool full_hedge) {
    const volhedge::MarketSmile smile =
        volhedge::load_smile_csv(args.csv, args.meta);
    const volhedge::RealizedState realized(smile.t(), smile.T(),
                                           args.accrued_var);
    const volhedge::AdjustedSmile adj =
        volhedge::build_adjusted_smile(smile, realized, args.adjusted);
    const volhedge::ZeroVannaQuote zv = volhedge::zero_vanna_point(adj);
    const double price = zv.vol * std::sqrt(realized.tau() / realized.T());
    const volhedge::VarSwapHedge vs1 = volhedge::varswap_hedge_ratio(adj, zv, 1);
    const volhedge::VarSwapHedge vs2 = volhedge::varswap_hedge_ratio(adj, zv, 2);

    json payload;
    payload["price"] = price;
    payload["zero_vanna"] = {{"strike", zv.strike},
                             {"vol", zv.vol},
                             {"slope", zv.slope},
                             {"dminus_slope", zv.dminus_slope},
                             {"dminus_convexity", zv.dminus_convexity}};
    payload["varswap"] = {
        {"total_variance", vs1.varswap_strike_sq},
        {"strike_variance", vs1.varswap_strike_sq / realized.T()},
        {"strike_vol", std::sqrt(vs1.varswap_strike_sq / realized.T())}};
    payload["convexity_correction"] = vs2.convexity_correction;
    payload["convexity"] = vs2.convexity;
    payload["hedge_ratios"] = {{"order1", vs1.ratio}, {"order2", vs2.ratio}};
    payload["warnings"] = {{"wing", zv.wing_warning}};
    payload["inputs"] = {{"spot", smile.spot()},
                         {"t", smile.t()},
                         {"T", smile.T()},
                         {"accrued_var", args.accrued_var}};
    payload["config"] = config_echo(args.adjusted);

    if (full_hedge) {
        const volhedge::HedgePlan plan =
            volhedge::hedge_plan(smile, realized, args.adjusted);
        json plan_json = json::parse(plan.to_json_string());
        payload["notional"] = plan_json["notional"];
        payload["delta"] = plan_json["delta"];
        payload["strip"] = plan_json["strip"];
        payload["dropped_slope_sq"] = vs2.dropped_slope_sq;
    }
    emit(payload, args.out);
    return kExitOk;
}

int run_simulate(const std::string& model_path, double t, double T, int paths,
                 std::uint64_t seed, int steps_per_year, int n_strikes,
                 double width_sds, double accrued_var,
                 const std::string& smile_csv, const std::string& smile_meta,
                 const std::string& pathset_prefix, const std::string& out) {
    const volhedge::SvModelSpec spec = volhedge::load_model_spec(model_path);
    volhedge::SimulateConfig sim_cfg;
    sim_cfg.store_sigma_panel = !pathset_prefix.empty();
    const volhedge::PathSet ps =
        volhedge::simulate(spec, t, T, steps_per_year, paths, seed, sim_cfg);

    const double tau = T - t;
    const double vol_hat =
        std::sqrt(volhedge::mean_var(ps.integrated_var).mean / tau);
    const double c2 = accrued_var / tau;
    const double vh2_tau = (c2 + vol_hat * vol_hat) * tau;
    const double center = std::log(spec.spot0()) - 0.5 * vh2_tau;
    const double halfwidth = width_sds * std::sqrt(vh2_tau);
    std::vector<double> strikes(n_strikes);
    for (int i = 0; i < n_strikes; ++i) {
        const double u = (n_strikes == 1) ? 0.0 : -1.0 + 2.0 * i / (n_strikes - 1.0);
        strikes[i] = std::exp(center + halfwidth * u);
    }
    const volhedge::McSmileResult sm = volhedge::mc_smile(ps, strikes);
    if (!smile_csv.empty()) {
        volhedge::save_smile_csv(sm.smile, smile_csv,
                                 smile_meta.empty() ? smile_csv + ".meta.json"
                                                    : smile_meta);
    }
    if (!pathset_prefix.empty()) {
        volhedge::save_pathset(ps, pathset_prefix);
    }
    const volhedge::RealizedState realized(t, T, accrued_var);
    const volhedge::McEstimate vol_est = volhedge::mc_volswap(ps, realized);
    const volhedge::McEstimate var_est = volhedge::mc_varswap(ps, realized);

    json payload;
    payload["model"] = json::parse(volhedge::model_spec_to_json_string(spec, -1));
    payload["volswap"] = {{"value", vol_est.value},
                          {"std_error", vol_est.std_error}};
    payload["varswap"] = {{"strike_sq", var_est.value},
                          {"std_error", var_est.std_error}};
    if (auto feller = spec.feller_ratio()) payload["feller_ratio"] = *feller;
    payload["smile"] = json::array();
    for (std::size_t i = 0; i < sm.smile.quotes().size(); ++i) {
        payload["smile"].push_back({{"strike", sm.smile.quotes()[i].strike},
                                    {"vol", sm.smile.quotes()[i].vol},
                                    {"vol_std_error", sm.vol_std_err[i]}});
    }
    payload["dropped_strikes"] = sm.dropped_strikes;
    payload["config"] = {{"t", t},
                         {"T", T},
                         {"paths", paths},
                         {"seed", seed},
                         {"steps_per_year", steps_per_year},
                         {"strikes", n_strikes},
                         {"width_sds", width_sds},
                         {"accrued_var", accrued_var},
                         {"threads", volhedge::thread_count()}};
    emit(payload, out);
    return kExitOk;
}

int run_backtest_cmd(const std::string& model_path, const std::string& strategy,
                     double T, int paths, std::uint64_t seed,
                     int rebalance_per_year, const volhedge::BacktestConfig& cfg,
                     const std::string& out, const std::string& pnl_csv) {
    const volhedge::SvModelSpec spec = volhedge::load_model_spec(model_path);
    std::vector<volhedge::Strategy> strategies;
    if (strategy == "all") {
        strategies = {volhedge::Strategy::Unhedged, volhedge::Strategy::Strip,
                      volhedge::Strategy::Varswap1, volhedge::Strategy::Varswap2};
    } else {
        strategies = {volhedge::strategy_from_name(strategy)};
    }
    const auto dates = volhedge::daily_rebalance_dates(T, rebalance_per_year);
    const auto reports =
        volhedge::run_backtests(spec, strategies, T, dates, paths, seed, cfg);

    json payload;
    payload["reports"] = json::array();
    for (const auto& r : reports) {
        payload["reports"].push_back(json::parse(r.to_json_string()));
    }
    payload["config"] = {{"T", T},
                         {"paths", paths},
                         {"seed", seed},
                         {"rebalance_per_year", rebalance_per_year},
                         {"inner_paths", cfg.inner_paths},
                         {"inner_steps_per_year", cfg.inner_steps_per_year},
                         {"outer_steps_per_year", cfg.outer_steps_per_year},
                         {"initial_inner_paths", cfg.initial_inner_paths},
                         {"smile_strikes", cfg.smile_strikes},
                         {"smile_width_sds", cfg.smile_width_sds},
                         {"quad_nodes", cfg.adjusted.quad_nodes},
                         {"grid_strikes", cfg.adjusted.grid_strikes},
                         {"threads", volhedge::thread_count()}};
    emit(payload, out);

    if (!pnl_csv.empty()) {
        for (const auto& r : reports) {
            std::string path = pnl_csv;
            if (reports.size() > 1) {
                const auto dot = path.rfind('.');
                const std::string tag =
                    std::string(".") + volhedge::strategy_name(r.strategy);
                if (dot == std::string::npos) {
                    path += tag;
                } else {
                    path.insert(dot, tag);
                }
            }
            volhedge::write_text_file(path, r.pnl_csv());
        }
    }
    return kExitOk;
}

int run_check() {
    bool all_ok = true;

    // Gaussian integral identity on a 21x21 grid.
    {
        double worst = 0.0;
        for (int i = 0; i < 21; ++i) {
            for (int j = 0; j < 21; ++j) {
                const double a = -3.0 + 6.0 * i / 20.0;
                const double b = -3.0 + 6.0 * j / 20.0;
                const auto id = volhedge::gaussian_identity_check(a, b);
                worst = std::max(worst, std::fabs(id.lhs - id.rhs));
            }
        }
        const bool ok = worst < 1e-10;
        all_ok = all_ok && ok;
        std::cout << (ok ? "[PASS]" : "[FAIL]")
                  << " gaussian-identity: max |lhs - rhs| = " << worst << "\n";
    }

    // Deterministic term structures priced through the full pipeline must
    // reproduce the closed form.
    {
        const std::vector<std::vector<double>> vol_sets = {
            {0.2, 0.2, 0.2}, {0.1, 0.3, 0.2}, {0.5, 0.15, 0.35}, {0.05, 0.6, 0.4}};
        double worst = 0.0;
        for (std::size_t c = 0; c < vol_sets.size(); ++c) {
            const volhedge::VolTermStructure ts({0.4, 0.7, 1.0}, vol_sets[c]);
            const double t = 0.2 * (c + 1);
            const double T = 1.0;
            const double exact = volhedge::bs_exact_seasoned_price(ts, t, T);
            const double tau = T - t;
            const double flat_vol = std::sqrt(ts.integral_sq(t, T) / tau);
            std::vector<volhedge::SmileQuote> quotes;
            for (int i = 0; i < 13; ++i) {
                const double k = 100.0 * std::exp(-2.5 + 5.0 * i / 12.0);
                quotes.push_back({k, flat_vol});
            }
            const volhedge::MarketSmile smile(t, T, 100.0, quotes);
            const volhedge::RealizedState realized(t, T, ts.integral_sq(0.0, t));
            const double price = volhedge::seasoned_volswap_price(smile, realized);
            worst = std::max(worst, std::fabs(price - exact));
        }
        const bool ok = worst < 1e-6;
        all_ok = all_ok && ok;
        std::cout << (ok ? "[PASS]" : "[FAIL]")
                  << " exact-deterministic-pricing: max |pipeline - exact| = "
                  << worst << "\n";
    }

    return all_ok ? kExitOk : kExitNumerical;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Seasoned volatility-swap pricing and hedging"};
    app.require_subcommand(1);

    SmileArgs price_args;
    CLI::App* price_cmd =
        app.add_subcommand("price", "Price a seasoned volatility swap");
    add_smile_options(price_cmd, &price_args);

    SmileArgs hedge_args;
    CLI::App* hedge_cmd = app.add_subcommand(
        "hedge", "Option-strip and variance-swap hedges for a seasoned swap");
    add_smile_options(hedge_cmd, &hedge_args);

    std::string sim_model;
    double sim_t = 0.0, sim_T = 1.0, sim_width = 4.0, sim_accrued = 0.0;
    int sim_paths = 20000, sim_spy = 500, sim_strikes = 15;
    std::uint64_t sim_seed = 1;
    std::string sim_smile_csv, sim_smile_meta, sim_pathset, sim_out;
    CLI::App* sim_cmd = app.add_subcommand(
        "simulate", "Simulate an SV model and export its mixing smile");
    sim_cmd->add_option("--model", sim_model, "Model spec JSON")->required();
    sim_cmd->add_option("--t", sim_t, "Valuation time")->capture_default_str();
    sim_cmd->add_option("--T", sim_T, "Expiry")->capture_default_str();
    sim_cmd->add_option("--paths", sim_paths, "Path count")->capture_default_str();
    sim_cmd->add_option("--seed", sim_seed, "RNG seed")->capture_default_str();
    sim_cmd->add_option("--steps-per-year", sim_spy, "Time steps per year")
        ->capture_default_str();
    sim_cmd->add_option("--strikes", sim_strikes, "Smile strike count")
        ->capture_default_str();
    sim_cmd->add_option("--width", sim_width, "Smile width in sds")
        ->capture_default_str();
    sim_cmd->add_option("--accrued-var", sim_accrued,
                        "Accrued variance for the swap estimates")
        ->check(CLI::NonNegativeNumber);
    sim_cmd->add_option("--smile-csv", sim_smile_csv, "Write the smile CSV here");
    sim_cmd->add_option("--smile-meta", sim_smile_meta,
                        "Write the smile sidecar JSON here");
    sim_cmd->add_option("--pathset-out", sim_pathset,
                        "Persist the path panel under this prefix");
    sim_cmd->add_option("--out", sim_out, "Write the JSON summary here");

    std::string bt_model, bt_strategy = "all", bt_out, bt_pnl_csv;
    double bt_T = 1.0;
    int bt_paths = 500, bt_rebalance = 250;
    std::uint64_t bt_seed = 1;
    volhedge::BacktestConfig bt_cfg;
    CLI::App* bt_cmd = app.add_subcommand(
        "backtest", "Hedge a volatility swap along simulated paths");
    bt_cmd->add_option("--model", bt_model, "Model spec JSON")->required();
    bt_cmd->add_option("--strategy", bt_strategy,
                       "unhedged | strip | varswap1 | varswap2 | all")
        ->capture_default_str();
    bt_cmd->add_option("--T", bt_T, "Swap expiry")->capture_default_str();
    bt_cmd->add_option("--paths", bt_paths, "Outer path count")
        ->capture_default_str();
    bt_cmd->add_option("--seed", bt_seed, "RNG seed")->capture_default_str();
    bt_cmd->add_option("--rebalance-per-year", bt_rebalance,
                       "Rebalance dates per year")
        ->capture_default_str();
    bt_cmd->add_option("--inner-paths", bt_cfg.inner_paths,
                       "Mixing paths per rebalance smile")
        ->capture_default_str();
    bt_cmd->add_option("--inner-steps-per-year", bt_cfg.inner_steps_per_year,
                       "Inner simulation steps per year")
        ->capture_default_str();
    bt_cmd->add_option("--outer-steps-per-year", bt_cfg.outer_steps_per_year,
                       "State-evolution substeps per year")
        ->capture_default_str();
    bt_cmd->add_option("--initial-inner-paths", bt_cfg.initial_inner_paths,
                       "Budget for the shared date-0 smile")
        ->capture_default_str();
    bt_cmd->add_option("--out", bt_out, "Write the report JSON here");
    bt_cmd->add_option("--pnl-csv", bt_pnl_csv,
                       "Write per-path P&L CSV here (suffix per strategy)");

    CLI::App* check_cmd = app.add_subcommand(
        "check", "Run the built-in exactness self-tests");
    (void)check_cmd;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (price_cmd->parsed()) return run_price(price_args, false);
        if (hedge_cmd->parsed()) return run_price(hedge_args, true);
        if (sim_cmd->parsed()) {
            return run_simulate(sim_model, sim_t, sim_T, sim_paths, sim_seed,
                                sim_spy, sim_strikes, sim_width, sim_accrued,
                                sim_smile_csv, sim_smile_meta, sim_pathset,
                                sim_out);
        }
        if (bt_cmd->parsed()) {
            return run_backtest_cmd(bt_model, bt_strategy, bt_T, bt_paths,
                                    bt_seed, bt_rebalance, bt_cfg, bt_out,
                                    bt_pnl_csv);
        }
        if (check_cmd->parsed()) return run_check();
    } catch (const volhedge::InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const volhedge::NumericalError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
    return kExitOk;
}
