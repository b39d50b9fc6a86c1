#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "volhedge/adjusted.hpp"
#include "volhedge/smile.hpp"

namespace volhedge {

enum class SvVariant { Heston, LognormalSabr, ThreeHalves };

struct HestonParams {
    double kappa = 0.0;
    double theta = 0.0;
    double xi = 0.0;
    double v0 = 0.0;
};

struct LognormalSabrParams {
    double alpha = 0.0;
    double sigma0 = 0.0;
};

struct ThreeHalvesParams {
    double kappa = 0.0;
    double theta = 0.0;
    double xi = 0.0;
    double v0 = 0.0;
};

// A stochastic-volatility model: dS = sigma S (rho dW + rhobar dZ) with the
// vol process given by the variant. Zero rates and dividends throughout.
class SvModelSpec {
public:
    // Placeholder state only; build real specs through the factories below,
    // which validate their parameters.
    SvModelSpec() = default;

    static SvModelSpec heston(const HestonParams& p, double rho, double spot0);
    static SvModelSpec lognormal_sabr(const LognormalSabrParams& p, double rho,
                                      double spot0);
    static SvModelSpec three_halves(const ThreeHalvesParams& p, double rho,
                                    double spot0);

    SvVariant variant() const { return variant_; }
    double rho() const { return rho_; }
    double spot0() const { return spot0_; }
    const HestonParams& heston_params() const;
    const LognormalSabrParams& sabr_params() const;
    const ThreeHalvesParams& three_halves_params() const;

    // Heston only: 2 kappa theta / xi^2, reported but never enforced.
    std::optional<double> feller_ratio() const;

private:
    SvVariant variant_ = SvVariant::Heston;
    std::variant<HestonParams, LognormalSabrParams, ThreeHalvesParams> params_;
    double rho_ = 0.0;
    double spot0_ = 0.0;
};

// Single-step access to the vol process, shared by the path engines.
// The state is the Heston/3-2 variance (full-truncation Euler) or the SABR
// vol (exact lognormal step).
class VolDynamics {
public:
    explicit VolDynamics(const SvModelSpec& spec);

    double initial_state() const { return state0_; }
    double sigma(double state) const;
    double step(double state, double dt, double dw) const;

    // E[ int_0^tau sigma^2 | state ] where a closed form exists
    // (Heston, lognormal SABR); empty for 3/2.
    std::optional<double> expected_remaining_variance(double state,
                                                      double tau) const;

private:
    SvVariant variant_;
    double a_ = 0.0, b_ = 0.0, c_ = 0.0;  // flattened params
    double state0_ = 0.0;
};

struct SimulateConfig {
    bool store_sigma_panel = false;
};

// Panel of simulated vol paths on [t, T] with the mixing statistics needed
// for conditional Black-Scholes pricing. The spot is never simulated here.
struct PathSet {
    SvModelSpec spec;
    double t = 0.0;
    double T = 0.0;
    int steps_per_year = 0;
    std::uint64_t seed = 0;

    std::vector<double> time_grid;
    std::vector<double> integrated_var;  // int_t^T sigma^2, trapezoid
    std::vector<double> mixing_m;        // M_{t,T}(rho), log-Euler
    std::vector<double> mixing_vol;      // sigma_{t,T}(rho)
    std::vector<double> final_sigma;
    std::vector<double> sigma_panel;  // row-major [path][grid], optional

    std::size_t n_paths() const { return integrated_var.size(); }
    double tau() const { return T - t; }
    bool has_panel() const { return !sigma_panel.empty(); }
    double sigma_at(std::size_t path, std::size_t grid_index) const {
        return sigma_panel[path * time_grid.size() + grid_index];
    }
};

// Simulates the vol process with per-path RNG streams derived from
// (seed, path index); results are identical under any thread schedule.
PathSet simulate(const SvModelSpec& spec, double t, double T, int steps_per_year,
                 int n_paths, std::uint64_t seed,
                 const SimulateConfig& config = {});

struct McSmileResult {
    MarketSmile smile;
    std::vector<double> price_std_err;  // aligned with smile quotes
    std::vector<double> vol_std_err;
    std::vector<double> dropped_strikes;
};

// Mixing (conditional Black-Scholes) smile: per path the vanilla is priced
// at spot S*M with vol sigma_{t,T}(rho), then averaged and inverted per
// strike. Strikes whose mean price cannot be inverted are dropped.
McSmileResult mc_smile(const PathSet& paths, std::span<const double> strikes);

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
};

// Brute-force swap oracles over the path panel.
McEstimate mc_volswap(const PathSet& paths, const RealizedState& realized);
McEstimate mc_varswap(const PathSet& paths, const RealizedState& realized);

// Flat binary panel with a JSON descriptor; requires the sigma panel.
void save_pathset(const PathSet& paths, const std::string& prefix);
PathSet load_pathset(const std::string& prefix);

// The same dynamics restarted from a later state: sigma becomes the initial
// vol (v0 = sigma^2 for the variance models) and the spot is replaced.
SvModelSpec with_initial_state(const SvModelSpec& spec, double sigma,
                               double spot);

}  // namespace volhedge
