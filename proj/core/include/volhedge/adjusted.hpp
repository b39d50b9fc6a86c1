#pragma once

#include <span>
#include <vector>

#include "volhedge/curve.hpp"
#include "volhedge/smile.hpp"

namespace volhedge {

// Swap-life bookkeeping: valuation time t inside a swap on [0, T] with the
// realized variance integral accumulated so far. c^2 = accrued_var / (T - t).
class RealizedState {
public:
    RealizedState(double t, double T, double accrued_var);

    double t() const { return t_; }
    double T() const { return T_; }
    double tau() const { return T_ - t_; }
    double accrued_var() const { return accrued_var_; }
    double c2() const { return accrued_var_ / tau(); }
    double c() const;

    bool same_as(const RealizedState& other, double tol = 1e-12) const;

private:
    double t_;
    double T_;
    double accrued_var_;
};

struct AdjustedConfig {
    int quad_nodes = 64;          // Gauss-Hermite nodes for the h-integral
    int grid_strikes = 41;        // log-spaced strikes for the adjusted smile
    double grid_halfwidth_sds = 5.0;  // grid half-width in units of vol*sqrt(tau)
};

// Discretization of the lognormal mixing density q(h) with log h drawn from
// N(mu, nu^2), nu = c*sqrt(tau), mu = -nu^2/2 (martingale normalization, so
// sum w_i h_i = 1). c == 0 degenerates to the single point h = 1.
struct LognormalMix {
    std::vector<double> h;
    std::vector<double> w;

    static LognormalMix make(double c, double tau, int nodes);

    bool degenerate() const { return h.size() == 1; }
};

// Price of a call on the adjusted process S*H: the h-integral of market call
// prices evaluated by Gauss-Hermite in log h. The result is clamped into the
// no-arbitrage band [intrinsic, spot].
double adjusted_call_price(const MarketSmile& smile, const RealizedState& realized,
                           double strike, int quad_nodes = 64);

// The adjusted smile: implied vols of options on S*H sampled on a strike
// grid, plus the same data re-parameterized on the d_minus axis. Immutable.
class AdjustedSmile {
public:
    struct Node {
        double strike = 0.0;
        double vol = 0.0;  // I^H
    };
    struct DminusNode {
        double d_minus = 0.0;
        double total_vol = 0.0;  // I^H * sqrt(tau)
    };

    AdjustedSmile(MarketSmile base, RealizedState realized,
                  std::vector<Node> nodes, LognormalMix mix, bool wing_warning);

    const MarketSmile& base() const { return base_; }
    const RealizedState& realized() const { return realized_; }
    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<DminusNode>& dminus_nodes() const { return dminus_nodes_; }
    const LognormalMix& mix() const { return mix_; }
    bool wing_warning() const { return wing_warning_; }

    double spot() const { return base_.spot(); }
    double tau() const { return realized_.tau(); }

    double vol(double strike) const;
    double total_var(double strike) const;                 // (I^H sqrt(tau))^2
    MarketSmile::Slope slope(double strike) const;         // d(I^H sqrt(tau))/dlogK
    double total_vol_at_dminus(double d_minus) const;      // flat beyond samples
    double dminus_min() const { return dminus_nodes_.front().d_minus; }
    double dminus_max() const { return dminus_nodes_.back().d_minus; }

private:
    MarketSmile base_;
    RealizedState realized_;
    std::vector<Node> nodes_;
    std::vector<DminusNode> dminus_nodes_;
    LognormalMix mix_;
    PchipCurve curve_;         // log-strike -> (I^H sqrt(tau))^2
    PchipCurve dminus_curve_;  // d_minus -> I^H sqrt(tau)
    bool wing_warning_ = false;
};

// Prices every grid strike through the h-integral, inverts to implied vols
// and assembles the adjusted smile. Inversion failure at a strike raises
// ConstructionError naming it. Pricing parallelizes across grid strikes.
AdjustedSmile build_adjusted_smile(const MarketSmile& smile,
                                   const RealizedState& realized,
                                   std::span<const double> strike_grid,
                                   const AdjustedConfig& config = {});

// Log-spaced strikes centered on the anticipated zero-vanna strike with
// half-width config.grid_halfwidth_sds * I^H * sqrt(tau).
std::vector<double> default_strike_grid(const MarketSmile& smile,
                                        const RealizedState& realized,
                                        const AdjustedConfig& config = {});

inline AdjustedSmile build_adjusted_smile(const MarketSmile& smile,
                                          const RealizedState& realized,
                                          const AdjustedConfig& config = {}) {
    const auto grid = default_strike_grid(smile, realized, config);
    return build_adjusted_smile(smile, realized, grid, config);
}

}  // namespace volhedge
