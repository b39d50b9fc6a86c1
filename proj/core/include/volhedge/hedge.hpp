#pragma once

#include <string>
#include <vector>

#include "volhedge/adjusted.hpp"
#include "volhedge/volswap.hpp"

namespace volhedge {

struct StripNode {
    double strike = 0.0;
    double weight = 0.0;  // h_i * w_i, always >= 0
};

// Discretization of the zero-vanna adjusted option as market vanillas:
// node i holds weight h_i*w_i at strike K_-/h_i, so the weighted sum of
// market call prices reproduces adjusted_call_price(K_-). Throws
// ConsistencyError when the quote was computed under different inputs.
std::vector<StripNode> option_strip_weights(const MarketSmile& smile,
                                            const RealizedState& realized,
                                            const ZeroVannaQuote& zv,
                                            int quad_nodes = 64);

// Full option-strip hedge for a seasoned volatility swap.
struct HedgePlan {
    double notional = 0.0;  // vol points per unit option premium
    double delta = 0.0;     // skew-adjusted delta, shares per option unit
    std::vector<StripNode> strip;
    ZeroVannaQuote zv;
    bool wing_warning = false;

    std::string to_json_string(int indent = 2) const;
};

HedgePlan hedge_plan(const MarketSmile& smile, const RealizedState& realized,
                     const AdjustedConfig& config = {});

// Seasoned variance-swap strike in total-variance terms, V^2_{0,T}(t) * T:
// the Gaussian-weighted integral of (I^H sqrt(tau))^2 over d_minus in
// [-6, 6] with flat wing extension. Requires the sampled d_minus range to
// cover [-4, 4].
double seasoned_varswap_strike(const AdjustedSmile& adj);

struct VarSwapHedge {
    int order = 1;
    double ratio = 0.0;             // d(volswap)/d(varswap) hedge ratio
    double varswap_strike_sq = 0.0; // V^2_{0,T}(t) * T
    double convexity = 0.0;         // V^2 T - (I^H_- sqrt(tau))^2
    double convexity_correction = 0.0;  // I^H_- sqrt(tau) * d2(I^H sqrt(tau))/dd-^2
    double dropped_slope_sq = 0.0;  // (d(I^H sqrt(tau))/dd-)^2, reported only
};

// order 1: 1 / (2 I^H_- sqrt(tau)); order 2 adds the d_minus convexity to
// the denominator. Throws on a non-positive order-2 denominator.
VarSwapHedge varswap_hedge_ratio(const AdjustedSmile& adj, int order);
VarSwapHedge varswap_hedge_ratio(const AdjustedSmile& adj,
                                 const ZeroVannaQuote& zv, int order);

}  // namespace volhedge
