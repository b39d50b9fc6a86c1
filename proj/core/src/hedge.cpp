#include "volhedge/hedge.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "volhedge/analytics.hpp"
#include "volhedge/errors.hpp"
#include "volhedge/math.hpp"
#include "volhedge/quadrature.hpp"

namespace volhedge {

std::vector<StripNode> option_strip_weights(const MarketSmile& smile,
                                            const RealizedState& realized,
                                            const ZeroVannaQuote& zv,
                                            int quad_nodes) {
    if (std::fabs(zv.spot - smile.spot()) > 1e-12 * std::max(1.0, smile.spot()) ||
        !realized.same_as(RealizedState(zv.t, zv.T, zv.accrued_var))) {
        throw ConsistencyError(
            "option_strip_weights: zero-vanna quote was computed under a "
            "different smile or realized state");
    }
    const auto mix = LognormalMix::make(realized.c(), realized.tau(), quad_nodes);
    std::vector<StripNode> strip(mix.h.size());
    for (std::size_t i = 0; i < mix.h.size(); ++i) {
        strip[i] = {zv.strike / mix.h[i], mix.w[i] * mix.h[i]};
    }
    std::sort(strip.begin(), strip.end(),
              [](const StripNode& a, const StripNode& b) {
                  return a.strike < b.strike;
              });
    return strip;
}

HedgePlan hedge_plan(const MarketSmile& smile, const RealizedState& realized,
                     const AdjustedConfig& config) {
    const AdjustedSmile adj = build_adjusted_smile(smile, realized, config);
    const ZeroVannaQuote zv = zero_vanna_point(adj);

    const double tau = realized.tau();
    const double sqrt_tau = std::sqrt(tau);
    const BsGreeks greeks =
        bs_greeks({smile.spot(), zv.strike, zv.vol, tau, true});
    if (greeks.vega < 1e-12) {
        throw DegenerateInputError("hedge_plan: vega below 1e-12");
    }
    // Smiles in this model class are functions of moneyness, so the spot
    // sensitivity of the zero-vanna vol is the negated strike slope.
    const double dvol_dspot = -zv.slope / (sqrt_tau * smile.spot());
    const double skew_factor = 1.0 + zv.total_vol() * zv.slope;
    if (!(skew_factor > 0.0)) {
        throw NumericalError("hedge_plan: non-positive skew factor");
    }

    HedgePlan plan;
    plan.delta = greeks.delta + greeks.vega * dvol_dspot;
    plan.notional = sqrt_tau / greeks.vega / skew_factor;
    plan.strip = option_strip_weights(smile, realized, zv, config.quad_nodes);
    plan.zv = zv;
    plan.wing_warning = zv.wing_warning;
    return plan;
}

std::string HedgePlan::to_json_string(int indent) const {
    nlohmann::json j;
    j["notional"] = notional;
    j["delta"] = delta;
    j["strip"] = nlohmann::json::array();
    for (const auto& node : strip) {
        j["strip"].push_back({{"strike", node.strike}, {"weight", node.weight}});
    }
    j["zero_vanna"] = {{"strike", zv.strike},
                       {"vol", zv.vol},
                       {"slope", zv.slope},
                       {"dminus_slope", zv.dminus_slope},
                       {"dminus_convexity", zv.dminus_convexity}};
    j["diagnostics"] = {{"wing_warning", wing_warning},
                        {"spot", zv.spot},
                        {"t", zv.t},
                        {"T", zv.T},
                        {"accrued_var", zv.accrued_var}};
    return j.dump(indent);
}

double seasoned_varswap_strike(const AdjustedSmile& adj) {
    const double span_lo = adj.dminus_min();
    const double span_hi = adj.dminus_max();
    if (span_lo > -4.0 || span_hi < 4.0) {
        throw CoverageError("seasoned_varswap_strike: d_minus span [" +
                            std::to_string(span_lo) + ", " +
                            std::to_string(span_hi) +
                            "] does not cover [-4, 4]");
    }
    // N' mass beyond |d| = 6 is below 1e-8; the integrand extends flat.
    static const GaussRule rule = gauss_legendre(256, -6.0, 6.0);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double d = rule.nodes[i];
        const double tv = adj.total_vol_at_dminus(d);
        acc += rule.weights[i] * norm_pdf(d) * tv * tv;
    }
    return acc;
}

VarSwapHedge varswap_hedge_ratio(const AdjustedSmile& adj,
                                 const ZeroVannaQuote& zv, int order) {
    if (order != 1 && order != 2) {
        throw ConfigError("varswap_hedge_ratio: order must be 1 or 2");
    }
    const double total_vol = zv.total_vol();
    VarSwapHedge hedge;
    hedge.order = order;
    hedge.varswap_strike_sq = seasoned_varswap_strike(adj);
    hedge.convexity = hedge.varswap_strike_sq - total_vol * total_vol;
    hedge.convexity_correction = total_vol * zv.dminus_convexity;
    hedge.dropped_slope_sq = zv.dminus_slope * zv.dminus_slope;
    const double denom = (order == 1)
                             ? 2.0 * total_vol
                             : 2.0 * total_vol + zv.dminus_convexity;
    if (!(denom > 0.0)) {
        throw NumericalError("varswap_hedge_ratio: non-positive denominator");
    }
    hedge.ratio = 1.0 / denom;
    return hedge;
}

VarSwapHedge varswap_hedge_ratio(const AdjustedSmile& adj, int order) {
    return varswap_hedge_ratio(adj, zero_vanna_point(adj), order);
}

}  // namespace volhedge
