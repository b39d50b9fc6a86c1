#include <cmath>
#include <vector>

#include "doctest.h"
#include "volhedge/analytics.hpp"
#include "volhedge/errors.hpp"
#include "volhedge/hedge.hpp"
#include "volhedge/math.hpp"

using namespace volhedge;

namespace {

MarketSmile flat_smile(double t, double T, double vol, double spot = 100.0) {
    std::vector<SmileQuote> quotes;
    for (int i = 0; i < 13; ++i) {
        quotes.push_back({spot * std::exp(-2.5 + 5.0 * i / 12.0), vol});
    }
    return MarketSmile(t, T, spot, quotes);
}

MarketSmile skewed_smile(double t, double T, double spot = 100.0) {
    std::vector<SmileQuote> quotes;
    for (int i = 0; i < 21; ++i) {
        const double x = -1.2 + 2.4 * i / 20.0;
        quotes.push_back({spot * std::exp(x), 0.2 - 0.08 * x + 0.06 * x * x});
    }
    return MarketSmile(t, T, spot, quotes);
}

}  // namespace

TEST_CASE("strip degenerates to the single zero-vanna option when c = 0") {
    const MarketSmile smile = flat_smile(0.0, 1.0, 0.2);
    const RealizedState realized(0.0, 1.0, 0.0);
    const AdjustedSmile adj = build_adjusted_smile(smile, realized);
    const ZeroVannaQuote zv = zero_vanna_point(adj);
    const auto strip = option_strip_weights(smile, realized, zv);
    REQUIRE(strip.size() == 1);
    CHECK(strip[0].strike == zv.strike);
    CHECK(strip[0].weight == 1.0);
}

TEST_CASE("strip weights are positive, normalized and reprice the meta option") {
    const double t = 0.25, T = 1.25;
    const MarketSmile smile = skewed_smile(t, T);
    const RealizedState realized(t, T, 0.3 * 0.3 * (T - t));
    const AdjustedSmile adj = build_adjusted_smile(smile, realized);
    const ZeroVannaQuote zv = zero_vanna_point(adj);
    const auto strip = option_strip_weights(smile, realized, zv);
    REQUIRE(strip.size() == 64);
    double w_sum = 0.0, reprice = 0.0;
    for (const auto& node : strip) {
        CHECK(node.weight >= 0.0);
        w_sum += node.weight;
        reprice += node.weight * bs_price({smile.spot(), node.strike,
                                           smile.vol(node.strike), T - t, true});
    }
    CHECK(std::fabs(w_sum - 1.0) < 1e-12);
    const double direct = adjusted_call_price(smile, realized, zv.strike);
    CHECK(std::fabs(reprice - direct) < 1e-10);

    // mismatched realized state is rejected
    const RealizedState other(t, T, 0.2 * 0.2 * (T - t));
    CHECK_THROWS_AS(option_strip_weights(smile, other, zv), ConsistencyError);
}

TEST_CASE("flat-smile hedge plan in closed form") {
    // d- = 0 at the zero-vanna strike, so d+ = I sqrt(tau) and the
    // skew-adjusted delta reduces to N(I sqrt(tau)).
    const MarketSmile smile = flat_smile(0.0, 1.0, 0.2);
    const RealizedState realized(0.0, 1.0, 0.0);
    const HedgePlan plan = hedge_plan(smile, realized);
    CHECK(std::fabs(plan.delta - 0.57925970943910302) < 1e-9);  // N(0.2)
    const BsGreeks g =
        bs_greeks({100.0, plan.zv.strike, plan.zv.vol, 1.0, true});
    CHECK(plan.notional == doctest::Approx(1.0 / g.vega).epsilon(1e-9));
    double w_sum = 0.0;
    for (const auto& node : plan.strip) w_sum += node.weight;
    CHECK(std::fabs(w_sum - 1.0) < 1e-12);
}

TEST_CASE("notional inverts the vega-and-skew factor identically") {
    const MarketSmile smile = skewed_smile(0.2, 1.0);
    const RealizedState realized(0.2, 1.0, 0.25 * 0.25 * 0.2);
    const HedgePlan plan = hedge_plan(smile, realized);
    const double tau = 0.8;
    const BsGreeks g =
        bs_greeks({100.0, plan.zv.strike, plan.zv.vol, tau, true});
    const double product = plan.notional * (g.vega / std::sqrt(tau)) *
                           (1.0 + plan.zv.total_vol() * plan.zv.slope);
    CHECK(std::fabs(product - 1.0) < 1e-12);
    // JSON serialization carries the strip
    const std::string json = plan.to_json_string();
    CHECK(json.find("\"notional\"") != std::string::npos);
    CHECK(json.find("\"strip\"") != std::string::npos);
}

TEST_CASE("gatheral integral: flat and linear profiles") {
    const double t = 0.25, T = 1.25, tau = 1.0, v = 0.3;
    const MarketSmile smile = flat_smile(t, T, std::sqrt(v * v - 0.01));
    const RealizedState realized(t, T, 0.01 * tau);
    const AdjustedSmile adj = build_adjusted_smile(smile, realized);
    const double strike_sq = seasoned_varswap_strike(adj);
    CHECK(std::fabs(strike_sq - v * v * tau) < 1e-8 + 1e-8 * v * v * tau);

    // Linear total vol in d_minus: integral = a^2 + b^2 by Gaussian moments.
    const double a = 0.25, b = 0.04;
    std::vector<AdjustedSmile::Node> nodes;
    const double spot = 100.0;
    // choose strikes so that d_minus spans [-5, 5]: solve iteratively
    for (int i = 0; i < 41; ++i) {
        const double d = -5.0 + 10.0 * i / 40.0;
        const double total_vol = a + b * d;
        // log K = log S - d*total_vol - total_vol^2 / 2
        const double log_k =
            std::log(spot) - d * total_vol - 0.5 * total_vol * total_vol;
        nodes.push_back({std::exp(log_k), total_vol / std::sqrt(tau)});
    }
    std::sort(nodes.begin(), nodes.end(),
              [](const auto& x, const auto& y) { return x.strike < y.strike; });
    const MarketSmile base = flat_smile(t, T, a);
    const AdjustedSmile synthetic(base, realized, nodes,
                                  LognormalMix::make(0.1, tau, 64), false);
    const double got = seasoned_varswap_strike(synthetic);
    CHECK(std::fabs(got - (a * a + b * b)) < 1e-7);
}

TEST_CASE("coverage error lists the achieved span") {
    const MarketSmile smile = flat_smile(0.0, 1.0, 0.3);
    const RealizedState realized(0.0, 1.0, 0.0);
    AdjustedConfig narrow;
    narrow.grid_halfwidth_sds = 3.0;  // d_minus span ~ [-3, 3]
    const AdjustedSmile adj = build_adjusted_smile(smile, realized, narrow);
    CHECK_THROWS_AS(seasoned_varswap_strike(adj), CoverageError);
}

TEST_CASE("variance-swap hedge ratios") {
    const double t = 0.25, T = 1.25, tau = 1.0;
    const MarketSmile smile = flat_smile(t, T, 0.25);
    const RealizedState realized(t, T, 0.02 * tau);
    const AdjustedSmile adj = build_adjusted_smile(smile, realized);
    const ZeroVannaQuote zv = zero_vanna_point(adj);

    const VarSwapHedge h1 = varswap_hedge_ratio(adj, 1);
    CHECK(h1.ratio == 1.0 / (2.0 * zv.total_vol()));  // exact algebraic form
    const VarSwapHedge h2 = varswap_hedge_ratio(adj, 2);
    // flat smile: zero convexity, both orders coincide
    CHECK(h2.ratio == doctest::Approx(h1.ratio).epsilon(1e-9));
    CHECK(std::fabs(h2.convexity_correction) < 1e-7);
    CHECK_THROWS_AS(varswap_hedge_ratio(adj, 3), ConfigError);

    // direct formula arithmetic at a synthetic quote
    ZeroVannaQuote synthetic = zv;
    synthetic.vol = 0.2 / std::sqrt(tau);
    synthetic.dminus_convexity = 0.02;
    const VarSwapHedge h2s = varswap_hedge_ratio(adj, synthetic, 2);
    CHECK(h2s.ratio == doctest::Approx(2.380952380952381).epsilon(1e-15));
    CHECK(h2s.ratio <= 1.0 / (2.0 * synthetic.total_vol()));

    synthetic.dminus_convexity = -0.5;
    CHECK_THROWS_AS(varswap_hedge_ratio(adj, synthetic, 2), NumericalError);
}

TEST_CASE("jensen: varswap strike dominates the squared volswap price") {
    const double t = 0.25, T = 1.25;
    const MarketSmile smile = skewed_smile(t, T);
    const RealizedState realized(t, T, 0.04 * 0.25);
    const AdjustedSmile adj = build_adjusted_smile(smile, realized);
    const ZeroVannaQuote zv = zero_vanna_point(adj);
    const VarSwapHedge h2 = varswap_hedge_ratio(adj, zv, 2);
    if (zv.dminus_convexity >= 0.0) {
        CHECK(h2.varswap_strike_sq >=
              zv.total_vol() * zv.total_vol() - 1e-10);
    }
}
