#include <cmath>
#include <vector>

#include "doctest.h"
#include "volhedge/adjusted.hpp"
#include "volhedge/analytics.hpp"
#include "volhedge/errors.hpp"

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
    // Downward-sloping smile with mild curvature, equity-like.
    std::vector<SmileQuote> quotes;
    for (int i = 0; i < 21; ++i) {
        const double x = -1.2 + 2.4 * i / 20.0;  // log moneyness
        const double vol = 0.2 - 0.08 * x + 0.06 * x * x;
        quotes.push_back({spot * std::exp(x), vol});
    }
    return MarketSmile(t, T, spot, quotes);
}

}  // namespace

TEST_CASE("realized state validation and c^2") {
    const RealizedState r(0.25, 1.0, 0.03);
    CHECK(r.tau() == doctest::Approx(0.75));
    CHECK(r.c2() == doctest::Approx(0.04));
    CHECK_THROWS_AS(RealizedState(1.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(RealizedState(-0.1, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(RealizedState(0.5, 1.0, -0.01), DomainError);
    CHECK_THROWS_AS(RealizedState(0.0, 1.0, 0.01), DomainError);
}

TEST_CASE("lognormal mix is a martingale discretization") {
    const auto mix = LognormalMix::make(0.3, 0.75, 64);
    double w_sum = 0.0, wh_sum = 0.0;
    for (std::size_t i = 0; i < mix.h.size(); ++i) {
        CHECK(mix.h[i] > 0.0);
        CHECK(mix.w[i] > 0.0);
        w_sum += mix.w[i];
        wh_sum += mix.w[i] * mix.h[i];
    }
    CHECK(std::fabs(w_sum - 1.0) < 1e-12);
    CHECK(std::fabs(wh_sum - 1.0) < 1e-12);  // E[H] = 1 under mu = -nu^2/2
    CHECK_THROWS_AS(LognormalMix::make(0.3, 0.75, 7), ConfigError);

    const auto degenerate = LognormalMix::make(0.0, 0.75, 64);
    CHECK(degenerate.degenerate());
    CHECK(degenerate.h[0] == 1.0);
}

TEST_CASE("fresh swap: adjustment is the identity") {
    const MarketSmile smile = flat_smile(0.0, 1.0, 0.25);
    const RealizedState realized(0.0, 1.0, 0.0);
    for (double k : {70.0, 100.0, 130.0}) {
        const double direct = bs_price({100.0, k, smile.vol(k), 1.0, true});
        CHECK(adjusted_call_price(smile, realized, k) == direct);
    }
    const AdjustedSmile adj = build_adjusted_smile(smile, realized);
    for (const auto& node : adj.nodes()) {
        CHECK(std::fabs(node.vol - 0.25) < 1e-9);
    }
}

TEST_CASE("flat smile: variance stacking is exact") {
    // I = 0.4, c = 0.3 -> adjusted vol sqrt(0.16 + 0.09) = 0.5 at the
    // zero-vanna strike (exact in the flat case for every strike).
    const double t = 0.25, T = 1.25, tau = 1.0;
    const MarketSmile smile = flat_smile(t, T, 0.4);
    const RealizedState realized(t, T, 0.09 * tau);
    CHECK(realized.c() == doctest::Approx(0.3));
    const double k_zv = 100.0 * std::exp(-0.5 * 0.25 * tau);
    const double price = adjusted_call_price(smile, realized, k_zv);
    const double iv = implied_vol(price, 100.0, k_zv, tau, true);
    CHECK(std::fabs(iv - 0.5) < 1e-10);

    const AdjustedSmile adj = build_adjusted_smile(smile, realized);
    for (const auto& node : adj.nodes()) {
        CHECK(std::fabs(node.vol - 0.5) < 2e-7);
    }
}

TEST_CASE("quadrature self-convergence") {
    const MarketSmile smile = flat_smile(0.3, 1.0, 0.4);
    const RealizedState realized(0.3, 1.0, 0.3 * 0.3 * 0.7);
    for (double k : {85.0, 100.0, 115.0}) {
        const double p64 = adjusted_call_price(smile, realized, k, 64);
        const double p128 = adjusted_call_price(smile, realized, k, 128);
        CHECK(std::fabs(p64 - p128) < 1e-10);
    }
    // skewed smile: doubling nodes beyond 64 moves implied vols < 1e-8
    const MarketSmile sk = skewed_smile(0.3, 1.0);
    for (double k : {85.0, 100.0, 115.0}) {
        const double p64 = adjusted_call_price(sk, realized, k, 64);
        const double p128 = adjusted_call_price(sk, realized, k, 128);
        const double v64 = implied_vol(p64, 100.0, k, 0.7, true);
        const double v128 = implied_vol(p128, 100.0, k, 0.7, true);
        CHECK(std::fabs(v64 - v128) < 1e-8);
    }
    CHECK_THROWS_AS(adjusted_call_price(smile, realized, 100.0, 4), ConfigError);
}

TEST_CASE("adjusted smile structure on a skewed smile") {
    const MarketSmile smile = skewed_smile(0.5, 1.5);
    const RealizedState realized(0.5, 1.5, 0.2 * 0.2 * 0.5);
    const AdjustedSmile adj = build_adjusted_smile(smile, realized);

    // d_minus nodes strictly increasing (validated in construction too).
    const auto& dn = adj.dminus_nodes();
    for (std::size_t i = 1; i < dn.size(); ++i) {
        CHECK(dn[i].d_minus > dn[i - 1].d_minus);
    }

    // Adjusted prices decreasing and convex in strike across the grid.
    const auto& nodes = adj.nodes();
    std::vector<double> prices(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        prices[i] =
            adjusted_call_price(smile, realized, nodes[i].strike);
    }
    for (std::size_t i = 1; i < prices.size(); ++i) {
        CHECK(prices[i] <= prices[i - 1] + 1e-12);
    }
    for (std::size_t i = 1; i + 1 < prices.size(); ++i) {
        const double dk0 = nodes[i].strike - nodes[i - 1].strike;
        const double dk1 = nodes[i + 1].strike - nodes[i].strike;
        const double left = (prices[i] - prices[i - 1]) / dk0;
        const double right = (prices[i + 1] - prices[i]) / dk1;
        CHECK(right >= left - 1e-10);
    }

    // Variance adds near the money when c > 0.
    const double spot = adj.spot();
    for (double k : {spot * 0.9, spot, spot * 1.1}) {
        CHECK(adj.vol(k) >= smile.vol(k) - 1e-9);
    }
}

TEST_CASE("grid validation") {
    const MarketSmile smile = flat_smile(0.0, 1.0, 0.2);
    const RealizedState realized(0.0, 1.0, 0.0);
    std::vector<double> bad = {100.0, 90.0, 110.0, 120.0, 130.0};
    CHECK_THROWS_AS(build_adjusted_smile(smile, realized, bad), ConfigError);
    std::vector<double> tiny = {90.0, 100.0};
    CHECK_THROWS_AS(build_adjusted_smile(smile, realized, tiny), ConfigError);
    AdjustedConfig cfg;
    cfg.grid_halfwidth_sds = 2.0;
    CHECK_THROWS_AS(default_strike_grid(smile, realized, cfg), ConfigError);
}
