#include <cmath>
#include <random>

#include "doctest.h"
#include "volhedge/analytics.hpp"
#include "volhedge/errors.hpp"

using namespace volhedge;

TEST_CASE("bs_price degenerate and reference cases") {
    CHECK(bs_price({100, 100, 0.2, 0.0, true}) == 0.0);
    CHECK(bs_price({100, 80, 0.0, 1.0, true}) == 20.0);
    // Independent high-precision evaluation: 100*(N(0.1) - N(-0.1)).
    CHECK(std::fabs(bs_price({100, 100, 0.2, 1.0, true}) - 7.9655674554057963) <
          1e-10);
    CHECK(std::fabs(bs_price({100, 120, 0.35, 0.5, true}) - 3.6225905499436366) <
          1e-10);
}

TEST_CASE("bs_price rejects bad input") {
    CHECK_THROWS_AS(bs_price({-1, 100, 0.2, 1, true}), DomainError);
    CHECK_THROWS_AS(bs_price({100, 0.0, 0.2, 1, true}), DomainError);
    CHECK_THROWS_AS(bs_price({100, 100, -0.2, 1, true}), DomainError);
    CHECK_THROWS_AS(
        bs_price({100, 100, std::numeric_limits<double>::quiet_NaN(), 1, true}),
        DomainError);
    CHECK_THROWS_AS(
        bs_price({std::numeric_limits<double>::infinity(), 100, 0.2, 1, true}),
        DomainError);
}

TEST_CASE("put-call parity and vol monotonicity") {
    std::mt19937 eng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double spot = 50.0 + 100.0 * u(eng);
        const double strike = spot * std::exp(-1.0 + 2.0 * u(eng));
        const double vol = 0.05 + 0.8 * u(eng);
        const double tau = 0.05 + 3.0 * u(eng);
        const double call = bs_price({spot, strike, vol, tau, true});
        const double put = bs_price({spot, strike, vol, tau, false});
        CHECK(std::fabs(call - put - (spot - strike)) < 1e-12 * spot);
        const double call_up = bs_price({spot, strike, vol + 0.01, tau, true});
        CHECK(call_up >= call);
    }
}

TEST_CASE("bs_greeks reference values and zero loci") {
    const BsGreeks g = bs_greeks({100, 100, 0.2, 1.0, true});
    CHECK(std::fabs(g.vega - 39.695254747701177) < 1e-10);
    CHECK(g.d_minus == doctest::Approx(-0.1).epsilon(1e-14));
    CHECK(g.d_plus == doctest::Approx(0.1).epsilon(1e-14));

    // d_minus = 0 at K = S exp(-I^2 tau / 2): vanna vanishes.
    const double vol = 0.3, tau = 0.7, spot = 80.0;
    const double k_zero_vanna = spot * std::exp(-0.5 * vol * vol * tau);
    const BsGreeks gz = bs_greeks({spot, k_zero_vanna, vol, tau, true});
    CHECK(std::fabs(gz.d_minus) < 1e-14);
    CHECK(std::fabs(gz.vanna) < 1e-13);

    // d_plus = 0 at K = S exp(+I^2 tau / 2): volga vanishes.
    const double k_zero_volga = spot * std::exp(0.5 * vol * vol * tau);
    const BsGreeks gv = bs_greeks({spot, k_zero_volga, vol, tau, true});
    CHECK(std::fabs(gv.d_plus) < 1e-14);
    CHECK(std::fabs(gv.volga) < 1e-12);

    CHECK_THROWS_AS(bs_greeks({100, 100, 0.0, 1, true}), DegenerateInputError);
    CHECK_THROWS_AS(bs_greeks({100, 100, 0.2, 0, true}), DegenerateInputError);
}

TEST_CASE("vanna and d_minus share sign; finite-difference vega") {
    std::mt19937 eng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double spot = 100.0;
        const double vol = 0.05 + 1.0 * u(eng);
        const double tau = 0.1 + 3.0 * u(eng);
        const double strike =
            spot * std::exp((2.0 * u(eng) - 1.0) * 2.0 * vol * std::sqrt(tau));
        const BsGreeks g = bs_greeks({spot, strike, vol, tau, true});
        CHECK(g.vanna * g.d_minus <= 0.0);  // vanna = -N'(d+) d-/vol

        const double h = 1e-6;
        const double up = bs_price({spot, strike, vol + h, tau, true});
        const double dn = bs_price({spot, strike, vol - h, tau, true});
        const double fd_vega = (up - dn) / (2.0 * h);
        CHECK(std::fabs(fd_vega - g.vega) <= 1e-6 * std::fabs(g.vega) + 1e-9);
    }
}

TEST_CASE("implied_vol round trips") {
    const double p = bs_price({100, 100, 0.2, 1.0, true});
    CHECK(std::fabs(implied_vol(p, 100, 100, 1.0, true) - 0.2) < 1e-10);
    const double p2 = bs_price({100, 120, 0.35, 0.5, true});
    CHECK(std::fabs(implied_vol(p2, 100, 120, 0.5, true) - 0.35) < 1e-10);
    // exact intrinsic -> zero vol
    CHECK(implied_vol(20.0, 120, 100, 0.5, true) == 0.0);
    CHECK(implied_vol(0.0, 100, 120, 0.5, true) == 0.0);
    // puts go through parity
    const double put = bs_price({100, 90, 0.4, 2.0, false});
    CHECK(std::fabs(implied_vol(put, 100, 90, 2.0, false) - 0.4) < 1e-10);
}

TEST_CASE("implied_vol round-trip property over the supported box") {
    std::mt19937 eng(13);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 500; ++i) {
        const double vol = 0.01 + (2.0 - 0.01) * u(eng);
        const double tau = 1.0 / 365.0 + (5.0 - 1.0 / 365.0) * u(eng);
        const double m = (2.0 * u(eng) - 1.0) * 3.0 * vol * std::sqrt(tau);
        const double spot = 100.0;
        const double strike = spot * std::exp(-m);
        const bool is_call = u(eng) < 0.5;
        const double price = bs_price({spot, strike, vol, tau, is_call});
        if (price <= (is_call ? std::max(spot - strike, 0.0)
                              : std::max(strike - spot, 0.0))) {
            continue;  // numerically at intrinsic; inversion returns 0 there
        }
        const double iv = implied_vol(price, spot, strike, tau, is_call);
        CHECK(std::fabs(iv - vol) < 1e-10);
    }
}

TEST_CASE("implied_vol carries the violated bound") {
    try {
        implied_vol(120.0, 100, 100, 1.0, true);
        FAIL("expected InversionError");
    } catch (const InversionError& e) {
        CHECK(e.price() == 120.0);
        CHECK(e.lower_bound() == 0.0);
        CHECK(e.upper_bound() == 100.0);
    }
    try {
        implied_vol(5.0, 120, 100, 1.0, true);
        FAIL("expected InversionError");
    } catch (const InversionError& e) {
        CHECK(e.lower_bound() == doctest::Approx(20.0));
    }
    CHECK_THROWS_AS(implied_vol(5.0, 100, 100, 0.0, true), DomainError);
}
