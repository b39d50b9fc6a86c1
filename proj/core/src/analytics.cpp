#include "volhedge/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "volhedge/errors.hpp"
#include "volhedge/math.hpp"

namespace volhedge {

namespace {

void validate_bs_inputs(const BsInputs& in) {
    if (!std::isfinite(in.spot) || !std::isfinite(in.strike) ||
        !std::isfinite(in.vol) || !std::isfinite(in.tau)) {
        throw DomainError("bs inputs must be finite");
    }
    if (in.spot <= 0.0 || in.strike <= 0.0) {
        throw DomainError("spot and strike must be strictly positive");
    }
    if (in.vol < 0.0 || in.tau < 0.0) {
        throw DomainError("vol and tau must be non-negative");
    }
}

// Call price as a function of total volatility s = vol*sqrt(tau).
double call_price_total(double spot, double strike, double s) {
    if (s <= 0.0) return std::max(spot - strike, 0.0);
    const double m = std::log(spot / strike);
    const double d_minus = m / s - 0.5 * s;
    const double d_plus = d_minus + s;
    const double price = spot * norm_cdf(d_plus) - strike * norm_cdf(d_minus);
    return std::max(price, std::max(spot - strike, 0.0));
}

}  // namespace

double bs_price(const BsInputs& in) {
    validate_bs_inputs(in);
    const double s = in.vol * std::sqrt(in.tau);
    const double call = call_price_total(in.spot, in.strike, s);
    if (in.is_call) return call;
    // Put-call parity under zero rates.
    const double put = call - in.spot + in.strike;
    return std::max(put, std::max(in.strike - in.spot, 0.0));
}

BsGreeks bs_greeks(const BsInputs& in) {
    validate_bs_inputs(in);
    if (in.vol <= 0.0 || in.tau <= 0.0) {
        throw DegenerateInputError("bs_greeks requires vol > 0 and tau > 0");
    }
    const double sqrt_tau = std::sqrt(in.tau);
    const double s = in.vol * sqrt_tau;
    const double m = std::log(in.spot / in.strike);
    BsGreeks g;
    g.d_minus = m / s - 0.5 * s;
    g.d_plus = g.d_minus + s;
    const double pdf = norm_pdf(g.d_plus);
    g.delta = norm_cdf(g.d_plus);
    g.vega = in.spot * sqrt_tau * pdf;
    g.vanna = -pdf * g.d_minus / in.vol;
    g.volga = in.spot * sqrt_tau * pdf * g.d_plus * g.d_minus / in.vol;
    return g;
}

double implied_vol(double price, double spot, double strike, double tau,
                   bool is_call) {
    if (!std::isfinite(price) || !std::isfinite(spot) || !std::isfinite(strike) ||
        !std::isfinite(tau)) {
        throw DomainError("implied_vol inputs must be finite");
    }
    if (spot <= 0.0 || strike <= 0.0 || tau <= 0.0) {
        throw DomainError("implied_vol requires spot, strike, tau > 0");
    }
    // Work on the equivalent call; report bounds in the caller's option type.
    const double call = is_call ? price : price + spot - strike;
    const double intrinsic = std::max(spot - strike, 0.0);
    const double lower_in = is_call ? intrinsic : std::max(strike - spot, 0.0);
    const double upper_in = is_call ? spot : strike;
    if (call < intrinsic) {
        throw InversionError("price below intrinsic bound", price, lower_in,
                             upper_in);
    }
    if (call >= spot) {
        throw InversionError("price at or above upper no-arbitrage bound", price,
                             lower_in, upper_in);
    }
    if (call == intrinsic) return 0.0;

    const double m = std::log(spot / strike);
    const auto f = [&](double s) { return call_price_total(spot, strike, s) - call; };

    // Bracket in total vol. The vega-max point sqrt(2|m|) is the classic
    // total-variance initializer; expand upward until the price is enclosed.
    double lo = 0.0;
    double hi = std::max(std::sqrt(2.0 * std::fabs(m)), 0.5);
    int guard = 0;
    while (f(hi) < 0.0) {
        hi *= 2.0;
        if (++guard > 200) {
            throw InversionError("failed to bracket implied vol", price, lower_in,
                                 upper_in);
        }
    }

    const double price_tol = 1e-13 * std::max(1.0, spot);
    const double s_tol = 0.5e-10 * std::sqrt(tau);
    double s = std::clamp(std::sqrt(2.0 * std::fabs(m)), 0.25 * hi, 0.75 * hi);
    if (!(s > lo && s < hi)) s = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double fs = f(s);
        if (std::fabs(fs) <= price_tol) break;
        if (fs > 0.0) {
            hi = s;
        } else {
            lo = s;
        }
        if (hi - lo <= s_tol) break;
        const double d_plus = m / s + 0.5 * s;
        const double vega_s = spot * norm_pdf(d_plus);
        double next = (vega_s > 1e-300) ? s - fs / vega_s : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        s = next;
    }
    return s / std::sqrt(tau);
}

}  // namespace volhedge
