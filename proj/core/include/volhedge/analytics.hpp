#pragma once

namespace volhedge {

// Vanilla option inputs under zero rates and dividends.
struct BsInputs {
    double spot = 0.0;
    double strike = 0.0;
    double vol = 0.0;   // annualized
    double tau = 0.0;   // year fraction to expiry
    bool is_call = true;
};

// Black-Scholes price S*N(d+) - K*N(d-) for calls, put via parity.
// Degenerates to intrinsic value when vol*sqrt(tau) == 0.
double bs_price(const BsInputs& in);

struct BsGreeks {
    double delta = 0.0;  // N(d+)
    double vega = 0.0;   // S sqrt(tau) N'(d+)
    double vanna = 0.0;  // -N'(d+) d- / vol
    double volga = 0.0;  // S sqrt(tau) N'(d+) d+ d- / vol
    double d_plus = 0.0;
    double d_minus = 0.0;
};

// Requires vol > 0 and tau > 0; throws DegenerateInputError otherwise.
BsGreeks bs_greeks(const BsInputs& in);

// Inverts the Black-Scholes price to an implied volatility with a bracketed,
// bisection-safeguarded Newton in total volatility. Converges to 1e-13
// absolute in price or 1e-10 in vol, whichever binds first. A price exactly
// at intrinsic returns 0; a price outside (intrinsic, upper bound) throws
// InversionError carrying the violated bound.
double implied_vol(double price, double spot, double strike, double tau,
                   bool is_call);

}  // namespace volhedge
